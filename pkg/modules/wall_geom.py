"""
墙几何查询
行、列、砖块、外圈, 顶点对与砖块对的 d-apart 关系, 以及远离边对的选取

d-apart: u, v 之间的每条路径, 以及从 u 或 v 到外圈 C 的每条路径, 都至少
经过 d+1 行或 d+1 列。单顶点路径也计入, 因此外圈上的顶点与任何顶点都只是 0-apart。
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from modules.core.exceptions import (
    InvalidParameter, NoSuchPair, NotAPath, SameBrick, UnknownBrick, UnknownVertex,
)
from modules.graph_core import Edge, Graph
from modules.utils import get_logger

logger = get_logger(__name__)


class WallKind(str, Enum):
    ELEMENTARY = "elementary"
    PRIME = "prime"


@dataclass(frozen=True)
class Wall:
    """带几何索引的墙 (基本墙或 wall')

    rows / columns 是按位置排序的顶点序列, 每个都是图中的路径;
    bricks[k] 是按环序排列的砖块顶点; outercycle 是外圈的环序。
    """
    graph: Graph
    rows: Tuple[Tuple[int, ...], ...]
    columns: Tuple[Tuple[int, ...], ...]
    bricks: Tuple[Tuple[int, ...], ...]
    outercycle: Tuple[int, ...]
    kind: WallKind
    size: Tuple[int, int]
    row_of: Dict[int, int] = field(default_factory=dict, init=False, repr=False, compare=False)
    col_of: Dict[int, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        row_of = {v: i for i, row in enumerate(self.rows) for v in row}
        col_of = {v: k for k, col in enumerate(self.columns) for v in col}
        object.__setattr__(self, "row_of", row_of)
        object.__setattr__(self, "col_of", col_of)

    @property
    def cycle_set(self) -> FrozenSet[int]:
        return frozenset(self.outercycle)

    def proper_branch_vertices(self) -> List[int]:
        """度为3的分支顶点"""
        return [v for v in self.graph.vertices if self.graph.degree(v) == 3]

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind.value,
            "size": list(self.size),
            "rows": [list(r) for r in self.rows],
            "columns": [list(c) for c in self.columns],
            "bricks": [list(b) for b in self.bricks],
            "outercycle": list(self.outercycle),
        }

    @classmethod
    def from_dict(cls, graph: Graph, data: Mapping[str, object]) -> "Wall":
        return cls(
            graph=graph,
            rows=tuple(tuple(r) for r in data["rows"]),
            columns=tuple(tuple(c) for c in data["columns"]),
            bricks=tuple(tuple(b) for b in data["bricks"]),
            outercycle=tuple(data["outercycle"]),
            kind=WallKind(data["kind"]),
            size=tuple(data["size"]),
        )

# ===================================
# 行列计数
# ===================================


def _check_path(w: Wall, p: Sequence[int]) -> None:
    if not w.graph.is_path(list(p)):
        raise NotAPath(p)


def rows_met(w: Wall, p: Sequence[int]) -> int:
    """路径经过的不同行数"""
    _check_path(w, p)
    return len({w.row_of[v] for v in p if v in w.row_of})


def cols_met(w: Wall, p: Sequence[int]) -> int:
    """路径经过的不同列数"""
    _check_path(w, p)
    return len({w.col_of[v] for v in p if v in w.col_of})

# ===================================
# 有上限的状态空间搜索
# ===================================


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class _Geometry:
    """搜索所在的图, 以及每个顶点贡献的行/列位"""
    graph: Graph
    row_bit: Tuple[int, ...]
    col_bit: Tuple[int, ...]
    cycle: FrozenSet[int]
    limit: int
    to_wall: Mapping[int, int]


def _geometry(w: Wall, host: Optional[Graph] = None,
              embedding: Optional[Mapping[int, int]] = None) -> _Geometry:
    if host is None:
        g = w.graph
        to_wall = {v: v for v in g.vertices}
    else:
        if embedding is None:
            raise InvalidParameter("宿主图变体需要墙顶点到宿主顶点的映射")
        g = host
        to_wall = {hv: wv for wv, hv in embedding.items()}
    row_bit = [0] * g.n
    col_bit = [0] * g.n
    for x, wv in to_wall.items():
        if wv in w.row_of:
            row_bit[x] = 1 << w.row_of[wv]
        if wv in w.col_of:
            col_bit[x] = 1 << w.col_of[wv]
    cycle = frozenset(embedding[v] for v in w.outercycle) if host is not None else w.cycle_set
    limit = max(len(w.rows), len(w.columns))
    return _Geometry(g, tuple(row_bit), tuple(col_bit), cycle, limit, to_wall)


def _loop_erase(walk: List[int]) -> List[int]:
    """去掉游走中的环, 得到顶点集合更小的路径"""
    out: List[int] = []
    pos: Dict[int, int] = {}
    for v in walk:
        if v in pos:
            cut = pos[v]
            for x in out[cut + 1:]:
                del pos[x]
            out = out[:cut + 1]
        else:
            pos[v] = len(out)
            out.append(v)
    return out


def _bounded_walk(geom: _Geometry, source: int, targets: Set[int], cap: int) -> Optional[List[int]]:
    """在 (顶点, 行集, 列集) 上做 BFS, 两个集合的大小都不超过 cap;
    返回到达 targets 的一条路径, 不存在时返回 None
    """
    rb, cb = geom.row_bit, geom.col_bit
    start = (source, rb[source], cb[source])
    if _popcount(start[1]) > cap or _popcount(start[2]) > cap:
        return None
    if source in targets:
        return [source]
    parent: Dict[Tuple[int, int, int], Optional[Tuple[int, int, int]]] = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        x, rm, cm = state
        for y in geom.graph.neighbours(x):
            nr, nc = rm | rb[y], cm | cb[y]
            if _popcount(nr) > cap or _popcount(nc) > cap:
                continue
            nxt = (y, nr, nc)
            if nxt in parent:
                continue
            parent[nxt] = state
            if y in targets:
                walk = []
                cur: Optional[Tuple[int, int, int]] = nxt
                while cur is not None:
                    walk.append(cur[0])
                    cur = parent[cur]
                return _loop_erase(walk[::-1])
            queue.append(nxt)
    return None


def _min_cap(geom: _Geometry, source: int, targets: Set[int]) -> Tuple[int, Optional[List[int]]]:
    """最小的 cap 使得存在 max(行数, 列数) <= cap 的路径"""
    for cap in range(1, geom.limit + 1):
        walk = _bounded_walk(geom, source, targets, cap)
        if walk is not None:
            return cap, walk
    return geom.limit, None


@dataclass(frozen=True)
class ApartnessResult:
    """apartness 的值以及证明上界的路径"""
    u: int
    v: int
    apartness: int
    witness: Optional[Tuple[int, ...]]
    witness_rows: int
    witness_cols: int

    def to_dict(self) -> Dict[str, object]:
        return {
            "u": self.u,
            "v": self.v,
            "apartness": self.apartness,
            "witness_path_if_bounded": list(self.witness) if self.witness is not None else None,
        }


def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.n:
        raise UnknownVertex(v)


def apartness_witness(w: Wall, u: int, v: int, host: Optional[Graph] = None,
                      embedding: Optional[Mapping[int, int]] = None) -> ApartnessResult:
    """u, v 是 d-apart 的最大 d, 附带一条只经过 d+1 行和 d+1 列的路径

    host/embedding 给出宿主图变体: 路径在宿主图中走, 行列只在墙顶点上计数。
    """
    _check_vertex(w.graph, u)
    _check_vertex(w.graph, v)
    if u == v:
        raise InvalidParameter("apartness 要求 u != v", context={"u": u})
    geom = _geometry(w, host, embedding)
    su = embedding[u] if host is not None else u
    sv = embedding[v] if host is not None else v

    cap_u, walk_u = _min_cap(geom, su, set(geom.cycle) | {sv})
    cap_v, walk_v = _min_cap(geom, sv, set(geom.cycle))
    cap, walk = (cap_u, walk_u) if cap_u <= cap_v else (cap_v, walk_v)

    rows = cols = 0
    if walk is not None:
        rows = _popcount(_mask(geom.row_bit, walk))
        cols = _popcount(_mask(geom.col_bit, walk))
    logger.debug(f"apartness({u},{v}) = {cap - 1}")
    return ApartnessResult(u, v, cap - 1, tuple(walk) if walk is not None else None, rows, cols)


def _mask(bits: Sequence[int], walk: Iterable[int]) -> int:
    m = 0
    for x in walk:
        m |= bits[x]
    return m


def apartness(w: Wall, u: int, v: int, host: Optional[Graph] = None,
              embedding: Optional[Mapping[int, int]] = None) -> int:
    """u, v 是 d-apart 的最大 d"""
    return apartness_witness(w, u, v, host, embedding).apartness


def escape_value(w: Wall, v: int) -> int:
    """v 到外圈的每条路径都至少经过 d+1 行或 d+1 列的最大 d"""
    _check_vertex(w.graph, v)
    geom = _geometry(w)
    return _min_cap(geom, v, set(geom.cycle))[0] - 1


class _ApartOracle:
    """固定 d 的判定缓存: 顶点到外圈, 以及顶点对之间"""

    def __init__(self, w: Wall, d: int):
        self.geom = _geometry(w)
        self.d = d
        self._vertex: Dict[int, bool] = {}
        self._pair: Dict[FrozenSet[int], bool] = {}

    def vertex_far(self, x: int) -> bool:
        if x not in self._vertex:
            self._vertex[x] = _bounded_walk(self.geom, x, set(self.geom.cycle), self.d) is None
        return self._vertex[x]

    def apart(self, x: int, y: int) -> bool:
        if x == y:
            return self.d <= 0
        key = frozenset((x, y))
        if key not in self._pair:
            ok = self.vertex_far(x) and self.vertex_far(y) and \
                _bounded_walk(self.geom, x, {y}, self.d) is None
            self._pair[key] = ok
        return self._pair[key]


def is_apart(w: Wall, u: int, v: int, d: int) -> bool:
    """u, v 是否 d-apart (判定版本, 只搜索 cap = d)"""
    _check_vertex(w.graph, u)
    _check_vertex(w.graph, v)
    return _ApartOracle(w, d).apart(u, v)

# ===================================
# 砖块
# ===================================


def bricks_containing(w: Wall, v: int) -> List[int]:
    """包含顶点 v 的砖块编号"""
    return [k for k, brick in enumerate(w.bricks) if v in brick]


def bricks_apart(w: Wall, b1: int, b2: int, d: int) -> bool:
    """两个砖块的每一对顶点 (x in b1, y in b2) 都 d-apart"""
    for b in (b1, b2):
        if not 0 <= b < len(w.bricks):
            raise UnknownBrick(b)
    if b1 == b2:
        raise SameBrick(b1)
    oracle = _ApartOracle(w, d)
    return all(oracle.apart(x, y) for x in w.bricks[b1] for y in w.bricks[b2])

# ===================================
# 远离的边对
# ===================================


def select_far_edge_pair(w: Wall, d: int) -> Tuple[Edge, Edge]:
    """按 (a, c, b, d) 字典序返回第一对边 (a,b), (c,d):
    a, c 是度为3的分支顶点, 四个端点互不相同, 所有跨边端点对都 d-apart

    Raises:
        NoSuchPair: 墙太小
    """
    if d < 0:
        raise InvalidParameter("d 不能为负数", context={"d": d})
    oracle = _ApartOracle(w, d)
    g = w.graph
    proper = [v for v in w.proper_branch_vertices() if oracle.vertex_far(v)]
    for a in proper:
        for c in proper:
            if c == a or not oracle.apart(a, c):
                continue
            for b in g.neighbours(a):
                if b == c or not oracle.apart(b, c):
                    continue
                for dd in g.neighbours(c):
                    if dd in (a, b):
                        continue
                    if oracle.apart(a, dd) and oracle.apart(b, dd):
                        logger.info(f"选中边对 e1=({a},{b}) e2=({c},{dd}), d={d}")
                        return (a, b), (c, dd)
    raise NoSuchPair(d)
