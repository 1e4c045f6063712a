"""
构件生成器
Heinlein 墙、基本网格与基本墙、wall'、边倍增变换, 以及反例图 Z

所有生成器都是确定性的纯函数, 顶点编号约定见各函数说明。
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from modules.core.exceptions import (
    BadDesignation, BadIncidence, Degenerate, DegenerateContraction,
    EdgesNotFarApart, InvalidSize, MalformedGraphFile, NotSubcubic, UnknownEdge,
)
from modules.graph_core import (
    Edge, Embedding, Graph, Role, RoleLabel, build_graph, decode_json,
    delete_vertices, encode_json, norm_edge, suppress_degree_two_mapped, terminal,
)
from modules.utils import get_logger
from modules.wall_geom import Wall, WallKind, apartness, is_apart

logger = get_logger(__name__)

# ===================================
# 带端点的构件
# ===================================


@dataclass(frozen=True)
class TerminalGadget:
    """带四个端点 a*, b*, c*, d* 的构件"""
    graph: Graph
    terminals: Tuple[int, int, int, int]
    kind: str = "custom"

    @property
    def a(self) -> int:
        return self.terminals[0]

    @property
    def b(self) -> int:
        return self.terminals[1]

    @property
    def c(self) -> int:
        return self.terminals[2]

    @property
    def d(self) -> int:
        return self.terminals[3]

    def interior(self) -> List[int]:
        """去掉四个端点后的顶点 (W⁰)"""
        ends = set(self.terminals)
        return [v for v in self.graph.vertices if v not in ends]


@dataclass(frozen=True)
class HeinleinWall(TerminalGadget):
    """大小为 r 的 Heinlein 墙

    编号: a* = 0, b* = 1, z_j = 2 + j (j = 0..r), 之后按 (j, i) 顺序排列 u^j_i;
    c* = z_0, d* = z_r。路径下标 j 与位置下标 i 从 1 开始。
    """
    size: int = 0
    bottlenecks: Tuple[int, ...] = ()
    path_vertices: Mapping[Tuple[int, int], int] = field(default_factory=dict, compare=False)

    def path(self, j: int) -> List[int]:
        """路径 P^j = u^j_1 ... u^j_{2r}"""
        return [self.path_vertices[(j, i)] for i in range(1, 2 * self.size + 1)]


def path_vertex_id(r: int, j: int, i: int) -> int:
    return r + 3 + (j - 1) * 2 * r + (i - 1)


def heinlein_wall(r: int) -> HeinleinWall:
    """大小为 r 的 Heinlein 墙: |V| = 2r²+r+3, |E| = 4r²+2r"""
    if not isinstance(r, int) or r < 1:
        raise InvalidSize(f"Heinlein 墙的大小必须 >= 1, 当前为 {r}", context={"r": r})

    a_star, b_star = 0, 1
    z = [2 + j for j in range(r + 1)]
    u = {(j, i): path_vertex_id(r, j, i) for j in range(1, r + 1) for i in range(1, 2 * r + 1)}

    edges: List[Edge] = []
    for j in range(1, r + 1):
        for i in range(1, 2 * r):
            edges.append((u[(j, i)], u[(j, i + 1)]))
        for i in range(1, r + 1):
            edges.append((z[j - 1], u[(j, 2 * i - 1)]))
            edges.append((z[j], u[(j, 2 * i)]))
        edges.append((a_star, u[(j, 1)]))
        edges.append((b_star, u[(j, 2 * r)]))
    for j in range(1, r + 1):
        edges.append((z[j - 1], z[j]))

    labels: Dict[int, RoleLabel] = {a_star: terminal("a"), b_star: terminal("b")}
    for j, zj in enumerate(z):
        labels[zj] = RoleLabel(Role.BOTTLENECK, (j,))
    for (j, i), v in u.items():
        labels[v] = RoleLabel(Role.PATH_VERTEX, (j, i))

    graph = build_graph(edges, labels, n=2 * r * r + r + 3)
    return HeinleinWall(graph, (a_star, b_star, z[0], z[r]), "heinlein", r, tuple(z), u)


def crossed_paths_gadget() -> TerminalGadget:
    """对照构件: 两条不相交的端点路径 a*-x-d* 与 b*-y-c*, 不含任何 (a*-b*, c*-d*) 连接"""
    labels = {0: terminal("a"), 1: terminal("b"), 2: terminal("c"), 3: terminal("d")}
    graph = build_graph([(0, 4), (4, 3), (1, 5), (5, 2)], labels, n=6)
    return TerminalGadget(graph, (0, 1, 2, 3), "crossed")


def gadget_from_graph(g: Graph) -> TerminalGadget:
    """从带标签的图恢复端点: TerminalA..D, 缺少 c*/d* 时取编号最小/最大的瓶颈顶点"""
    found = {lab.role: v for v, lab in g.labels.items()}
    bottlenecks = sorted((lab.index[0], v) for v, lab in g.labels.items() if lab.role == Role.BOTTLENECK)
    try:
        a_star = found[Role.TERMINAL_A]
        b_star = found[Role.TERMINAL_B]
        c_star = found.get(Role.TERMINAL_C, bottlenecks[0][1] if bottlenecks else None)
        d_star = found.get(Role.TERMINAL_D, bottlenecks[-1][1] if bottlenecks else None)
    except KeyError as e:
        raise MalformedGraphFile("图中缺少端点标签 TerminalA/TerminalB", cause=e)
    if c_star is None or d_star is None:
        raise MalformedGraphFile("图中缺少端点标签 TerminalC/TerminalD")
    return TerminalGadget(g, (a_star, b_star, c_star, d_star))

# ===================================
# 网格与墙
# ===================================


def elementary_grid(m: int, n: int) -> Graph:
    """m×n 基本网格, v_{i,j} 的编号为 i*n + j"""
    if m < 1 or n < 1:
        raise InvalidSize(f"网格大小必须为正: {m}x{n}", context={"m": m, "n": n})
    edges = []
    for i in range(m):
        for j in range(n):
            if j + 1 < n:
                edges.append((i * n + j, i * n + j + 1))
            if i + 1 < m:
                edges.append((i * n + j, (i + 1) * n + j))
    labels = {i * n + j: RoleLabel(Role.WALL_BRANCH, (i, j)) for i in range(m) for j in range(n)}
    return build_graph(edges, labels, n=m * n)


def _column_coords(m: int, k: int) -> List[Tuple[int, int]]:
    coords = [(0, 2 * k)]
    for i in range(1, m):
        coords.append((i, 2 * k + (i - 1) % 2))
        coords.append((i, 2 * k + i % 2))
    coords.append((m, 2 * k + (m - 1) % 2))
    return coords


def _brick_coords(i: int, j: int) -> List[Tuple[int, int]]:
    s = i % 2
    return [(i, s + 2 * j), (i, s + 2 * j + 1), (i, s + 2 * j + 2),
            (i + 1, s + 2 * j + 2), (i + 1, s + 2 * j + 1), (i + 1, s + 2 * j)]


def elementary_wall(m: int, n: int) -> Wall:
    """m×n 基本墙: (m+1)×(2n+2) 网格去掉一半竖边, 再反复删去度为1的顶点

    行 i 与 i+1 之间保留位置奇偶性等于 i%2 的竖边。顶点按 (行, 位置) 顺序编号,
    标签为 WallBranch(行, 位置)。
    """
    if m < 1 or n < 1:
        raise InvalidSize(f"墙的大小必须为正: {m}x{n}", context={"m": m, "n": n})
    width = 2 * n + 2
    alive = {(i, p) for i in range(m + 1) for p in range(width)}
    adj: Dict[Tuple[int, int], set] = {x: set() for x in alive}
    for i in range(m + 1):
        for p in range(width):
            if p + 1 < width:
                adj[(i, p)].add((i, p + 1))
                adj[(i, p + 1)].add((i, p))
            if i < m and p % 2 == i % 2:
                adj[(i, p)].add((i + 1, p))
                adj[(i + 1, p)].add((i, p))

    removed = []
    pending = [x for x in sorted(alive) if len(adj[x]) == 1]
    while pending:
        x = pending.pop()
        if x not in alive or len(adj[x]) != 1:
            continue
        (y,) = adj[x]
        adj[y].discard(x)
        adj[x].clear()
        alive.discard(x)
        removed.append(x)
        if len(adj[y]) == 1:
            pending.append(y)
    expected = {(0, 2 * n + 1), (m, 2 * n + 1) if m % 2 == 1 else (m, 0)}
    assert set(removed) == expected and len(removed) == 2, f"度1修剪结果异常: {removed}"

    coords = sorted(alive)
    index = {x: i for i, x in enumerate(coords)}
    edges = [(index[x], index[y]) for x in coords for y in adj[x] if x < y]
    labels = {index[x]: RoleLabel(Role.WALL_BRANCH, x) for x in coords}
    graph = build_graph(edges, labels, n=len(coords))

    rows = tuple(tuple(index[(i, p)] for p in range(width) if (i, p) in index) for i in range(m + 1))
    columns = tuple(tuple(index[x] for x in _column_coords(m, k)) for k in range(n + 1))
    bricks = tuple(tuple(index[x] for x in _brick_coords(i, j)) for i in range(m) for j in range(n))
    outer = list(rows[0]) + list(columns[n][1:]) + list(rows[m][::-1][1:]) + list(columns[0][::-1][1:-1])
    return Wall(graph, rows, columns, bricks, tuple(outer), WallKind.ELEMENTARY, (m, n))


def wall_prime(m: int, n: int) -> Wall:
    """m×n 的 wall': 基本墙收缩所有度为2的顶点, 几何索引取原行/列/砖块/外圈中的幸存顶点

    Raises:
        Degenerate: 收缩会产生重边 (1×1, 以及 m 或 n 为 1 的情形)
    """
    if (m, n) == (1, 1):
        raise Degenerate("1x1 的 wall' 退化: 六个顶点的度都是2", context={"m": m, "n": n})
    base = elementary_wall(m, n)
    try:
        graph, kept = suppress_degree_two_mapped(base.graph)
    except DegenerateContraction as e:
        raise Degenerate(f"{m}x{n} 的 wall' 退化: 收缩产生重边", context={"m": m, "n": n}, cause=e)
    new = {old: i for i, old in enumerate(kept)}

    def survivors(seq: Sequence[int]) -> Tuple[int, ...]:
        return tuple(new[v] for v in seq if v in new)

    return Wall(
        graph,
        tuple(survivors(r) for r in base.rows),
        tuple(survivors(c) for c in base.columns),
        tuple(survivors(b) for b in base.bricks),
        survivors(base.outercycle),
        WallKind.PRIME,
        (m, n),
    )


def make_wall(kind: str, m: int, n: int) -> Wall:
    return wall_prime(m, n) if WallKind(kind) == WallKind.PRIME else elementary_wall(m, n)


def multiply_edge(g: Graph, e: Sequence[int], k: int) -> Graph:
    """删去边 e, 加入 k 个与 e 两端都相邻的 Midpoint 顶点"""
    key = norm_edge(int(e[0]), int(e[1]))
    if key not in g.edges:
        raise UnknownEdge(key)
    if k < 1:
        raise InvalidSize(f"倍增次数必须 >= 1, 当前为 {k}", context={"k": k})
    edges = set(g.edges) - {key}
    labels = dict(g.labels)
    for copy in range(k):
        mid = g.n + copy
        edges.add(norm_edge(key[0], mid))
        edges.add(norm_edge(mid, key[1]))
        labels[mid] = RoleLabel(Role.MIDPOINT, (key[0], key[1], copy))
    return build_graph(edges, labels, n=g.n + k)

# ===================================
# 墙在 H 中的指定
# ===================================


@dataclass(frozen=True)
class WallDesignation:
    """H 中指定的 wall' M: vertex_map[墙顶点] = H 顶点, 墙的每条边都是 H 的边"""
    wall: Wall
    vertex_map: Tuple[int, ...]

    def validate(self, h: Graph) -> None:
        if len(self.vertex_map) != self.wall.graph.n:
            raise BadDesignation("顶点映射长度与墙的顶点数不符")
        if len(set(self.vertex_map)) != len(self.vertex_map):
            raise BadDesignation("顶点映射不是单射")
        if any(not 0 <= x < h.n for x in self.vertex_map):
            raise BadDesignation("顶点映射超出 H 的顶点范围")
        for x, y in self.wall.graph.edges:
            if not h.has_edge(self.vertex_map[x], self.vertex_map[y]):
                raise BadDesignation(f"墙边 {(x, y)} 的像不是 H 的边")

    def inverse(self) -> Dict[int, int]:
        return {hv: wv for wv, hv in enumerate(self.vertex_map)}

    def proper_branch_vertices(self) -> List[int]:
        """M 的度3分支顶点在 H 中的像"""
        return sorted(self.vertex_map[v] for v in self.wall.proper_branch_vertices())

    def to_dict(self) -> Dict[str, object]:
        return {"kind": self.wall.kind.value, "size": list(self.wall.size),
                "vertex_map": list(self.vertex_map)}

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "WallDesignation":
        m, n = data["size"]
        return cls(make_wall(data["kind"], int(m), int(n)), tuple(int(x) for x in data["vertex_map"]))


def designate_whole(w: Wall) -> WallDesignation:
    """H 就是墙本身时的恒等指定"""
    return WallDesignation(w, tuple(w.graph.vertices))

# ===================================
# 反例图 Z
# ===================================


@dataclass(frozen=True)
class CounterexampleInstance:
    """反例图 Z 及其全部指定信息

    Z 的编号: 先是 H 的顶点 (star_map 为恒等), 然后按边排序每条边 2r 个中点,
    最后是构件的非端点顶点。
    """
    z: Graph
    pattern: Graph
    star_map: Tuple[int, ...]
    gadget: TerminalGadget
    gadget_map: Tuple[int, ...]
    designation: WallDesignation
    m_star: Embedding
    r: int
    e1: Edge
    e2: Edge
    bundles: Mapping[Edge, Tuple[int, ...]] = field(default_factory=dict, compare=False)
    min_apart: int = 0

    @property
    def wall(self) -> TerminalGadget:
        return self.gadget

    def terminals(self) -> Tuple[int, int, int, int]:
        """Z 中的 a*, b*, c*, d*"""
        return tuple(self.gadget_map[t] for t in self.gadget.terminals)

    def w_zero(self) -> List[int]:
        """Z 中 W⁰ 的顶点"""
        return sorted(self.gadget_map[v] for v in self.gadget.interior())

    def gadget_edges(self) -> frozenset:
        """构件边在 Z 中的像"""
        return frozenset(norm_edge(self.gadget_map[x], self.gadget_map[y]) for x, y in self.gadget.graph.edges)

    def to_gadget_coords(self) -> Dict[int, int]:
        return {zv: gv for gv, zv in enumerate(self.gadget_map)}

    def m_star_pattern(self) -> Graph:
        """M - {e1, e2}, 以墙顶点编号"""
        inv = self.designation.inverse()
        drop = {norm_edge(inv[self.e1[0]], inv[self.e1[1]]), norm_edge(inv[self.e2[0]], inv[self.e2[1]])}
        w = self.designation.wall.graph
        return Graph(w.n, w.edges - drop, w.labels)

    def to_dict(self) -> Dict[str, object]:
        gadget: Dict[str, object] = {"kind": self.gadget.kind}
        if isinstance(self.gadget, HeinleinWall):
            gadget["size"] = self.gadget.size
        return {
            "r": self.r,
            "e1": list(self.e1),
            "e2": list(self.e2),
            "min_apart": self.min_apart,
            "pattern": _graph_dict(self.pattern),
            "designation": self.designation.to_dict(),
            "gadget": gadget,
            "star_map": list(self.star_map),
            "gadget_map": list(self.gadget_map),
            "bundles": [[list(e), list(mids)] for e, mids in sorted(self.bundles.items())],
            "m_star": self.m_star.to_dict(),
            "z": _graph_dict(self.z),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "CounterexampleInstance":
        """从边车文件重建实例; 重新构造并核对 Z"""
        try:
            pattern = decode_json(data["pattern"])
            designation = WallDesignation.from_dict(data["designation"])
            gadget_info = data["gadget"]
            if gadget_info["kind"] == "heinlein":
                gadget: Optional[TerminalGadget] = None
            elif gadget_info["kind"] == "crossed":
                gadget = crossed_paths_gadget()
            else:
                raise MalformedGraphFile(f"未知构件类型: {gadget_info['kind']}")
            inst = build_z(pattern, designation, tuple(data["e1"]), tuple(data["e2"]),
                           int(data["r"]), int(data.get("min_apart", 0)), gadget=gadget)
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedGraphFile("实例边车文件格式错误", cause=e)
        if "z" in data and decode_json(data["z"]) != inst.z:
            raise MalformedGraphFile("边车文件中的 Z 与重建结果不一致")
        return inst


def _graph_dict(g: Graph) -> Dict[str, object]:
    return json.loads(encode_json(g, indent=None))


def _orient(edge: Sequence[int], wall_vertex: Mapping[int, int], w: Wall, name: str) -> Tuple[int, int]:
    """把边定向为 (度3分支顶点, 另一端)"""
    x, y = int(edge[0]), int(edge[1])
    for first, second in ((x, y), (y, x)):
        if w.graph.degree(wall_vertex[first]) == 3:
            return first, second
    raise BadIncidence(f"{name}={tuple(edge)} 不与 M 的度3分支顶点关联", context={name: [x, y]})


def build_z(h: Graph, m_designation: WallDesignation, e1: Sequence[int], e2: Sequence[int],
            r: int, min_apart: int = 70, gadget: Optional[TerminalGadget] = None) -> CounterexampleInstance:
    """构造反例图 Z

    H-{e1,e2} 的每条边倍增为 2r 条长度为2的路径, 再加入大小为 2r 的 Heinlein 墙
    (或给定的对照构件), 其端点 a*, b* 与 e1 的端点、c*, d* 与 e2 的端点重合。
    |V(Z)| = |V(H)| + 2r(|E(H)|-2) + 8r² + 2r - 1。
    """
    if not isinstance(r, int) or r < 1:
        raise InvalidSize(f"r 必须 >= 1, 当前为 {r}", context={"r": r})
    if min_apart < 0:
        raise InvalidSize(f"min_apart 不能为负数: {min_apart}")
    for v in h.vertices:
        if h.degree(v) > 3:
            raise NotSubcubic(v, h.degree(v))
    m_designation.validate(h)

    keys = []
    for name, e in (("e1", e1), ("e2", e2)):
        key = norm_edge(int(e[0]), int(e[1]))
        if key not in h.edges:
            raise UnknownEdge(key)
        keys.append(key)
    if set(keys[0]) & set(keys[1]):
        raise BadIncidence("e1 与 e2 必须不相交", context={"e1": list(e1), "e2": list(e2)})

    w = m_designation.wall
    inv = m_designation.inverse()
    for name, e in (("e1", keys[0]), ("e2", keys[1])):
        if e[0] not in inv or e[1] not in inv or not w.graph.has_edge(inv[e[0]], inv[e[1]]):
            raise BadIncidence(f"{name}={e} 不是指定墙 M 的边", context={name: list(e)})
    a, b = _orient(e1, inv, w, "e1")
    c, d = _orient(e2, inv, w, "e2")

    for x in (a, b):
        for y in (c, d):
            if not is_apart(w, inv[x], inv[y], min_apart):
                value = apartness(w, inv[x], inv[y])
                raise EdgesNotFarApart((x, y), value, min_apart)

    # 1. H - {e1, e2} 的副本, 每条边倍增为 2r 条长度为2的路径
    labels: Dict[int, RoleLabel] = dict(h.labels)
    edges: set = set()
    bundles: Dict[Edge, Tuple[int, ...]] = {}
    nxt = h.n
    for g0, h0 in sorted(h.edges - set(keys)):
        mids = tuple(range(nxt, nxt + 2 * r))
        for copy, mid in enumerate(mids):
            edges.add(norm_edge(g0, mid))
            edges.add(norm_edge(mid, h0))
            labels[mid] = RoleLabel(Role.MIDPOINT, (g0, h0, copy))
        bundles[(g0, h0)] = mids
        nxt += 2 * r

    # 2. 加入构件, 端点与 e1、e2 的端点重合
    if gadget is None:
        gadget = heinlein_wall(2 * r)
    gmap = [-1] * gadget.graph.n
    for t, host in zip(gadget.terminals, (a, b, c, d)):
        gmap[t] = host
    for v in gadget.graph.vertices:
        if gmap[v] < 0:
            gmap[v] = nxt
            labels[nxt] = gadget.graph.label(v)
            nxt += 1
    for x, y in gadget.graph.edges:
        edges.add(norm_edge(gmap[x], gmap[y]))
    for host, which in zip((a, b, c, d), "abcd"):
        labels[host] = terminal(which)

    z = build_graph(edges, labels, n=nxt)

    # 3. M*: M - {e1, e2} 的子划分, 每条边取第一个中点
    m_edges = {}
    for x, y in w.graph.edges:
        hx, hy = m_designation.vertex_map[x], m_designation.vertex_map[y]
        key = norm_edge(hx, hy)
        if key in bundles:
            m_edges[norm_edge(x, y)] = (hx, bundles[key][0], hy) if x < y else (hy, bundles[key][0], hx)
    m_star = Embedding({x: m_designation.vertex_map[x] for x in w.graph.vertices}, m_edges)

    logger.info(f"构造 Z: |V|={z.n}, |E|={z.number_of_edges()}, r={r}, e1=({a},{b}), e2=({c},{d})")
    return CounterexampleInstance(
        z=z,
        pattern=h,
        star_map=tuple(h.vertices),
        gadget=gadget,
        gadget_map=tuple(gmap),
        designation=m_designation,
        m_star=m_star,
        r=r,
        e1=(a, b),
        e2=(c, d),
        bundles=bundles,
        min_apart=min_apart,
    )


def z_minus_w_zero(inst: CounterexampleInstance) -> Graph:
    """Z - W⁰"""
    return delete_vertices(inst.z, inst.w_zero())[0]
