"""
构件迹
子划分嵌入 Φ(H) 与构件 W 的交只经由四个端点与外部相连。把交集拆成关键顶点
(用到的端点, 以及落在 W 内部的分支顶点) 之间内部不交的路段, 固定端点下的
同构类称为迹类型。

一个嵌入由三部分唯一确定:
  * 迹类型 τ;
  * τ 在 W 中的一个实现 (具体的路段与内部分支顶点);
  * H 在外部宿主中的嵌入, 宿主为 Z 去掉 W 的边, 再以 τ 代替 W
    (内部关键顶点成为新顶点, 每条路段成为一个必须经过的度2顶点)。

于是 H 在 Z 中的嵌入数 = Σ_τ 外部嵌入数(τ) × 实现数(τ), 两边分别计数即可。
实现是否含 (a*–b*, c*–d*) 连接只取决于它在 W 内的边集。
"""

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from modules.gadgets import TerminalGadget
from modules.graph_core import Edge, Embedding, Graph, norm_edge
from modules.utils import get_logger
from modules.verify.budget import SearchBudget, resolve_budget
from modules.verify.linkage import find_linkage

logger = get_logger(__name__)

# (内部关键顶点数, 规范边表); 端点编码 0..3 依次为 a*, b*, c*, d*, 内部关键顶点从 4 开始
TraceType = Tuple[int, Tuple[Edge, ...]]

TERMINAL_CODES = 4


@dataclass(frozen=True)
class GadgetTrace:
    """迹类型在构件中的一个实现 (构件坐标)

    anchors[i] 是编码 4+i 的内部分支顶点; strands[j] 对应类型边表第 j 条边,
    方向从较小编码走向较大编码。
    """
    edges: FrozenSet[Edge]
    anchors: Tuple[int, ...]
    strands: Tuple[Tuple[int, ...], ...]
    linked: bool


@dataclass
class TraceClass:
    ttype: TraceType
    traces: List[GadgetTrace] = field(default_factory=list)

    @property
    def linked(self) -> int:
        return sum(1 for t in self.traces if t.linked)

    @property
    def unlinked(self) -> int:
        return len(self.traces) - self.linked


@dataclass(frozen=True)
class TraceHost:
    """以迹类型代替构件的外部宿主"""
    graph: Graph
    hosts: FrozenSet[int]
    anchors: Tuple[int, ...]
    strand_vertices: Tuple[int, ...]

    @property
    def frozen(self) -> Tuple[int, ...]:
        return self.anchors + self.strand_vertices

# ===================================
# 构件内的边集枚举
# ===================================


def _edge_sets(g: Graph, ends: Mapping[int, int], allowed: Set[int],
               budget: SearchBudget) -> Iterator[FrozenSet[Edge]]:
    """W 的边子集, 其中每个内部顶点的度为 0、2 或 H 中出现的度"""
    edges = sorted(g.edges)
    cap = max(allowed | {2})
    left = {v: g.degree(v) for v in g.vertices}
    deg = {v: 0 for v in g.vertices}
    chosen: List[Edge] = []

    def closed_ok(v: int) -> bool:
        return left[v] > 0 or v in ends or deg[v] in (0, 2) or deg[v] in allowed

    def walk(i: int) -> Iterator[FrozenSet[Edge]]:
        budget.tick()
        if i == len(edges):
            yield frozenset(chosen)
            return
        x, y = edges[i]
        left[x] -= 1
        left[y] -= 1
        for take in (False, True):
            if take:
                if any(v not in ends and deg[v] >= cap for v in (x, y)):
                    continue
                deg[x] += 1
                deg[y] += 1
                chosen.append(edges[i])
            if closed_ok(x) and closed_ok(y):
                yield from walk(i + 1)
            if take:
                deg[x] -= 1
                deg[y] -= 1
                chosen.pop()
        left[x] += 1
        left[y] += 1

    yield from walk(0)


def _optional_anchor_sets(optional: Sequence[int], sdeg: Mapping[int, int],
                          room: Counter) -> Iterator[Tuple[int, ...]]:
    """度为 0 或 2 的内部顶点也可以是分支顶点 (H 有这样的度时)"""
    for k in range(len(optional) + 1):
        if k > sum(room.values()):
            return
        for combo in combinations(optional, k):
            use = Counter(sdeg[v] for v in combo)
            if all(use[d] <= room[d] for d in use):
                yield combo


def _strands(s: FrozenSet[Edge], keys: Set[int]) -> Optional[List[Tuple[int, ...]]]:
    """沿非关键顶点 (度恰为2) 把边集拆成关键顶点之间的路段; 出现自环或无关键顶点的圈时返回 None"""
    adj: Dict[int, List[int]] = {}
    for x, y in s:
        adj.setdefault(x, []).append(y)
        adj.setdefault(y, []).append(x)
    seen: Set[Edge] = set()
    strands: List[Tuple[int, ...]] = []
    for k in sorted(keys):
        for nb in sorted(adj.get(k, ())):
            if norm_edge(k, nb) in seen:
                continue
            seen.add(norm_edge(k, nb))
            path = [k, nb]
            while path[-1] not in keys:
                cur, prev = path[-1], path[-2]
                nxt = next(u for u in adj[cur] if u != prev)
                seen.add(norm_edge(cur, nxt))
                path.append(nxt)
            if path[-1] == k:
                return None
            strands.append(tuple(path))
    if len(seen) != len(s):
        return None
    return strands


def _canonical(strands: List[Tuple[int, ...]], anchors: List[int], ends: Mapping[int, int]
               ) -> Tuple[TraceType, Tuple[int, ...], Tuple[Tuple[int, ...], ...]]:
    """固定端点编码, 在不变量相同的内部关键顶点之间取字典序最小的编号"""
    def invariant(v: int) -> Tuple[int, Tuple[int, ...]]:
        far = [p[-1] for p in strands if p[0] == v] + [p[0] for p in strands if p[-1] == v]
        return len(far), tuple(sorted(ends[u] for u in far if u in ends))

    groups: Dict[Tuple[int, Tuple[int, ...]], List[int]] = {}
    for v in anchors:
        groups.setdefault(invariant(v), []).append(v)
    blocks = [groups[key] for key in sorted(groups)]

    best: Optional[Tuple[Tuple[Edge, ...], List[int], Dict[int, int]]] = None
    for choice in product(*(permutations(block) for block in blocks)):
        order = [v for block in choice for v in block]
        code = dict(ends)
        code.update({v: TERMINAL_CODES + i for i, v in enumerate(order)})
        edges = tuple(sorted(norm_edge(code[p[0]], code[p[-1]]) for p in strands))
        if best is None or edges < best[0]:
            best = (edges, order, code)
    edges, order, code = best

    oriented = [p if code[p[0]] < code[p[-1]] else p[::-1] for p in strands]
    oriented.sort(key=lambda p: (code[p[0]], code[p[-1]], p))
    return (len(order), edges), tuple(order), tuple(oriented)


def gadget_traces(gadget: TerminalGadget, degrees: Sequence[int],
                  budget: Optional[SearchBudget] = None) -> Dict[TraceType, TraceClass]:
    """枚举 Φ(H) ∩ W 的全部可能形状, 按迹类型分组

    degrees 为 H 的度序列: 内部分支顶点的度必须在其中出现, 且每种度的个数
    不超过 H 中该度的顶点数。连接判定按边集缓存。

    Raises:
        ResourceLimitExceeded: 节点预算耗尽
    """
    budget = resolve_budget(budget, "gadget_traces")
    g = gadget.graph
    ends = {t: i for i, t in enumerate(gadget.terminals)}
    stock = Counter(degrees)
    allowed = set(stock)
    linked: Dict[FrozenSet[Edge], bool] = {}
    classes: Dict[TraceType, TraceClass] = {}

    for s in _edge_sets(g, ends, allowed, budget):
        sdeg: Counter = Counter()
        for x, y in s:
            sdeg[x] += 1
            sdeg[y] += 1
        inner = [v for v in g.vertices if v not in ends]
        forced = [v for v in inner if sdeg[v] not in (0, 2)]
        need = Counter(sdeg[v] for v in forced)
        if any(need[d] > stock[d] for d in need):
            continue
        optional = [v for v in inner if sdeg[v] in (0, 2) and sdeg[v] in allowed]
        used_ends = {t for t in ends if sdeg[t]}
        for extra in _optional_anchor_sets(optional, sdeg, stock - need):
            keys = used_ends | set(forced) | set(extra)
            strands = _strands(s, keys)
            if strands is None:
                continue
            if s not in linked:
                linked[s] = find_linkage(Graph(g.n, s), *gadget.terminals, budget=budget) is not None
            anchors = sorted(set(forced) | set(extra))
            ttype, order, oriented = _canonical(strands, anchors, ends)
            trace = GadgetTrace(s, order, oriented, linked[s])
            classes.setdefault(ttype, TraceClass(ttype)).traces.append(trace)

    logger.debug(f"构件迹: 边集 {len(linked)} 个, 类型 {len(classes)} 个")
    return classes


def trace_viable(ttype: TraceType, pattern: Graph) -> bool:
    """H 连通时 Φ(H) 连通: 不含端点的类型分量只能是整个 Φ(H)"""
    if pattern.number_connected_components() != 1:
        return True
    k, edges = ttype
    parent = list(range(TERMINAL_CODES + k))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, q in edges:
        parent[find(p)] = find(q)
    nodes = {p for e in edges for p in e} | set(range(TERMINAL_CODES, TERMINAL_CODES + k))
    comps = {find(v) for v in nodes}
    touched = {find(t) for t in range(TERMINAL_CODES) if t in nodes}
    if comps <= touched:
        return True
    return len(comps) == 1 and k == pattern.n

# ===================================
# 外部宿主与嵌入还原
# ===================================


def trace_host(z: Graph, gadget_edges: FrozenSet[Edge], interior: Sequence[int],
               terminals: Sequence[int], ttype: TraceType) -> TraceHost:
    """Z 去掉构件边, 内部关键顶点编号为 z.n 起, 其后每条类型边一个路段顶点

    构件内部顶点在宿主中孤立且不能放置分支顶点; 路段顶点也不能。
    """
    k, edges = ttype
    anchors = tuple(range(z.n, z.n + k))
    node = list(terminals) + list(anchors)
    out = set(z.edges - gadget_edges)
    strand_vertices = []
    nxt = z.n + k
    for p, q in edges:
        out.add(norm_edge(node[p], nxt))
        out.add(norm_edge(nxt, node[q]))
        strand_vertices.append(nxt)
        nxt += 1
    blocked = set(interior) | set(strand_vertices)
    hosts = frozenset(v for v in range(nxt) if v not in blocked)
    return TraceHost(Graph(nxt, frozenset(out)), hosts, anchors, tuple(strand_vertices))


def expand_embedding(outer: Embedding, host: TraceHost, trace: GadgetTrace,
                     gadget_map: Sequence[int]) -> Embedding:
    """把外部嵌入中的内部关键顶点和路段顶点换成实现中的具体顶点与路径 (Z 坐标)"""
    place = {a: gadget_map[v] for a, v in zip(host.anchors, trace.anchors)}
    segment = {s: tuple(gadget_map[x] for x in q) for s, q in zip(host.strand_vertices, trace.strands)}

    def lift(path: Tuple[int, ...]) -> Tuple[int, ...]:
        out: List[int] = []
        for x in path:
            if x in segment:
                seg = segment[x]
                if seg[0] != out[-1]:
                    seg = seg[::-1]
                out.extend(seg[1:-1])
            else:
                out.append(place.get(x, x))
        return tuple(out)

    branch = {h: place.get(v, v) for h, v in outer.branch_map.items()}
    return Embedding(branch, {e: lift(p) for e, p in outer.edge_paths.items()})
