"""
Menger 对偶: 顶点分隔集、扇与 3-扇、B_M

全部通过 networkx 的单位顶点容量流实现: 目标集接到超级汇点 T 上,
拆点网络的最大流即最大扇的大小, 残量网络中源点可达侧给出最靠近源点的最小分隔集。
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from modules.core.exceptions import InvalidParameter, UnknownVertex
from modules.graph_core import Graph
from modules.utils import get_logger

logger = get_logger(__name__)

_SINK = "T"


@dataclass(frozen=True)
class SeparationResult:
    """a 与目标集之间的分隔结果

    separator 为 None 时: 连通度超过 bound, 或 inseparable 为真
    (保护目标模式下 a 与某个目标相邻, 无法用顶点分隔)。
    """
    source: int
    targets: FrozenSet[int]
    connectivity: int
    separator: Optional[FrozenSet[int]]
    inseparable: bool = False

    def to_dict(self) -> Dict[str, object]:
        return {
            "source": self.source,
            "targets": sorted(self.targets),
            "connectivity": self.connectivity,
            "separator": None if self.separator is None else sorted(self.separator),
            "inseparable": self.inseparable,
        }


@dataclass(frozen=True)
class Fan:
    """以 center 为公共起点、终点落在目标集中的路径组"""
    center: int
    legs: Tuple[Tuple[int, ...], ...]

    def ends(self) -> List[int]:
        return [leg[-1] for leg in self.legs]

    def to_dict(self) -> Dict[str, object]:
        return {"center": self.center, "legs": [list(leg) for leg in self.legs]}


def _check(g: Graph, v: int, targets: FrozenSet[int]) -> None:
    for x in (v, *targets):
        if not 0 <= x < g.n:
            raise UnknownVertex(x)
    if v in targets:
        raise InvalidParameter(f"起点 {v} 不能属于目标集")


def _with_sink(g: Graph, targets: FrozenSet[int]) -> nx.Graph:
    G = g.to_networkx()
    G.add_node(_SINK)
    G.add_edges_from((t, _SINK) for t in sorted(targets))
    return G


def _split_network(g: Graph, targets: FrozenSet[int], protect_targets: bool) -> nx.DiGraph:
    """顶点拆分网络: 每个顶点 v 拆成 (v, 0) -> (v, 1), 容量 1; 原图的边容量足够大"""
    big = g.n + 1
    D = nx.DiGraph()
    for v in g.vertices:
        if protect_targets and v in targets:
            continue
        D.add_edge((v, 0), (v, 1), capacity=1)
    for u, v in sorted(g.edges):
        for x, y in ((u, v), (v, u)):
            if protect_targets and x in targets:
                continue
            head = _SINK if y in targets and protect_targets else (y, 0)
            D.add_edge((x, 1), head, capacity=big)
    if not protect_targets:
        for t in sorted(targets):
            D.add_edge((t, 1), _SINK, capacity=big)
    D.add_node(_SINK)
    return D


def separate(g: Graph, a: int, targets: Iterable[int], bound: int,
             protect_targets: bool = False) -> SeparationResult:
    """a 与 targets 之间大小不超过 bound 的最小顶点分隔集

    缺省模式下目标顶点可以进入分隔集 (与 a 相邻的目标直接被割掉), 取最靠近 a 的最小割,
    结果从不是 inseparable。
    protect_targets=True 时分隔集不含目标; 只有这时 a 与目标相邻才报告 inseparable,
    separator 为 None。
    a 本身从不属于分隔集。
    """
    targets = frozenset(targets)
    _check(g, a, targets)
    if protect_targets and g.adj(a) & targets:
        return SeparationResult(a, targets, len(g.adj(a) & targets), None, inseparable=True)
    if not targets:
        return SeparationResult(a, targets, 0, frozenset())
    D = _split_network(g, targets, protect_targets)
    R = edmonds_karp(D, (a, 1), _SINK)
    kappa = R.graph["flow_value"]
    if kappa > bound:
        return SeparationResult(a, targets, kappa, None)
    residual = nx.DiGraph()
    residual.add_node((a, 1))
    residual.add_edges_from((x, y) for x, y, attr in R.edges(data=True) if attr["flow"] < attr["capacity"])
    source_side = nx.descendants(residual, (a, 1)) | {(a, 1)}
    cut = frozenset(v for v in g.vertices
                    if (v, 0) in source_side and (v, 1) not in source_side)
    return SeparationResult(a, targets, kappa, cut)


def min_vertex_separator(g: Graph, a: int, targets: Iterable[int], bound: int,
                         protect_targets: bool = False) -> Optional[FrozenSet[int]]:
    return separate(g, a, targets, bound, protect_targets).separator


def max_fan_size(g: Graph, v: int, targets: Iterable[int]) -> int:
    """从 v 到 targets 除 v 外两两不交的路径的最大条数"""
    targets = frozenset(targets)
    _check(g, v, targets)
    if not targets:
        return 0
    return separate(g, v, targets, g.n).connectivity


def find_fan(g: Graph, v: int, targets: Iterable[int], size: int) -> Optional[Fan]:
    """大小为 size 的扇; 每条腿在第一次碰到目标时截断"""
    targets = frozenset(targets)
    _check(g, v, targets)
    if size <= 0 or not targets:
        return None
    G = _with_sink(g, targets)
    try:
        paths = list(nx.node_disjoint_paths(G, v, _SINK, cutoff=size))
    except nx.NetworkXNoPath:
        return None
    if len(paths) < size:
        return None
    legs = []
    for path in paths:
        leg = []
        for x in path:
            leg.append(x)
            if x in targets:
                break
        legs.append(tuple(leg))
    legs.sort(key=lambda leg: (leg[-1], len(leg), leg))
    return Fan(v, tuple(legs))


def three_fan(g: Graph, v: int, s: Iterable[int]) -> Optional[Fan]:
    """v 到 s 的 3-扇, 不存在时返回 None"""
    return find_fan(g, v, s, 3)


def compute_b_m(g: Graph, branch_set: Iterable[int]) -> FrozenSet[int]:
    """向 branch_set 发出 3-扇的全部顶点

    branch_set 内的顶点按约定以其余分支顶点为目标。
    """
    branch = frozenset(branch_set)
    if not branch:
        raise InvalidParameter("分支顶点集不能为空")
    result = set()
    for v in g.vertices:
        targets = branch - {v}
        if len(targets) >= 3 and max_fan_size(g, v, targets) >= 3:
            result.add(v)
    logger.debug(f"B_M 含 {len(result)} 个顶点 (分支顶点 {len(branch)} 个)")
    return frozenset(result)
