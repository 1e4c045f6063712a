"""
连接搜索
(a–b, c–d) 连接: 一条 a–b 路径与一条 c–d 路径, 两者顶点不交。

回溯枚举 a–b 路径 (邻居按编号升序), 每扩展一步检查两件事:
当前端点在剩余图中仍能到达 b, 且 c 与 d 在删去路径和 b 之后仍连通。
"""

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from modules.core.exceptions import InvalidParameter, UnknownVertex
from modules.gadgets import TerminalGadget
from modules.graph_core import Edge, Graph, norm_edge
from modules.utils import get_logger
from modules.verify.budget import SearchBudget, resolve_budget

logger = get_logger(__name__)


@dataclass(frozen=True)
class Linkage:
    """(a–b, c–d) 连接的见证"""
    path_ab: Tuple[int, ...]
    path_cd: Tuple[int, ...]

    def vertices(self) -> FrozenSet[int]:
        return frozenset(self.path_ab) | frozenset(self.path_cd)

    def edges(self) -> FrozenSet[Edge]:
        return frozenset(_path_edges(self.path_ab) + _path_edges(self.path_cd))

    def edge_sequence(self) -> List[Edge]:
        """先 c–d 路径后 a–b 路径, 各自按路径顺序"""
        return _path_edges(self.path_cd) + _path_edges(self.path_ab)

    def to_dict(self) -> Dict[str, List[int]]:
        return {"path_ab": list(self.path_ab), "path_cd": list(self.path_cd)}


def _path_edges(path: Tuple[int, ...]) -> List[Edge]:
    return [norm_edge(path[i], path[i + 1]) for i in range(len(path) - 1)]


def _check_terminals(g: Graph, terminals: Tuple[int, int, int, int]) -> None:
    for v in terminals:
        if not 0 <= v < g.n:
            raise UnknownVertex(v)
    if len(set(terminals)) != 4:
        raise InvalidParameter(f"四个端点必须互不相同: {terminals}")


def _reachable(g: Graph, source: int, target: int, blocked: Set[int]) -> bool:
    if source == target:
        return True
    seen = {source}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in g.adj(x):
            if y == target:
                return True
            if y not in seen and y not in blocked:
                seen.add(y)
                queue.append(y)
    return False


def _bfs_path(g: Graph, source: int, target: int, blocked: Set[int]) -> Optional[List[int]]:
    """避开 blocked 的最短路径, 邻居按编号顺序扩展"""
    parent = {source: source}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        if x == target:
            path = [x]
            while path[-1] != source:
                path.append(parent[path[-1]])
            return path[::-1]
        for y in g.neighbours(x):
            if y not in parent and y not in blocked:
                parent[y] = x
                queue.append(y)
    return None


def iter_paths(g: Graph, source: int, target: int, blocked: Iterable[int] = (),
               budget: Optional[SearchBudget] = None) -> Iterator[List[int]]:
    """按字典序枚举避开 blocked 的全部 source–target 简单路径"""
    budget = resolve_budget(budget, "iter_paths")
    blocked = set(blocked)
    path = [source]
    on_path = {source}

    def extend() -> Iterator[List[int]]:
        x = path[-1]
        if x == target:
            yield list(path)
            return
        for y in g.neighbours(x):
            if y in on_path or y in blocked:
                continue
            budget.tick()
            path.append(y)
            on_path.add(y)
            if _reachable(g, y, target, on_path | blocked):
                yield from extend()
            path.pop()
            on_path.discard(y)

    if source not in blocked:
        yield from extend()


def _iter_ab_paths(g: Graph, terminals: Tuple[int, int, int, int],
                   budget: SearchBudget) -> Iterator[List[int]]:
    a, b, c, d = terminals
    forbidden = {c, d}
    path = [a]
    on_path = {a}

    def extend() -> Iterator[List[int]]:
        x = path[-1]
        if x == b:
            yield list(path)
            return
        for y in g.neighbours(x):
            if y in on_path or y in forbidden:
                continue
            budget.tick()
            path.append(y)
            on_path.add(y)
            if (_reachable(g, y, b, (on_path - {y}) | forbidden)
                    and _reachable(g, c, d, on_path | {b})):
                yield from extend()
            path.pop()
            on_path.discard(y)

    yield from extend()


def find_linkage(g: Graph, a: int, b: int, c: int, d: int,
                 budget: Optional[SearchBudget] = None) -> Optional[Linkage]:
    """第一个 (a–b, c–d) 连接; 返回 None 表示不存在 (穷尽)

    c–d 路径取剩余图中的 BFS 最短路径。
    """
    terminals = (a, b, c, d)
    _check_terminals(g, terminals)
    budget = resolve_budget(budget, "find_linkage")
    for path_ab in _iter_ab_paths(g, terminals, budget):
        path_cd = _bfs_path(g, c, d, set(path_ab))
        if path_cd is not None:
            return Linkage(tuple(path_ab), tuple(path_cd))
    return None


def iter_linkages(g: Graph, a: int, b: int, c: int, d: int,
                  budget: Optional[SearchBudget] = None) -> Iterator[Linkage]:
    """枚举全部连接: 外层 a–b 路径, 内层剩余图中的全部 c–d 路径"""
    terminals = (a, b, c, d)
    _check_terminals(g, terminals)
    budget = resolve_budget(budget, "iter_linkages")
    for path_ab in _iter_ab_paths(g, terminals, budget):
        for path_cd in iter_paths(g, c, d, path_ab, budget):
            yield Linkage(tuple(path_ab), tuple(path_cd))


def find_two_edge_disjoint_linkages(g: Graph, a: int, b: int, c: int, d: int,
                                    budget: Optional[SearchBudget] = None
                                    ) -> Optional[Tuple[Linkage, Linkage]]:
    """两个边不交的连接, 或 None (穷尽)

    两个边不交的连接在 a 处的首条边不同; 约定第一个连接的首邻居较小,
    于是搜索第二个时一并删去 a 到更小邻居的边。
    """
    budget = resolve_budget(budget, "two_linkages")
    enumerated = 0
    for first in iter_linkages(g, a, b, c, d, budget):
        enumerated += 1
        lead = first.path_ab[1]
        removed = first.edges() | {norm_edge(a, y) for y in g.adj(a) if y < lead}
        rest = Graph(g.n, g.edges - removed, g.labels)
        second = find_linkage(rest, a, b, c, d, budget)
        if second is not None:
            logger.debug(f"找到边不交连接对 (第 {enumerated} 个首连接)")
            return first, second
    logger.debug(f"枚举 {enumerated} 个首连接, 无边不交的第二个连接")
    return None


def exists_two_edge_disjoint_linkages(w: TerminalGadget,
                                      budget: Optional[SearchBudget] = None) -> bool:
    return find_two_edge_disjoint_linkages(w.graph, *w.terminals, budget=budget) is not None


def find_linkage_hitting_set(w: TerminalGadget, k: int,
                             budget: Optional[SearchBudget] = None) -> Optional[Tuple[Edge, ...]]:
    """至多 k 条边、与每个连接都相交的边集; 不存在则返回 None

    有界搜索树: 任一命中集必含当前连接的某条边, 对这条连接的各边分支。
    按大小迭代加深, 返回的集合大小最小。
    """
    if k < 0:
        raise InvalidParameter(f"命中集大小必须非负: {k}")
    g = w.graph
    a, b, c, d = w.terminals
    _check_terminals(g, w.terminals)
    budget = resolve_budget(budget, "hitting_set")
    for size in range(k + 1):
        seen: Set[FrozenSet[Edge]] = set()

        def search(removed: FrozenSet[Edge], depth: int) -> Optional[FrozenSet[Edge]]:
            if removed in seen:
                return None
            seen.add(removed)
            budget.tick()
            link = find_linkage(Graph(g.n, g.edges - removed), a, b, c, d, budget)
            if link is None:
                return removed
            if depth == 0:
                return None
            for e in link.edge_sequence():
                found = search(removed | {e}, depth - 1)
                if found is not None:
                    return found
            return None

        found = search(frozenset(), size)
        if found is not None:
            return tuple(sorted(found))
    return None


def hitting_robustness(w: TerminalGadget, k: int,
                       budget: Optional[SearchBudget] = None) -> bool:
    """删去任意至多 k 条边后连接仍存在"""
    return find_linkage_hitting_set(w, k, budget) is None
