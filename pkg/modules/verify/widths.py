"""
精确路径宽与树宽

路径宽按顶点分离数计算: 对顶点序前缀集合做带失败记忆的深度优先搜索,
袋子 B_j = ∂(L_{j-1}) ∪ {v_j}。树宽按消去序判定, 同样记忆失败状态,
上界取 networkx 的最小填充启发式。两者都返回可独立校验的证书。
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from modules.core.exceptions import InvalidDecomposition
from modules.graph_core import Graph
from modules.utils import get_logger
from modules.verify.budget import SearchBudget, resolve_budget

logger = get_logger(__name__)


@dataclass(frozen=True)
class PathDecomposition:
    width: int
    ordering: Tuple[int, ...]
    bags: Tuple[FrozenSet[int], ...]

    def to_dict(self) -> Dict[str, object]:
        return {
            "width": self.width,
            "ordering": list(self.ordering),
            "bags": [sorted(b) for b in self.bags],
        }


@dataclass(frozen=True)
class TreeDecomposition:
    width: int
    bags: Tuple[FrozenSet[int], ...]
    tree_edges: Tuple[Tuple[int, int], ...]
    ordering: Optional[Tuple[int, ...]] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "width": self.width,
            "bags": [sorted(b) for b in self.bags],
            "tree_edges": [list(e) for e in self.tree_edges],
            "ordering": None if self.ordering is None else list(self.ordering),
        }

# ===================================
# 下界
# ===================================


def degeneracy(g: Graph) -> int:
    if g.n == 0:
        return 0
    return max(nx.core_number(g.to_networkx()).values())


def minor_min_width(g: Graph) -> int:
    """Minor-min-width 下界: 反复把最小度顶点收缩到公共邻居最少的邻居上"""
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(g.edges)
    best = 0
    while len(G) > 0:
        d, u = min((G.degree(x), x) for x in G)
        best = max(best, d)
        nb = set(G[u])
        if nb:
            _, v = min((len(set(G[x]) & nb), x) for x in nb)
            G = nx.contracted_nodes(G, v, u, self_loops=False)
        else:
            G.remove_node(u)
    return best


def width_lower_bound(g: Graph) -> int:
    return max(degeneracy(g), minor_min_width(g))

# ===================================
# 路径宽
# ===================================


def _neighbour_masks(g: Graph) -> List[int]:
    masks = []
    for v in g.vertices:
        m = 0
        for u in g.adj(v):
            m |= 1 << u
        masks.append(m)
    return masks


def _boundary(nbr: List[int], prefix: int) -> int:
    """前缀中仍有前缀外邻居的顶点集 (位掩码)"""
    out = 0
    rest = ~prefix
    x = prefix
    while x:
        low = x & -x
        u = low.bit_length() - 1
        if nbr[u] & rest:
            out |= low
        x ^= low
    return out


def _separation_order(g: Graph, k: int, budget: SearchBudget) -> Optional[List[int]]:
    """顶点分离数 <= k 的顶点序, 不存在时返回 None"""
    nbr = _neighbour_masks(g)
    full = (1 << g.n) - 1
    failing: Set[int] = set()

    def dfs(prefix: int) -> Optional[List[int]]:
        if prefix == full:
            return []
        if prefix in failing:
            return None
        budget.tick()
        # 邻居全在前缀中的顶点可以直接加入
        for v in range(g.n):
            if not prefix >> v & 1 and nbr[v] & ~prefix == 0:
                rest = dfs(prefix | 1 << v)
                if rest is None:
                    failing.add(prefix)
                    return None
                return [v] + rest
        for v in range(g.n):
            if prefix >> v & 1:
                continue
            nxt = prefix | 1 << v
            if bin(_boundary(nbr, nxt)).count("1") > k:
                continue
            rest = dfs(nxt)
            if rest is not None:
                return [v] + rest
        failing.add(prefix)
        return None

    return dfs(0)


def path_decomposition_from_order(g: Graph, order: List[int]) -> PathDecomposition:
    nbr = _neighbour_masks(g)
    bags = []
    prefix = 0
    for v in order:
        boundary = _boundary(nbr, prefix)
        bags.append(frozenset(u for u in g.vertices if boundary >> u & 1) | {v})
        prefix |= 1 << v
    width = max((len(b) for b in bags), default=0) - 1
    return PathDecomposition(width, tuple(order), tuple(bags))


def pathwidth_exact(g: Graph, budget: Optional[SearchBudget] = None) -> PathDecomposition:
    """精确路径宽与路径分解证书; 适用于约 24 个顶点以内

    Raises:
        ResourceLimitExceeded: 节点预算耗尽
    """
    budget = resolve_budget(budget, "pathwidth")
    if g.n == 0:
        return PathDecomposition(-1, (), ())
    k = width_lower_bound(g)
    while True:
        order = _separation_order(g, k, budget)
        if order is not None:
            pd = path_decomposition_from_order(g, order)
            logger.debug(f"路径宽 {pd.width} (节点 {budget.nodes})")
            return pd
        k += 1


def validate_path_decomposition(g: Graph, pd: PathDecomposition) -> None:
    """Raises: InvalidDecomposition"""
    seen_at: Dict[int, List[int]] = {}
    for j, bag in enumerate(pd.bags):
        for v in bag:
            if not 0 <= v < g.n:
                raise InvalidDecomposition(f"袋子 {j} 含未知顶点 {v}")
            seen_at.setdefault(v, []).append(j)
    for v in g.vertices:
        where = seen_at.get(v)
        if not where:
            raise InvalidDecomposition(f"顶点 {v} 不在任何袋子中")
        if where != list(range(where[0], where[-1] + 1)):
            raise InvalidDecomposition(f"含顶点 {v} 的袋子不连续: {where}")
    for u, v in g.edges:
        if not any(u in bag and v in bag for bag in pd.bags):
            raise InvalidDecomposition(f"边 {(u, v)} 未被任何袋子覆盖")
    width = max((len(b) for b in pd.bags), default=0) - 1
    if width != pd.width:
        raise InvalidDecomposition(f"宽度声明 {pd.width} 与袋子实际宽度 {width} 不符")

# ===================================
# 树宽
# ===================================


def _elimination_neighbours(nbr: List[int], eliminated: int, v: int) -> int:
    """消去 eliminated 后 v 的邻居: 经由已消去顶点可达的未消去顶点"""
    reach = 0
    seen = 1 << v
    stack = [v]
    while stack:
        x = stack.pop()
        fresh = nbr[x] & ~seen
        seen |= fresh
        while fresh:
            low = fresh & -fresh
            u = low.bit_length() - 1
            fresh ^= low
            if eliminated >> u & 1:
                stack.append(u)
            else:
                reach |= low
    return reach


def _elimination_order(g: Graph, k: int, budget: SearchBudget) -> Optional[List[int]]:
    """宽度 <= k 的消去序, 不存在时返回 None"""
    nbr = _neighbour_masks(g)
    full = (1 << g.n) - 1
    failing: Set[int] = set()

    def clique(eliminated: int, members: int) -> bool:
        x = members
        while x:
            low = x & -x
            u = low.bit_length() - 1
            x ^= low
            others = members & ~low
            if _elimination_neighbours(nbr, eliminated, u) & others != others:
                return False
        return True

    def dfs(eliminated: int) -> Optional[List[int]]:
        remaining = [v for v in range(g.n) if not eliminated >> v & 1]
        if len(remaining) <= k + 1:
            return remaining
        if eliminated in failing:
            return None
        budget.tick()
        candidates = []
        for v in remaining:
            q = _elimination_neighbours(nbr, eliminated, v)
            if bin(q).count("1") > k:
                continue
            if clique(eliminated, q):
                candidates = [v]
                break
            candidates.append(v)
        for v in candidates:
            rest = dfs(eliminated | 1 << v)
            if rest is not None:
                return [v] + rest
        failing.add(eliminated)
        return None

    return dfs(0)


def tree_decomposition_from_order(g: Graph, order: List[int]) -> TreeDecomposition:
    nbr = _neighbour_masks(g)
    position = {v: i for i, v in enumerate(order)}
    bags = []
    edges = []
    eliminated = 0
    for i, v in enumerate(order):
        q = _elimination_neighbours(nbr, eliminated, v)
        later = [u for u in g.vertices if q >> u & 1]
        bags.append(frozenset(later) | {v})
        if i + 1 < len(order):
            parent = min((position[u] for u in later), default=i + 1)
            edges.append((i, parent))
        eliminated |= 1 << v
    width = max((len(b) for b in bags), default=0) - 1
    return TreeDecomposition(width, tuple(bags), tuple(edges), tuple(order))


def _from_networkx_decomposition(width: int, tree: nx.Graph) -> TreeDecomposition:
    nodes = sorted(tree.nodes(), key=lambda b: (sorted(b), len(b)))
    index = {b: i for i, b in enumerate(nodes)}
    edges = sorted(tuple(sorted((index[x], index[y]))) for x, y in tree.edges())
    return TreeDecomposition(width, tuple(frozenset(b) for b in nodes), tuple(edges))


def treewidth_exact(g: Graph, budget: Optional[SearchBudget] = None) -> TreeDecomposition:
    """精确树宽与树分解证书; 适用于约 20 个顶点以内

    Raises:
        ResourceLimitExceeded: 节点预算耗尽
    """
    budget = resolve_budget(budget, "treewidth")
    if g.n == 0:
        return TreeDecomposition(-1, (), ())
    upper, tree = treewidth_min_fill_in(g.to_networkx())
    k = width_lower_bound(g)
    while k < upper:
        order = _elimination_order(g, k, budget)
        if order is not None:
            return tree_decomposition_from_order(g, order)
        k += 1
    logger.debug(f"树宽等于最小填充上界 {upper} (节点 {budget.nodes})")
    return _from_networkx_decomposition(upper, tree)


def validate_tree_decomposition(g: Graph, td: TreeDecomposition) -> None:
    """Raises: InvalidDecomposition"""
    T = nx.Graph()
    T.add_nodes_from(range(len(td.bags)))
    T.add_edges_from(td.tree_edges)
    if len(td.bags) and not nx.is_tree(T):
        raise InvalidDecomposition("袋子之间的结构不是树")
    for v in g.vertices:
        holders = [i for i, bag in enumerate(td.bags) if v in bag]
        if not holders:
            raise InvalidDecomposition(f"顶点 {v} 不在任何袋子中")
        if not nx.is_connected(T.subgraph(holders)):
            raise InvalidDecomposition(f"含顶点 {v} 的袋子不构成连通子树")
    for u, v in g.edges:
        if not any(u in bag and v in bag for bag in td.bags):
            raise InvalidDecomposition(f"边 {(u, v)} 未被任何袋子覆盖")
    width = max((len(b) for b in td.bags), default=0) - 1
    if width != td.width:
        raise InvalidDecomposition(f"宽度声明 {td.width} 与袋子实际宽度 {width} 不符")
