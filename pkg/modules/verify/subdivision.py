"""
子划分嵌入搜索
把模式图 H 的顶点单射到宿主 G 的顶点, 再把 H 的边路由为内部不交的路径。

搜索顺序:
  * H 的顶点按 BFS 顺序放置 (每个连通分量从度最大、编号最小的顶点开始);
  * 候选像按编号升序, 度不小于 H 中的度;
  * 每放置一个顶点, 立即路由它到已放置邻居的边, 路径按长度迭代加深;
  * 每步检查已放置顶点的剩余需求不超过其空闲邻居数。

孪生规范化: 度为 2 且邻居集相同的顶点可以互换, 每个孪生类只按编号
递增顺序启用, 于是每个等价类恰好枚举一个代表; multiplicity 记录代表
所对应的嵌入个数。

可选约束 (构件迹的外部计数用到):
  * hosts: 只有这些顶点可以放置分支顶点;
  * anchors: 这些顶点必须是分支顶点的像;
  * required: 这些顶点必须被嵌入使用。
"""

from collections import deque
from dataclasses import dataclass
from math import perm, prod
from typing import AbstractSet, Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from modules.graph_core import Edge, Embedding, Graph, norm_edge
from modules.utils import get_logger
from modules.verify.budget import SearchBudget, resolve_budget

logger = get_logger(__name__)


@dataclass(frozen=True)
class CanonicalEmbedding:
    """规范嵌入及其孪生展开因子"""
    embedding: Embedding
    multiplicity: int = 1


@dataclass
class EmbeddingCount:
    canonical: int = 0
    total: int = 0

    def to_dict(self) -> Dict[str, int]:
        return {"canonical": self.canonical, "total": self.total}


def twin_classes(g: Graph, frozen: Iterable[int] = ()) -> Dict[int, Tuple[int, int]]:
    """度为 2、邻居集相同的顶点组 (至少两个成员); 返回 顶点 -> (类编号, 类内名次)"""
    frozen = set(frozen)
    groups: Dict[FrozenSet[int], List[int]] = {}
    for v in g.vertices:
        if g.degree(v) == 2 and v not in frozen:
            groups.setdefault(g.adj(v), []).append(v)
    classes: Dict[int, Tuple[int, int]] = {}
    keys = sorted((k for k, members in groups.items() if len(members) > 1), key=sorted)
    for cid, key in enumerate(keys):
        for rank, v in enumerate(sorted(groups[key])):
            classes[v] = (cid, rank)
    return classes


def placement_order(h: Graph) -> List[int]:
    order: List[int] = []
    placed: Set[int] = set()
    while len(order) < h.n:
        start = min((v for v in h.vertices if v not in placed), key=lambda v: (-h.degree(v), v))
        placed.add(start)
        queue = deque([start])
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in h.neighbours(x):
                if y not in placed:
                    placed.add(y)
                    queue.append(y)
    return order


class _SubdivisionSearch:
    """一次嵌入枚举的可变状态"""

    def __init__(self, h: Graph, g: Graph, budget: SearchBudget,
                 canonical: bool = True, frozen: Iterable[int] = (),
                 hosts: Optional[AbstractSet[int]] = None,
                 anchors: Iterable[int] = (), required: Iterable[int] = ()):
        self.h = h
        self.g = g
        self.budget = budget
        self.order = placement_order(h)
        position = {x: i for i, x in enumerate(self.order)}
        self.back = {x: [y for y in h.neighbours(x) if position[y] < position[x]] for x in h.vertices}
        self.twins = twin_classes(g, frozen) if canonical else {}
        self.class_size: Dict[int, int] = {}
        for cid, _ in self.twins.values():
            self.class_size[cid] = self.class_size.get(cid, 0) + 1
        self.twin_used = {cid: 0 for cid in self.class_size}
        self.used: Set[int] = set()
        self.branch: Dict[int, int] = {}
        self.paths: Dict[Edge, Tuple[int, ...]] = {}
        self.hosts = hosts
        self.anchors = frozenset(anchors)
        self.required = frozenset(required) | self.anchors

    # ---------- 顶点占用 ----------

    def _can_take(self, v: int) -> bool:
        if v in self.used:
            return False
        twin = self.twins.get(v)
        return twin is None or twin[1] == self.twin_used[twin[0]]

    def _take(self, v: int) -> None:
        self.used.add(v)
        twin = self.twins.get(v)
        if twin is not None:
            self.twin_used[twin[0]] += 1

    def _release(self, v: int) -> None:
        self.used.discard(v)
        twin = self.twins.get(v)
        if twin is not None:
            self.twin_used[twin[0]] -= 1

    def _multiplicity(self) -> int:
        return prod(perm(self.class_size[cid], k) for cid, k in self.twin_used.items())

    # ---------- 剪枝 ----------

    def _feasible(self) -> bool:
        """每个已放置顶点: 未路由的边数 <= 可用的邻居数"""
        for x, v in self.branch.items():
            need = 0
            direct = set()
            for y in self.h.adj(x):
                if norm_edge(x, y) in self.paths:
                    continue
                need += 1
                if y in self.branch:
                    direct.add(self.branch[y])
            if need == 0:
                continue
            avail = sum(1 for u in self.g.adj(v) if u not in self.used or u in direct)
            if avail < need:
                return False
        if self.hosts is not None:
            # 不能放分支顶点的必经顶点只能做路径内部, 需要两个仍可接入的邻居
            owner = {v: x for x, v in self.branch.items()}
            for s in self.required:
                if s in self.used or s in self.hosts:
                    continue
                if sum(1 for u in self.g.adj(s) if self._open(u, owner)) < 2:
                    return False
        return True

    def _open(self, u: int, owner: Dict[int, int]) -> bool:
        if u not in self.used:
            return True
        x = owner.get(u)
        return x is not None and any(norm_edge(x, y) not in self.paths for y in self.h.adj(x))

    # ---------- 路由 ----------

    def _distances(self, target: int) -> Dict[int, int]:
        dist = {target: 0}
        queue = deque([target])
        while queue:
            x = queue.popleft()
            for y in self.g.adj(x):
                if y not in dist and y not in self.used:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def _routes(self, source: int, target: int) -> Iterator[Tuple[int, ...]]:
        """source 到 target 的路径, 内部顶点取自空闲顶点, 先短后长"""
        dist = self._distances(target)
        path = [source]

        def extend(x: int, remaining: int) -> Iterator[Tuple[int, ...]]:
            self.budget.tick()
            if remaining == 1:
                if target in self.g.adj(x):
                    yield tuple(path) + (target,)
                return
            for y in self.g.neighbours(x):
                if y == target or y in self.anchors or not self._can_take(y):
                    continue
                if dist.get(y, remaining) > remaining - 1:
                    continue
                self._take(y)
                path.append(y)
                yield from extend(y, remaining - 1)
                path.pop()
                self._release(y)

        longest = self.g.n - len(self.used) + 1
        for length in range(1, longest + 1):
            yield from extend(source, length)

    def _route(self, x: int, k: int, i: int) -> Iterator[None]:
        if k == len(self.back[x]):
            if self._feasible():
                yield from self._place(i + 1)
            return
        y = self.back[x][k]
        key = norm_edge(x, y)
        for path in self._routes(self.branch[x], self.branch[y]):
            self.paths[key] = path if key[0] == x else path[::-1]
            yield from self._route(x, k + 1, i)
            del self.paths[key]

    def _place(self, i: int) -> Iterator[None]:
        if i == len(self.order):
            yield
            return
        if self.anchors and len(self.order) - i < sum(1 for a in self.anchors if a not in self.used):
            return
        x = self.order[i]
        need = self.h.degree(x)
        for v in self.g.vertices:
            if self.g.degree(v) < need or not self._can_take(v):
                continue
            if self.hosts is not None and v not in self.hosts:
                continue
            self.budget.tick()
            self._take(v)
            self.branch[x] = v
            yield from self._route(x, 0, i)
            del self.branch[x]
            self._release(v)

    def run(self) -> Iterator[CanonicalEmbedding]:
        for _ in self._place(0):
            if not self.required <= self.used:
                continue
            emb = Embedding(dict(sorted(self.branch.items())), dict(sorted(self.paths.items())))
            yield CanonicalEmbedding(emb, self._multiplicity())


def iter_subdivisions(h: Graph, g: Graph, budget: Optional[SearchBudget] = None,
                      canonical: bool = True, frozen: Iterable[int] = (),
                      hosts: Optional[AbstractSet[int]] = None, anchors: Iterable[int] = (),
                      required: Iterable[int] = ()) -> Iterator[CanonicalEmbedding]:
    """枚举 H 在 G 中的子划分嵌入

    canonical 为真时每个孪生等价类只给出一个代表; frozen 中的顶点不参与孪生合并。
    hosts/anchors/required 见模块说明。

    Raises:
        ResourceLimitExceeded: 节点预算耗尽
    """
    budget = resolve_budget(budget, "subdivision")
    if h.n > g.n:
        return
    yield from _SubdivisionSearch(h, g, budget, canonical, frozen, hosts, anchors, required).run()


def find_subdivision(h: Graph, g: Graph, budget: Optional[SearchBudget] = None) -> Optional[Embedding]:
    """第一个子划分嵌入; None 表示穷尽后不存在"""
    budget = resolve_budget(budget, "find_subdivision")
    for found in iter_subdivisions(h, g, budget):
        logger.debug(f"找到子划分 (节点 {budget.nodes})")
        return found.embedding
    return None


def count_subdivisions(h: Graph, g: Graph, budget: Optional[SearchBudget] = None,
                       frozen: Iterable[int] = ()) -> EmbeddingCount:
    count = EmbeddingCount()
    for found in iter_subdivisions(h, g, budget, frozen=frozen):
        count.canonical += 1
        count.total += found.multiplicity
    return count
