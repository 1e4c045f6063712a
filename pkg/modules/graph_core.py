"""
简单图基础模块
构造后不可变的无向简单图, 以及构造、变换、序列化的基本操作

顶点编号是 0..n-1 的稠密整数, 跨操作的语义由角色标签而不是编号承载。
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
from pydantic import ValidationError

from modules.core.exceptions import (
    DegenerateContraction, InvalidEmbedding, LoopEdge, MalformedGraph6,
    MalformedGraphFile, UnknownEdge, UnknownVertex,
)
from modules.models import GraphDocument, LabelDocument
from modules.utils import get_logger

logger = get_logger(__name__)

Edge = Tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    """无向边的规范形式 (小, 大)"""
    return (u, v) if u < v else (v, u)

# ===================================
# 角色标签
# ===================================


class Role(str, Enum):
    """顶点角色"""
    TERMINAL_A = "TerminalA"
    TERMINAL_B = "TerminalB"
    TERMINAL_C = "TerminalC"
    TERMINAL_D = "TerminalD"
    BOTTLENECK = "Bottleneck"
    WALL_BRANCH = "WallBranch"
    PATH_VERTEX = "PathVertex"
    MIDPOINT = "Midpoint"
    PLAIN = "Plain"


TERMINAL_ROLES = (Role.TERMINAL_A, Role.TERMINAL_B, Role.TERMINAL_C, Role.TERMINAL_D)


@dataclass(frozen=True)
class RoleLabel:
    """角色标签; index 的含义随角色而定:
    Bottleneck(j), WallBranch(row, col), PathVertex(j, i), Midpoint(g, h, copy)
    """
    role: Role
    index: Tuple[int, ...] = ()

    def display(self) -> str:
        """DOT 中使用的短标签"""
        if self.role in TERMINAL_ROLES:
            return "abcd"[TERMINAL_ROLES.index(self.role)] + "*"
        if self.role == Role.BOTTLENECK:
            return f"z{self.index[0]}"
        if self.role == Role.PATH_VERTEX:
            return f"u[{self.index[0]},{self.index[1]}]"
        if self.role == Role.WALL_BRANCH:
            return f"w[{self.index[0]},{self.index[1]}]"
        if self.role == Role.MIDPOINT:
            g, h, k = self.index
            return f"m[{g}-{h},{k}]"
        return ""

    def to_document(self) -> LabelDocument:
        return LabelDocument(role=self.role.value, index=list(self.index))

    @classmethod
    def from_document(cls, doc: LabelDocument) -> "RoleLabel":
        try:
            return cls(Role(doc.role), tuple(doc.index))
        except ValueError as e:
            raise MalformedGraphFile(f"未知角色: {doc.role}", cause=e)


def terminal(which: str) -> RoleLabel:
    """terminal("a") -> TerminalA 标签"""
    return RoleLabel(TERMINAL_ROLES["abcd".index(which)])

# ===================================
# 图
# ===================================


@dataclass(frozen=True)
class Graph:
    """无向简单图; 相等性只比较顶点数与边集, 不比较标签"""
    n: int
    edges: FrozenSet[Edge]
    labels: Mapping[int, RoleLabel] = field(default_factory=dict, compare=False, hash=False)
    _adj: Tuple[FrozenSet[int], ...] = field(default=(), init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        adj: List[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", tuple(frozenset(s) for s in adj))

    @property
    def vertices(self) -> range:
        return range(self.n)

    def adj(self, v: int) -> FrozenSet[int]:
        return self._adj[v]

    def neighbours(self, v: int) -> List[int]:
        """按编号排序的邻居"""
        return sorted(self._adj[v])

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> List[int]:
        return [len(a) for a in self._adj]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self._adj[u]

    def number_of_edges(self) -> int:
        return len(self.edges)

    def edge_list(self) -> List[Edge]:
        return sorted(self.edges)

    def label(self, v: int) -> RoleLabel:
        return self.labels.get(v, RoleLabel(Role.PLAIN))

    def find_role(self, role: Role, index: Tuple[int, ...] = ()) -> Optional[int]:
        """返回携带给定标签的顶点, 不存在时返回 None"""
        target = RoleLabel(role, index)
        for v, lab in self.labels.items():
            if lab == target:
                return v
        return None

    def number_connected_components(self) -> int:
        seen = [False] * self.n
        count = 0
        for s in range(self.n):
            if seen[s]:
                continue
            count += 1
            stack = [s]
            seen[s] = True
            while stack:
                x = stack.pop()
                for y in self._adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
        return count

    def cycle_rank(self) -> int:
        """圈秩 |E| - |V| + 连通分支数"""
        return len(self.edges) - self.n + self.number_connected_components()

    def is_path(self, seq: Sequence[int]) -> bool:
        """seq 是否是图中的一条路径（顶点不重复, 相邻顶点相连）"""
        if not seq or len(set(seq)) != len(seq):
            return False
        if any(not 0 <= v < self.n for v in seq):
            return False
        return all(self.has_edge(seq[i], seq[i + 1]) for i in range(len(seq) - 1))

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges)
        for v, lab in self.labels.items():
            G.nodes[v]["role"] = lab.role.value
            G.nodes[v]["index"] = lab.index
        return G


def build_graph(edge_list: Iterable[Sequence[int]],
                labels: Optional[Mapping[int, RoleLabel]] = None,
                n: Optional[int] = None) -> Graph:
    """由边列表构造简单图; 重复边合并, 自环报错

    顶点数取 n、边端点最大值+1、标签键最大值+1 三者中的最大者。
    """
    edges = set()
    top = n or 0
    for pair in edge_list:
        u, v = int(pair[0]), int(pair[1])
        if u == v:
            raise LoopEdge(u)
        if u < 0 or v < 0:
            raise UnknownVertex(min(u, v))
        edges.add(norm_edge(u, v))
        top = max(top, u + 1, v + 1)
    labels = dict(labels or {})
    for v in labels:
        if v < 0:
            raise UnknownVertex(v)
        top = max(top, v + 1)
    plain = {v: lab for v, lab in labels.items() if lab.role != Role.PLAIN}
    return Graph(top, frozenset(edges), plain)


def from_networkx(G: nx.Graph) -> Graph:
    """把任意 networkx 图按节点排序顺序重新编号"""
    order = sorted(G.nodes())
    index = {x: i for i, x in enumerate(order)}
    return build_graph(((index[u], index[v]) for u, v in G.edges()), n=len(order))


def delete_edges(g: Graph, removed: Iterable[Sequence[int]]) -> Graph:
    """删除边集 (实现 Z-U), 顶点集不变"""
    gone = set()
    for e in removed:
        key = norm_edge(int(e[0]), int(e[1]))
        if key not in g.edges:
            raise UnknownEdge(key)
        gone.add(key)
    return Graph(g.n, g.edges - gone, g.labels)


def delete_vertices(g: Graph, removed: Iterable[int]) -> Tuple[Graph, List[int]]:
    """删除顶点并重新编号; 返回 (新图, kept), kept[新编号] = 原编号"""
    gone = set(removed)
    for v in gone:
        if not 0 <= v < g.n:
            raise UnknownVertex(v)
    return induced_subgraph(g, [v for v in g.vertices if v not in gone])


def induced_subgraph(g: Graph, keep: Iterable[int]) -> Tuple[Graph, List[int]]:
    """按原编号顺序保留顶点的导出子图"""
    kept = sorted(set(keep))
    index = {v: i for i, v in enumerate(kept)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    labels = {index[v]: lab for v, lab in g.labels.items() if v in index}
    return build_graph(edges, labels, n=len(kept)), kept


def subdivide_edges(g: Graph, edges: Optional[Iterable[Sequence[int]]] = None, k: int = 1) -> Graph:
    """把给定边（缺省为全部边）各替换为含 k 个内部顶点的路径"""
    targets = sorted(g.edges) if edges is None else sorted(norm_edge(e[0], e[1]) for e in edges)
    for e in targets:
        if e not in g.edges:
            raise UnknownEdge(e)
    new_edges = set(g.edges) - set(targets)
    nxt = g.n
    for u, v in targets:
        prev = u
        for _ in range(k):
            new_edges.add(norm_edge(prev, nxt))
            prev = nxt
            nxt += 1
        new_edges.add(norm_edge(prev, v))
    return build_graph(new_edges, g.labels, n=nxt)


def suppress_degree_two_mapped(g: Graph, protected: Iterable[int] = ()) -> Tuple[Graph, List[int]]:
    """反复收缩未受保护的度为2的顶点; 返回 (新图, kept), kept[新编号] = 原编号

    Raises:
        DegenerateContraction: 收缩会产生自环或重边
    """
    keep = set(protected)
    adj = [set(g.adj(v)) for v in g.vertices]
    alive = set(g.vertices)
    # 按编号顺序处理, 保证结果确定
    queue = sorted(v for v in alive if len(adj[v]) == 2 and v not in keep)
    while queue:
        v = queue.pop(0)
        if v not in alive or len(adj[v]) != 2:
            continue
        x, y = sorted(adj[v])
        if y in adj[x]:
            raise DegenerateContraction(v, (x, y))
        adj[x].discard(v)
        adj[y].discard(v)
        adj[x].add(y)
        adj[y].add(x)
        adj[v].clear()
        alive.discard(v)
    kept = sorted(alive)
    index = {v: i for i, v in enumerate(kept)}
    edges = [(index[u], index[w]) for u in kept for w in adj[u] if u < w]
    labels = {index[v]: lab for v, lab in g.labels.items() if v in index}
    return build_graph(edges, labels, n=len(kept)), kept


def suppress_degree_two(g: Graph, protected: Iterable[int] = ()) -> Graph:
    """收缩所有未受保护的度为2的顶点"""
    return suppress_degree_two_mapped(g, protected)[0]


def is_planar(g: Graph) -> bool:
    """平面性判定 (networkx 的左右平面性测试)"""
    planar, _ = nx.check_planarity(g.to_networkx())
    return planar

# ===================================
# 序列化: graph6 / DOT / JSON
# ===================================


def encode_graph6(g: Graph) -> bytes:
    """graph6 编码（不带 >>graph6<< 头, 不带换行）"""
    return nx.to_graph6_bytes(g.to_networkx(), nodes=list(g.vertices), header=False).strip()


def decode_graph6(data: Union[bytes, str]) -> Graph:
    """graph6 解码

    Raises:
        MalformedGraph6: 输入不是合法的 graph6
    """
    raw = data.encode("ascii", errors="replace") if isinstance(data, str) else bytes(data)
    raw = raw.strip()
    if raw.startswith(b">>graph6<<"):
        raw = raw[len(b">>graph6<<"):]
    if not raw:
        raise MalformedGraph6("空输入")
    if any(c < 63 or c > 126 for c in raw):
        raise MalformedGraph6("字符必须在 63..126 范围内")
    try:
        G = nx.from_graph6_bytes(raw)
    except (nx.NetworkXError, ValueError, IndexError, TypeError) as e:
        raise MalformedGraph6(str(e), cause=e)
    return build_graph(G.edges(), n=G.number_of_nodes())


def encode_dot(g: Graph, name: str = "G") -> str:
    """DOT 导出, 角色标签作为 label 属性"""
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        text = g.label(v).display()
        lines.append(f'  {v} [label="{text}"];' if text else f"  {v};")
    for u, v in g.edge_list():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_document(g: Graph) -> GraphDocument:
    return GraphDocument(
        n=g.n,
        edges=g.edge_list(),
        labels={str(v): g.labels[v].to_document() for v in sorted(g.labels)},
    )


def encode_json(g: Graph, indent: Optional[int] = 2) -> str:
    return json.dumps(graph_to_document(g).model_dump(mode="json"), indent=indent)


def graph_from_document(doc: GraphDocument) -> Graph:
    for u, v in doc.edges:
        if not (0 <= u < doc.n and 0 <= v < doc.n):
            raise MalformedGraphFile(f"边 {(u, v)} 的端点超出 0..{doc.n - 1}")
    labels = {}
    for key, lab in doc.labels.items():
        v = int(key)
        if not 0 <= v < doc.n:
            raise MalformedGraphFile(f"标签顶点 {v} 超出 0..{doc.n - 1}")
        labels[v] = RoleLabel.from_document(lab)
    try:
        return build_graph(doc.edges, labels, n=doc.n)
    except LoopEdge as e:
        raise MalformedGraphFile(e.message, cause=e)


def decode_json(text: Union[str, bytes, dict]) -> Graph:
    """解析标准 JSON 交换格式

    Raises:
        MalformedGraphFile: JSON 语法或结构错误
    """
    try:
        data = text if isinstance(text, dict) else json.loads(text)
        doc = GraphDocument.model_validate(data)
    except (json.JSONDecodeError, ValidationError, TypeError) as e:
        raise MalformedGraphFile(str(e), cause=e)
    return graph_from_document(doc)


def read_graph(path: Union[str, Path]) -> Graph:
    """按后缀读取图文件: .json / .g6 / .graph6"""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise MalformedGraphFile(f"无法读取 {path}", cause=e)
    suffix = path.suffix.lower()
    if suffix == ".json":
        return decode_json(data.decode("utf-8"))
    if suffix in (".g6", ".graph6"):
        return decode_graph6(data)
    raise MalformedGraphFile(f"不支持的图文件后缀: {suffix}")


def render_graph(g: Graph, fmt: str) -> str:
    """把图渲染为 graph6 / dot / json 文本"""
    if fmt == "graph6":
        return encode_graph6(g).decode("ascii") + "\n"
    if fmt == "dot":
        return encode_dot(g)
    if fmt == "json":
        return encode_json(g) + "\n"
    raise MalformedGraphFile(f"不支持的输出格式: {fmt}")

# ===================================
# 嵌入 (子划分的见证)
# ===================================


@dataclass(frozen=True)
class Embedding:
    """模式图 H 在宿主图 G 中的子划分见证

    branch_map[h] 是 H 的顶点 h 的像; edge_paths[(g, h)] (g < h) 是从
    branch_map[g] 到 branch_map[h] 的路径。
    """
    branch_map: Mapping[int, int]
    edge_paths: Mapping[Edge, Tuple[int, ...]]

    def image_vertices(self) -> FrozenSet[int]:
        verts = set(self.branch_map.values())
        for path in self.edge_paths.values():
            verts.update(path)
        return frozenset(verts)

    def image_edges(self) -> FrozenSet[Edge]:
        return frozenset(norm_edge(p[i], p[i + 1])
                         for p in self.edge_paths.values() for i in range(len(p) - 1))

    def to_dict(self) -> Dict[str, object]:
        return {
            "branch_map": {str(h): v for h, v in sorted(self.branch_map.items())},
            "edge_paths": [[list(e), list(p)] for e, p in sorted(self.edge_paths.items())],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "Embedding":
        try:
            branch = {int(h): int(v) for h, v in data["branch_map"].items()}
            paths = {norm_edge(int(e[0]), int(e[1])): tuple(int(x) for x in p)
                     for e, p in data["edge_paths"]}
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise MalformedGraphFile("嵌入格式错误", cause=e)
        return cls(branch, paths)


def validate_embedding(h: Graph, g: Graph, emb: Embedding) -> None:
    """检查 emb 是 H 在 G 中的子划分

    Raises:
        InvalidEmbedding: 任一条件不满足
    """
    if sorted(emb.branch_map) != list(h.vertices):
        raise InvalidEmbedding("分支映射的定义域不是 V(H)")
    images = list(emb.branch_map.values())
    if len(set(images)) != len(images):
        raise InvalidEmbedding("分支映射不是单射")
    if set(emb.edge_paths) != set(h.edges):
        raise InvalidEmbedding("边路径的定义域不是 E(H)")
    branch_images = set(images)
    interiors: set = set()
    for (x, y), path in emb.edge_paths.items():
        ends = {path[0], path[-1]} if path else set()
        if len(path) < 2 or ends != {emb.branch_map[x], emb.branch_map[y]}:
            raise InvalidEmbedding(f"边 {(x, y)} 的路径端点错误", context={"path": list(path)})
        if not g.is_path(path):
            raise InvalidEmbedding(f"边 {(x, y)} 的像不是 G 中的路径", context={"path": list(path)})
        inner = set(path[1:-1])
        if inner & branch_images:
            raise InvalidEmbedding(f"边 {(x, y)} 的路径内部经过分支顶点")
        if inner & interiors:
            raise InvalidEmbedding(f"边 {(x, y)} 的路径与其他路径内部相交")
        interiors |= inner
