#!/usr/bin/env python3
"""
测试图核心: 构造、删边删点、收缩度为2的顶点、序列化与嵌入校验
"""

import random
import sys
from pathlib import Path

import networkx as nx
import pytest

# 添加模块路径
sys.path.append(str(Path(__file__).parent))

from modules.core.exceptions import (
    DegenerateContraction, InvalidEmbedding, LoopEdge, MalformedGraph6, MalformedGraphFile,
    UnknownEdge, UnknownVertex,
)
from modules.gadgets import (
    build_z, crossed_paths_gadget, designate_whole, elementary_wall, heinlein_wall, wall_prime,
)
from modules.graph_core import (
    Embedding, Role, build_graph, decode_graph6, decode_json, delete_edges, delete_vertices,
    encode_dot, encode_graph6, encode_json, from_networkx, is_planar, read_graph, render_graph,
    subdivide_edges, suppress_degree_two, suppress_degree_two_mapped, validate_embedding,
)


def cycle(n):
    return build_graph([(i, (i + 1) % n) for i in range(n)])


def test_build_graph_basics():
    """测试边列表构造: 重复边合并, 邻居有序"""
    g = build_graph([(0, 1), (1, 2), (2, 1)])
    assert g.n == 3
    assert g.number_of_edges() == 2
    assert g.degrees() == [1, 2, 1]
    assert g.neighbours(1) == [0, 2]
    assert build_graph([]).n == 0
    assert build_graph([], n=4).cycle_rank() == 0


def test_build_graph_rejects_bad_edges():
    """测试自环与负编号"""
    with pytest.raises(LoopEdge):
        build_graph([(0, 0)])
    with pytest.raises(UnknownVertex):
        build_graph([(-1, 2)])


def test_equality_ignores_labels():
    """测试图相等性只比较顶点与边"""
    plain = build_graph([(0, 1)])
    labelled = heinlein_wall(1).graph
    assert plain != labelled
    stripped = build_graph(labelled.edges, n=labelled.n)
    assert stripped == labelled


def test_delete_edges():
    """测试删边: 顶点集不变, 未知边报错"""
    c4 = cycle(4)
    p4 = delete_edges(c4, [(3, 0)])
    assert p4.n == 4
    assert sorted(p4.degrees()) == [1, 1, 2, 2]
    with pytest.raises(UnknownEdge):
        delete_edges(c4, [(0, 2)])


def test_delete_vertices_renumbers():
    """测试删点后的重新编号"""
    g, kept = delete_vertices(cycle(5), [0])
    assert kept == [1, 2, 3, 4]
    assert g.edge_list() == [(0, 1), (1, 2), (2, 3)]
    with pytest.raises(UnknownVertex):
        delete_vertices(cycle(3), [7])


def test_subdivide_edges():
    """测试子划分: 每条边加 k 个内部顶点"""
    g = subdivide_edges(cycle(3), k=2)
    assert g.n == 9
    assert g.number_of_edges() == 9
    assert set(g.degrees()) == {2}


def test_suppress_path_with_protected_ends():
    """测试收缩: 保护端点的路径收缩为一条边"""
    g, kept = suppress_degree_two_mapped(build_graph([(0, 1), (1, 2)]), protected=[0, 2])
    assert g.n == 2
    assert g.edge_list() == [(0, 1)]
    assert kept == [0, 2]


def test_suppress_cycle_is_degenerate():
    """测试收缩: 环最终会产生重边"""
    with pytest.raises(DegenerateContraction):
        suppress_degree_two(cycle(6))


def test_suppress_undoes_subdivision():
    """测试收缩子划分后的基本墙得到 wall'"""
    base = elementary_wall(2, 2).graph
    g = suppress_degree_two(subdivide_edges(base, k=1))
    assert nx.is_isomorphic(g.to_networkx(), wall_prime(2, 2).graph.to_networkx())


@pytest.mark.parametrize("seed", range(30))
def test_suppress_is_idempotent(seed):
    """测试收缩后再收缩不变"""
    rng = random.Random(seed)
    base = from_networkx(nx.random_regular_graph(3, 2 * rng.randint(2, 6), seed=seed))
    edges = [e for e in base.edge_list() if rng.random() < 0.5]
    g = subdivide_edges(base, edges, k=rng.randint(1, 3))
    try:
        once = suppress_degree_two(g)
    except DegenerateContraction:
        return
    assert once == suppress_degree_two(once)
    assert 2 not in once.degrees()
    for m, n in ((2, 2), (3, 4)):
        w = wall_prime(m, n).graph
        assert suppress_degree_two(w) == w


def test_planarity():
    """测试平面性"""
    assert is_planar(from_networkx(nx.complete_graph(4)))
    assert not is_planar(from_networkx(nx.complete_graph(5)))
    assert is_planar(wall_prime(4, 3).graph)


def test_graph6_round_trip():
    """测试 graph6 编解码"""
    k4 = from_networkx(nx.complete_graph(4))
    assert encode_graph6(k4) == b"C~"
    assert decode_graph6(b"C~") == k4
    assert decode_graph6(">>graph6<<C~\n") == k4
    w = wall_prime(3, 3).graph
    assert decode_graph6(encode_graph6(w)) == w


def round_trip_graphs():
    """200 个随机图, 加上 62 个顶点以内的全部构件与墙"""
    graphs = []
    for seed in range(200):
        rng = random.Random(seed)
        n = rng.randint(1, 62)
        G = nx.gnp_random_graph(n, rng.uniform(0.02, 0.5), seed=seed)
        graphs.append(build_graph(G.edges(), n=n))
    graphs.extend(heinlein_wall(r).graph for r in range(1, 6))
    graphs.append(crossed_paths_gadget().graph)
    graphs.extend(elementary_wall(m, n).graph for m in range(1, 5) for n in range(1, 5))
    graphs.extend(wall_prime(m, n).graph for m in range(2, 6) for n in range(2, 6))
    w = wall_prime(2, 2)
    graphs.append(build_z(w.graph, designate_whole(w), (0, 2), (1, 5), r=1, min_apart=0).z)
    return [g for g in graphs if g.n <= 62]


def test_graph6_and_json_round_trip():
    """测试随机图与全部小构件经 graph6 和 JSON 往返后不变, JSON 保留标签"""
    graphs = round_trip_graphs()
    assert len(graphs) > 220
    for g in graphs:
        assert decode_graph6(encode_graph6(g)) == g
        back = decode_json(encode_json(g))
        assert back == g
        assert dict(back.labels) == dict(g.labels)


@pytest.mark.parametrize("data", [b"", b"\x01\x02", "C"])
def test_graph6_malformed(data):
    """测试非法 graph6 输入"""
    with pytest.raises(MalformedGraph6):
        decode_graph6(data)


def test_json_keeps_labels():
    """测试 JSON 交换格式保留角色标签"""
    g = heinlein_wall(2).graph
    back = decode_json(encode_json(g))
    assert back == g
    assert back.label(0).role == Role.TERMINAL_A
    assert back.label(3).role == Role.BOTTLENECK
    assert back.label(3).index == (1,)


@pytest.mark.parametrize("text", [
    "not json",
    '{"n": 2, "edges": [[0, 5]]}',
    '{"n": 2, "edges": [[1, 1]]}',
    '{"n": 2, "edges": [], "labels": {"x": {"role": "Plain"}}}',
])
def test_json_malformed(text):
    """测试非法 JSON 图文件"""
    with pytest.raises(MalformedGraphFile):
        decode_json(text)


def test_read_graph_by_suffix(tmp_path):
    """测试按后缀读取图文件"""
    g = wall_prime(2, 2).graph
    (tmp_path / "w.json").write_text(render_graph(g, "json"), encoding="utf-8")
    (tmp_path / "w.g6").write_text(render_graph(g, "graph6"), encoding="utf-8")
    (tmp_path / "w.txt").write_text("", encoding="utf-8")
    assert read_graph(tmp_path / "w.json") == g
    assert read_graph(tmp_path / "w.g6") == g
    with pytest.raises(MalformedGraphFile):
        read_graph(tmp_path / "w.txt")


def test_dot_has_labels():
    """测试 DOT 导出带角色标签"""
    text = encode_dot(heinlein_wall(1).graph)
    assert text.startswith("graph G {")
    assert "0 -- 4;" in text
    assert text.count("--") == 6


def test_validate_embedding():
    """测试嵌入校验: C3 在 C6 中的子划分"""
    c3, c6 = cycle(3), cycle(6)
    emb = Embedding({0: 0, 1: 2, 2: 4}, {(0, 1): (0, 1, 2), (1, 2): (2, 3, 4), (0, 2): (0, 5, 4)})
    validate_embedding(c3, c6, emb)
    assert emb.image_vertices() == frozenset(range(6))
    assert Embedding.from_dict(emb.to_dict()) == emb


@pytest.mark.parametrize("emb", [
    Embedding({0: 0, 1: 0, 2: 4}, {(0, 1): (0, 1, 2), (1, 2): (2, 3, 4), (0, 2): (0, 5, 4)}),
    Embedding({0: 0, 1: 2, 2: 4}, {(0, 1): (0, 1, 2), (1, 2): (2, 3, 4)}),
    Embedding({0: 0, 1: 2, 2: 4}, {(0, 1): (0, 2), (1, 2): (2, 3, 4), (0, 2): (0, 5, 4)}),
    Embedding({0: 0, 1: 1, 2: 4}, {(0, 1): (0, 1), (1, 2): (1, 0, 5, 4), (0, 2): (0, 5, 4)}),
    Embedding({0: 0, 1: 2, 2: 4}, {(0, 1): (0, 1), (1, 2): (2, 3, 4), (0, 2): (0, 5, 4)}),
])
def test_validate_embedding_rejects(emb):
    """测试嵌入校验拒绝非单射、缺边、非路径、内部相交"""
    with pytest.raises(InvalidEmbedding):
        validate_embedding(cycle(3), cycle(6), emb)


def test_k33_is_not_planar():
    """测试 K3,3 及其子划分不是平面图"""
    k33 = from_networkx(nx.complete_bipartite_graph(3, 3))
    assert not is_planar(k33)
    assert not is_planar(subdivide_edges(k33, k=2))
    assert is_planar(delete_edges(k33, [k33.edge_list()[0]]))


@pytest.mark.parametrize("m", range(2, 7))
@pytest.mark.parametrize("n", range(2, 7))
def test_every_wall_prime_is_planar(m, n):
    """测试 6x6 以内的 wall' 都是平面图"""
    assert is_planar(wall_prime(m, n).graph)
