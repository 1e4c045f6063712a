#!/usr/bin/env python3
"""
测试构件生成: Heinlein 墙、基本墙、wall'、边倍增与反例图 Z
"""

import random
import sys
from pathlib import Path

import networkx as nx
import pytest

# 添加模块路径
sys.path.append(str(Path(__file__).parent))

from modules.core.exceptions import (
    BadDesignation, BadIncidence, Degenerate, EdgesNotFarApart, InvalidSize, MalformedGraphFile,
    NotSubcubic, UnknownEdge,
)
from modules.gadgets import (
    CounterexampleInstance, WallDesignation, build_z, crossed_paths_gadget, designate_whole,
    elementary_grid, elementary_wall, gadget_from_graph, heinlein_wall, multiply_edge,
    path_vertex_id, wall_prime, z_minus_w_zero,
)
from modules.graph_core import (
    Role, build_graph, delete_edges, delete_vertices, norm_edge, suppress_degree_two,
    suppress_degree_two_mapped, validate_embedding,
)
from modules.wall_geom import select_far_edge_pair


@pytest.fixture(scope="module")
def prism_instance():
    w = wall_prime(2, 2)
    return build_z(w.graph, designate_whole(w), (0, 2), (1, 5), r=1, min_apart=0)


@pytest.mark.parametrize("r", range(1, 7))
def test_heinlein_counts(r):
    """测试 Heinlein 墙的顶点数、边数与度"""
    w = heinlein_wall(r)
    g = w.graph
    assert g.n == 2 * r * r + r + 3
    assert g.number_of_edges() == 4 * r * r + 2 * r
    assert w.terminals == (0, 1, 2, 2 + r)
    assert g.degree(0) == g.degree(1) == r
    assert g.degree(2) == g.degree(2 + r) == r + 1
    for j in range(1, r):
        assert g.degree(2 + j) == 2 * r + 2
    for j in range(1, r + 1):
        path = w.path(j)
        assert path[0] == path_vertex_id(r, j, 1)
        assert g.is_path(path)
        assert all(g.degree(u) == 3 for u in path)


def test_heinlein_small_examples():
    """测试 r=1 与 r=2 的具体结构"""
    w1 = heinlein_wall(1)
    assert w1.graph.n == 6
    assert w1.graph.edge_list() == [(0, 4), (1, 5), (2, 3), (2, 4), (3, 5), (4, 5)]
    w2 = heinlein_wall(2)
    assert w2.graph.n == 13 and w2.graph.number_of_edges() == 20
    assert w2.graph.degree(3) == 6
    assert w2.graph.label(5).role == Role.PATH_VERTEX
    assert w2.graph.label(5).index == (1, 1)


@pytest.mark.parametrize("r", [0, -1])
def test_heinlein_invalid_size(r):
    with pytest.raises(InvalidSize):
        heinlein_wall(r)


def test_gadget_from_labels():
    """测试从标签恢复端点"""
    w = heinlein_wall(3)
    assert gadget_from_graph(w.graph).terminals == w.terminals
    with pytest.raises(MalformedGraphFile):
        gadget_from_graph(build_graph([(0, 1)]))


def test_elementary_grid():
    g = elementary_grid(3, 4)
    assert g.n == 12
    assert g.number_of_edges() == 3 * 3 + 2 * 4
    with pytest.raises(InvalidSize):
        elementary_grid(0, 2)


@pytest.mark.parametrize("m", range(1, 6))
@pytest.mark.parametrize("n", range(1, 6))
def test_elementary_wall_structure(m, n):
    """测试基本墙: 圈秩 = 砖块数 = m*n, 砖块是无弦六边形"""
    w = elementary_wall(m, n)
    g = w.graph
    assert g.cycle_rank() == m * n
    assert len(w.bricks) == m * n
    assert min(g.degrees()) >= 2 and g.max_degree() <= 3
    assert len(w.rows) == m + 1 and len(w.columns) == n + 1
    for row in w.rows:
        assert g.is_path(row)
    for col in w.columns:
        assert g.is_path(col)
    for brick in w.bricks:
        inside = [(x, y) for x, y in g.edges if x in brick and y in brick]
        assert len(set(brick)) == 6 and len(inside) == 6
        assert all(g.has_edge(brick[i], brick[(i + 1) % 6]) for i in range(6))
    cycle = w.outercycle
    assert len(set(cycle)) == len(cycle)
    assert all(g.has_edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle)))


@pytest.mark.parametrize("m", range(2, 6))
@pytest.mark.parametrize("n", range(2, 6))
def test_wall_prime_matches_suppression(m, n):
    """测试 wall' 等于收缩后的基本墙, 且为三正则图"""
    w = wall_prime(m, n)
    g = w.graph
    assert g == suppress_degree_two(elementary_wall(m, n).graph)
    assert set(g.degrees()) == {3}
    assert len(w.bricks) == m * n
    assert set(w.proper_branch_vertices()) == set(g.vertices)


@pytest.mark.parametrize("size", [(1, 1), (1, 3), (3, 1)])
def test_wall_prime_degenerate(size):
    with pytest.raises(Degenerate):
        wall_prime(*size)


def test_wall_prime_2x2_is_prism():
    """测试 2x2 的 wall' 是三棱柱"""
    g = wall_prime(2, 2).graph
    assert g.edge_list() == [(0, 1), (0, 2), (0, 4), (1, 2), (1, 5), (2, 3), (3, 4), (3, 5), (4, 5)]
    assert nx.is_isomorphic(g.to_networkx(), nx.circular_ladder_graph(3))


def test_multiply_edge():
    """测试边倍增: 删去原边, 加入 k 个中点"""
    g = multiply_edge(build_graph([(0, 1), (1, 2)]), (1, 0), 3)
    assert g.n == 6
    assert not g.has_edge(0, 1)
    for mid in (3, 4, 5):
        assert g.neighbours(mid) == [0, 1]
        assert g.label(mid).role == Role.MIDPOINT
    with pytest.raises(UnknownEdge):
        multiply_edge(g, (0, 2), 1)
    with pytest.raises(InvalidSize):
        multiply_edge(g, (1, 2), 0)


@pytest.mark.parametrize("seed", range(100))
def test_multiply_edge_contracts_back(seed):
    """测试边倍增后只留一个中点并收缩, 得到原图"""
    rng = random.Random(seed)
    n = rng.randint(2, 9)
    G = nx.gnp_random_graph(n, 0.4, seed=seed)
    g = build_graph(list(G.edges()) or [(0, 1)], n=n)
    e = rng.choice(g.edge_list())
    k = rng.randint(1, 4)
    m = multiply_edge(g, e[::-1] if rng.random() < 0.5 else e, k)
    assert m.n == g.n + k
    assert m.number_of_edges() == g.number_of_edges() - 1 + 2 * k
    single, kept = delete_vertices(m, range(g.n + 1, g.n + k))
    assert kept[:g.n] == list(g.vertices)
    back, survivors = suppress_degree_two_mapped(single, protected=g.vertices)
    assert survivors == list(g.vertices)
    assert back == g


def test_designation_validation():
    """测试墙指定的校验与序列化"""
    w = wall_prime(2, 2)
    d = designate_whole(w)
    d.validate(w.graph)
    assert WallDesignation.from_dict(d.to_dict()).vertex_map == d.vertex_map
    with pytest.raises(BadDesignation):
        WallDesignation(w, (0, 1, 2, 3, 4, 4)).validate(w.graph)
    with pytest.raises(BadDesignation):
        WallDesignation(w, (1, 0, 2, 3, 4, 5)).validate(build_graph([(0, 1)], n=6))


def test_build_z_prism(prism_instance):
    """测试由三棱柱构造 Z 的规模与端点"""
    inst = prism_instance
    z = inst.z
    assert z.n == 6 + 2 * 7 + 9
    assert z.number_of_edges() == 2 * 2 * 7 + 20
    assert inst.terminals() == (0, 2, 1, 5)
    assert z.label(0).role == Role.TERMINAL_A
    assert z.label(2).role == Role.TERMINAL_B
    assert z.label(1).role == Role.TERMINAL_C
    assert z.label(5).role == Role.TERMINAL_D
    assert not z.has_edge(0, 2) and not z.has_edge(1, 5)
    assert len(inst.bundles) == 7
    assert all(len(mids) == 2 for mids in inst.bundles.values())
    assert inst.w_zero() == list(range(20, 29))


def test_build_z_vertex_formula():
    """测试 |V(Z)| 公式: |V(H)| + 2r(|E(H)|-2) + 8r²+2r-1"""
    w = wall_prime(2, 3)
    h = w.graph
    for r in (1, 2):
        inst = build_z(h, designate_whole(w), *select_far_edge_pair(w, 0), r=r, min_apart=0)
        assert inst.z.n == h.n + 2 * r * (h.number_of_edges() - 2) + 8 * r * r + 2 * r - 1


def test_m_star_is_embedding(prism_instance):
    """测试 M* 是 M-{e1,e2} 在 Z 中的子划分"""
    inst = prism_instance
    validate_embedding(inst.m_star_pattern(), inst.z, inst.m_star)
    inner = inst.m_star.image_vertices() - set(range(6))
    assert inner.isdisjoint(inst.w_zero())


def test_z_minus_w_zero(prism_instance):
    g = z_minus_w_zero(prism_instance)
    assert g.n == 20
    assert g.number_of_edges() == 28


def test_instance_sidecar_round_trip(prism_instance):
    """测试实例边车数据可重建"""
    data = prism_instance.to_dict()
    again = CounterexampleInstance.from_dict(data)
    assert again.z == prism_instance.z
    assert again.terminals() == prism_instance.terminals()
    data["z"]["edges"] = data["z"]["edges"][1:]
    with pytest.raises(MalformedGraphFile):
        CounterexampleInstance.from_dict(data)


def test_build_z_with_crossed_gadget():
    w = wall_prime(2, 2)
    inst = build_z(w.graph, designate_whole(w), (0, 2), (1, 5), r=1, min_apart=0,
                   gadget=crossed_paths_gadget())
    assert inst.z.n == 6 + 14 + 2
    assert inst.z.has_edge(0, 20) and inst.z.has_edge(20, 5)


def test_build_z_errors():
    """测试 build_z 的参数校验"""
    w = wall_prime(2, 2)
    h, d = w.graph, designate_whole(w)
    with pytest.raises(InvalidSize):
        build_z(h, d, (0, 2), (1, 5), r=0, min_apart=0)
    with pytest.raises(UnknownEdge):
        build_z(h, d, (0, 3), (1, 5), r=1, min_apart=0)
    with pytest.raises(BadIncidence):
        build_z(h, d, (0, 2), (0, 1), r=1, min_apart=0)
    with pytest.raises(EdgesNotFarApart):
        build_z(h, d, (0, 2), (1, 5), r=1, min_apart=1)
    star = build_graph([(0, 1), (0, 2), (0, 3), (0, 4)])
    with pytest.raises(NotSubcubic):
        build_z(star, d, (0, 1), (0, 2), r=1, min_apart=0)


def contract_z(inst):
    """每束只留一个中点并收缩, 删去构件: 得到 H-{e1,e2} (H 的编号不变)"""
    h = inst.pattern
    extra = [mid for mids in inst.bundles.values() for mid in mids[1:]]
    g = delete_edges(inst.z, inst.gadget_edges())
    g, kept = delete_vertices(g, extra + inst.w_zero())
    assert kept[:h.n] == list(h.vertices)
    g, survivors = suppress_degree_two_mapped(g, protected=range(h.n))
    assert survivors == list(h.vertices)
    return g


@pytest.mark.parametrize("size,r,gadget", [
    ((2, 2), 1, None), ((2, 2), 2, None), ((2, 2), 1, crossed_paths_gadget()),
    ((2, 3), 1, None), ((3, 3), 1, None),
])
def test_z_contracts_to_pattern(size, r, gadget):
    """测试 Z 收缩每束并删去构件后是 H-{e1,e2}, 补回两条边与 H 同构"""
    w = wall_prime(*size)
    h = w.graph
    inst = build_z(h, designate_whole(w), *select_far_edge_pair(w, 0), r=r, min_apart=0, gadget=gadget)
    e1, e2 = norm_edge(*inst.e1), norm_edge(*inst.e2)
    g = contract_z(inst)
    assert g == delete_edges(h, [e1, e2])
    restored = build_graph(sorted(g.edges | {e1, e2}), n=g.n)
    assert nx.is_isomorphic(restored.to_networkx(), h.to_networkx())
