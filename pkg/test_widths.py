#!/usr/bin/env python3
"""
测试精确路径宽/树宽及其证书 (与排列穷举对照)
"""

import random
import sys
from itertools import permutations
from pathlib import Path

import networkx as nx
import pytest

# 添加模块路径
sys.path.append(str(Path(__file__).parent))

from modules.core.exceptions import InvalidDecomposition, ResourceLimitExceeded
from modules.gadgets import heinlein_wall, wall_prime
from modules.graph_core import build_graph, from_networkx
from modules.verify.budget import SearchBudget
from modules.verify.widths import (
    PathDecomposition, TreeDecomposition, pathwidth_exact, treewidth_exact,
    validate_path_decomposition, validate_tree_decomposition, width_lower_bound,
)


def brute_pathwidth(g):
    """全部顶点序上前缀边界的最大值取最小"""
    best = g.n
    for order in permutations(g.vertices):
        prefix = set()
        worst = 0
        for v in order:
            prefix.add(v)
            boundary = sum(1 for u in prefix if g.adj(u) - prefix)
            worst = max(worst, boundary)
        best = min(best, worst)
    return best


def brute_treewidth(g):
    """全部消去序上消去时的最大度取最小"""
    best = g.n
    for order in permutations(g.vertices):
        G = g.to_networkx()
        worst = 0
        for v in order:
            nb = list(G[v])
            worst = max(worst, len(nb))
            G.add_edges_from((x, y) for i, x in enumerate(nb) for y in nb[i + 1:])
            G.remove_node(v)
        best = min(best, worst)
    return best


@pytest.mark.parametrize("g, pw, tw", [
    (build_graph([(i, i + 1) for i in range(6)]), 1, 1),
    (build_graph([(i, (i + 1) % 5) for i in range(5)]), 2, 2),
    (from_networkx(nx.complete_graph(4)), 3, 3),
    (build_graph([], n=3), 0, 0),
], ids=["P7", "C5", "K4", "independent-3"])
def test_small_graph_widths(g, pw, tw):
    pd = pathwidth_exact(g)
    td = treewidth_exact(g)
    assert pd.width == pw
    assert td.width == tw
    validate_path_decomposition(g, pd)
    validate_tree_decomposition(g, td)


def test_empty_graph_width():
    """测试空图的宽度为 -1"""
    g = build_graph([], n=0)
    assert pathwidth_exact(g).width == -1
    assert treewidth_exact(g).width == -1


def test_prism_widths():
    g = wall_prime(2, 2).graph
    assert treewidth_exact(g).width == 3
    assert pathwidth_exact(g).width == 3


@pytest.mark.parametrize("r", [1, 2])
def test_heinlein_widths(r):
    """测试 Heinlein 墙: 路径宽 <= 5, 树宽 <= 路径宽, 证书可校验"""
    g = heinlein_wall(r).graph
    pd = pathwidth_exact(g)
    td = treewidth_exact(g)
    validate_path_decomposition(g, pd)
    validate_tree_decomposition(g, td)
    assert pd.width <= 5
    assert width_lower_bound(g) <= td.width <= pd.width


@pytest.mark.slow
def test_heinlein_3_pathwidth():
    g = heinlein_wall(3).graph
    pd = pathwidth_exact(g)
    validate_path_decomposition(g, pd)
    assert pd.width <= 5


@pytest.mark.parametrize("seed", range(30))
def test_widths_match_brute_force(seed):
    """测试随机小图上与排列穷举一致"""
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    G = nx.gnp_random_graph(n, rng.choice([0.3, 0.5, 0.8]), seed=seed)
    g = build_graph(G.edges(), n=n)
    pd = pathwidth_exact(g)
    td = treewidth_exact(g)
    validate_path_decomposition(g, pd)
    validate_tree_decomposition(g, td)
    assert pd.width == brute_pathwidth(g)
    assert td.width == brute_treewidth(g)


def test_validate_path_decomposition_rejects():
    """测试路径分解校验: 漏边、不连续、宽度声明不符"""
    g = build_graph([(0, 1), (1, 2)])
    good = PathDecomposition(1, (0, 1, 2), (frozenset({0, 1}), frozenset({1, 2})))
    validate_path_decomposition(g, good)
    with pytest.raises(InvalidDecomposition):
        validate_path_decomposition(g, PathDecomposition(1, (), (frozenset({0, 1}), frozenset({2}))))
    with pytest.raises(InvalidDecomposition):
        validate_path_decomposition(g, PathDecomposition(
            1, (), (frozenset({0, 1}), frozenset({1, 2}), frozenset({0}))))
    with pytest.raises(InvalidDecomposition):
        validate_path_decomposition(g, PathDecomposition(2, (), good.bags))
    with pytest.raises(InvalidDecomposition):
        validate_path_decomposition(g, PathDecomposition(0, (), (frozenset({0}), frozenset({1}))))


def test_validate_tree_decomposition_rejects():
    """测试树分解校验: 非树结构、子树不连通"""
    g = build_graph([(0, 1), (1, 2)])
    bags = (frozenset({0, 1}), frozenset({1, 2}))
    validate_tree_decomposition(g, TreeDecomposition(1, bags, ((0, 1),)))
    with pytest.raises(InvalidDecomposition):
        validate_tree_decomposition(g, TreeDecomposition(1, bags, ()))
    split = (frozenset({0, 1}), frozenset({2}), frozenset({1, 2}))
    with pytest.raises(InvalidDecomposition):
        validate_tree_decomposition(g, TreeDecomposition(1, split, ((0, 1), (1, 2))))


def test_pathwidth_budget():
    with pytest.raises(ResourceLimitExceeded):
        pathwidth_exact(heinlein_wall(2).graph, SearchBudget(2))
