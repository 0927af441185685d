import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metric_backbone import (
    Mode,
    WeightedGraph,
    all_pairs_distances,
    approximate_backbone,
    default_num_roots,
    dijkstra,
    from_edge_list,
    is_connected,
    max_shortest_path_cost,
    metric_backbone,
    operator_summary,
    planted_partition,
    sample_wsbm,
)
from metric_backbone.errors import Disconnected

from conftest import floyd_warshall, oracle_backbone, random_graph

TRI = [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]


def test_dijkstra_triangle():
    t = dijkstra(from_edge_list(TRI, Mode.COST), 0)
    assert t.dist.tolist() == [0.0, 1.0, 2.0]
    assert t.parent_edge(2) == (1, 2)
    assert t.parent_edge(0) is None


def test_dijkstra_single_vertex_and_unreachable():
    t = dijkstra(WeightedGraph.empty(1, Mode.COST), 0)
    assert t.dist.tolist() == [0.0] and t.parent_edge(0) is None
    g = from_edge_list([(0, 1, 1.0), (2, 3, 1.0)], Mode.COST)
    t = dijkstra(g, 0)
    assert np.isinf(t.dist[2:]).all() and t.parent_edge(3) is None


def test_backbone_triangle_and_tree(rng):
    res = metric_backbone(from_edge_list(TRI, Mode.COST))
    assert res.backbone.edge_set() == {(0, 1), (1, 2)}
    tree = random_graph(rng, 30, 0.0, connected=True)
    assert metric_backbone(tree).kept.all()


def test_backbone_rejects_proximity():
    with pytest.raises(Exception):
        metric_backbone(from_edge_list(TRI, Mode.PROXIMITY))


def test_integer_ties_kept():
    # square with a diagonal of the same length as the two-hop path: both routes are shortest
    g = from_edge_list([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0), (2, 3, 1.0)], Mode.COST)
    assert metric_backbone(g).kept.all()


def test_backbone_matches_floyd_warshall_100(rng):
    for _ in range(100):
        n = int(rng.integers(2, 61))
        g = random_graph(rng, n, float(rng.uniform(0.02, 0.5)))
        assert np.array_equal(metric_backbone(g).kept, oracle_backbone(g))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 50), st.floats(0.05, 0.7), st.integers(0, 2**31))
def test_backbone_properties(n, p, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n, p, connected=True)
    res = metric_backbone(g)
    b = res.backbone
    assert np.allclose(floyd_warshall(b), floyd_warshall(g), rtol=1e-9)
    assert is_connected(b)
    # surviving weights untouched
    for a, c, w in b.edges():
        assert w == g.weight(a, c)
    assert metric_backbone(b).kept.all()


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 40), st.floats(0.1, 0.8), st.integers(0, 2**31))
def test_approximate_monotone_and_contained(n, p, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n, p)
    exact = metric_backbone(g).kept
    perm = rng.permutation(n)
    r1 = int(rng.integers(1, n + 1))
    small = approximate_backbone(g, roots=perm[:r1]).kept
    large = approximate_backbone(g, roots=perm[: min(n, r1 + 2)]).kept
    assert not np.any(small & ~large)
    assert not np.any(large & ~exact)


def test_approximate_one_root_is_a_tree(rng):
    g = random_graph(rng, 40, 0.2, connected=True)
    res = approximate_backbone(g, num_roots=1, seed=3)
    assert res.kept.sum() == g.n - 1 and is_connected(res.backbone)


def test_approximate_default_roots():
    assert default_num_roots(100) == math.ceil(2 * math.log(100))
    g = from_edge_list(TRI, Mode.COST)
    assert approximate_backbone(g, seed=0).roots_used.size == 3


def test_max_shortest_path_cost():
    assert max_shortest_path_cost(from_edge_list([(0, 1, 1.0), (1, 2, 1.0)], Mode.COST)) == 2.0
    k5 = from_edge_list([(i, j, 1.0) for i in range(5) for j in range(i + 1, 5)], Mode.COST)
    assert max_shortest_path_cost(k5) == 1.0
    with pytest.raises(Disconnected):
        max_shortest_path_cost(from_edge_list([(0, 1, 1.0), (2, 3, 1.0)], Mode.COST))


def test_max_cost_within_band():
    p = planted_partition(2000, 2, 6, 2)
    _, g = sample_wsbm(p, 0)
    bound = 3.5 / operator_summary(p).tau_min * p.log_scale
    assert max_shortest_path_cost(g) <= bound


def test_all_pairs_matches_oracle(rng):
    g = random_graph(rng, 25, 0.3)
    assert np.allclose(all_pairs_distances(g), floyd_warshall(g))
