import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metric_backbone import (
    Mode,
    PointCloud,
    distance_to_proximity,
    from_edge_list,
    knn_graph,
    proximity_to_distance,
    weighted_jaccard,
)
from metric_backbone.errors import DuplicatePoints, NonPositiveProximity, WrongMode

from conftest import random_graph


def naive_jaccard(g):
    nbr = [set(g.neighbors(x).tolist()) | {x} for x in range(g.n)]
    return np.array([len(nbr[a] & nbr[b]) / len(nbr[a] | nbr[b]) for a, b in zip(g.u, g.v)])


def test_jaccard_triangle_and_path():
    tri = from_edge_list([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], Mode.PROXIMITY)
    assert np.allclose(weighted_jaccard(tri).w, 1.0)
    path = from_edge_list([(0, 1, 1.0), (1, 2, 1.0)], Mode.PROXIMITY)
    j = weighted_jaccard(path)
    assert math.isclose(j.weight(0, 1), 2 / 3)


def test_jaccard_identical_weighted_stars():
    # u=0 and v=1 share the leaves 2..5 with identical weights and see each other at the max weight
    rows = [(0, 1, 0.9)] + [(x, leaf, w) for x in (0, 1) for leaf, w in zip(range(2, 6), (0.2, 0.5, 0.9, 0.3))]
    g = from_edge_list(rows, Mode.PROXIMITY)
    assert math.isclose(weighted_jaccard(g).weight(0, 1), 1.0)


def test_jaccard_cost_graph_needs_flag():
    g = from_edge_list([(0, 1, 2.0)], Mode.COST)
    with pytest.raises(WrongMode):
        weighted_jaccard(g)
    assert weighted_jaccard(g, unweighted=True).mode is Mode.PROXIMITY


def test_jaccard_matches_naive_sets_on_50_graphs(rng):
    for _ in range(50):
        g = random_graph(rng, int(rng.integers(3, 60)), float(rng.uniform(0.05, 0.5)), connected=True)
        j = weighted_jaccard(g, unweighted=True, chunk=64)
        assert np.allclose(j.w, naive_jaccard(g))
        assert ((j.w > 0) & (j.w <= 1)).all()


def test_weighted_jaccard_naive_oracle(rng):
    g = random_graph(rng, 30, 0.3, mode=Mode.PROXIMITY, connected=True, low=0.05, high=1.0)
    a = g.to_dense()
    np.fill_diagonal(a, a.max(axis=1))
    want = [np.minimum(a[x], a[y]).sum() / np.maximum(a[x], a[y]).sum() for x, y in zip(g.u, g.v)]
    assert np.allclose(weighted_jaccard(g).w, want)


def test_proximity_to_distance_examples():
    g = from_edge_list([(0, 1, 0.5), (1, 2, 0.25), (2, 3, 1.0)], Mode.PROXIMITY)
    d = proximity_to_distance(g)
    assert d.mode is Mode.COST
    assert d.weight(0, 1) == 1.0 and d.weight(1, 2) == 3.0
    eps = 1e-9
    assert math.isclose(d.weight(2, 3), eps / (1 - eps), rel_tol=1e-6) and d.weight(2, 3) > 0
    back = distance_to_proximity(d)
    assert np.allclose(back.w[:2], [0.5, 0.25])


def test_proximity_domain_errors():
    with pytest.raises(ValueError):
        proximity_to_distance(from_edge_list([(0, 1, 1.5)], Mode.PROXIMITY))
    assert issubclass(NonPositiveProximity, ValueError)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-6, 1.0), st.floats(1e-6, 1.0))
def test_distance_strictly_decreasing(p1, p2):
    if p1 == p2:
        return
    lo, hi = min(p1, p2), max(p1, p2)
    g = from_edge_list([(0, 1, lo), (1, 2, hi)], Mode.PROXIMITY)
    d = proximity_to_distance(g)
    if hi < 1 - 1e-9:
        assert d.weight(0, 1) > d.weight(1, 2)
    else:
        assert d.weight(0, 1) >= d.weight(1, 2)


def test_knn_collinear():
    g = knn_graph(PointCloud(np.array([[0.0], [1.0], [10.0]])), 1)
    assert g.edge_set() == {(0, 1), (1, 2)}
    # point 2 nominates 1 but 1 does not nominate 2
    s21 = math.exp(-81.0 / 81.0)
    assert math.isclose(g.weight(1, 2), s21 / 2)


def test_knn_complete_when_q_is_n_minus_1(rng):
    x = rng.standard_normal((12, 3))
    g = knn_graph(PointCloud(x), 11)
    assert g.m == 66


def test_knn_tie_break_smaller_id():
    # 0 sits between 1 and 2 at equal distance; with q=1 it nominates 1
    g = knn_graph(PointCloud(np.array([[0.0], [-1.0], [1.0], [5.0]])), 1)
    # 1 and 0 nominate each other; 2 nominates 0 but 0 picked 1
    assert math.isclose(g.weight(0, 1), math.exp(-1.0))
    assert math.isclose(g.weight(0, 2), math.exp(-1.0) / 2)
    from metric_backbone.transforms import _select_neighbors

    mask = _select_neighbors(np.array([[np.inf, 1.0, 1.0, 1.0]]), 2)
    assert mask.tolist() == [[False, True, True, False]]


@settings(max_examples=30, deadline=None)
@given(st.integers(5, 60), st.integers(1, 4), st.integers(0, 2**31), st.sampled_from(["gaussian", "angular"]))
def test_knn_edge_count_bounds(n, q, seed, kernel):
    x = np.random.default_rng(seed).standard_normal((n, 3)) + 0.01
    g = knn_graph(PointCloud(x), q, kernel, chunk_rows=7)
    assert math.ceil(n * q / 2) <= g.m <= n * q
    assert ((g.w > 0) & (g.w <= 1)).all()
    deg = g.degrees()
    assert (deg >= q).all()
    full = knn_graph(PointCloud(x), q, kernel)
    assert full.edge_set() == g.edge_set() and np.allclose(full.w, g.w)


def test_knn_duplicates_and_angular_zero():
    with pytest.raises(DuplicatePoints):
        knn_graph(PointCloud(np.array([[0.0], [0.0], [0.0], [3.0]])), 1)
    with pytest.raises(ValueError):
        knn_graph(PointCloud(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])), 1, "angular")


def test_angular_kernel_values():
    x = np.array([[1.0, 0.0], [1.0, 1.0], [-1.0, 0.05]])
    g = knn_graph(PointCloud(x), 2, "angular")
    assert math.isclose(g.weight(0, 1), math.exp(-2 * math.pi / 4))


def test_point_cloud_validation():
    with pytest.raises(ValueError):
        PointCloud(np.array([[np.nan, 1.0]]))
    with pytest.raises(ValueError):
        PointCloud(np.zeros((3, 2)), labels=[0, 1])
