import math

import numpy as np
import pytest
from scipy import stats

from metric_backbone import (
    CostDistribution,
    WsbmParams,
    backbone_probability_quadrature,
    empirical_retention,
    metric_backbone,
    operator_summary,
    planted_partition,
    predicted_backbone_density,
    predicted_retention,
    sample_wsbm,
)
from metric_backbone.errors import DomainError, ProbabilityOverflow
from metric_backbone.wsbm import _geometric_positions, _unrank_pairs, default_rho, params_from_dict


def test_complete_graph_when_p_is_one():
    p = WsbmParams(30, np.array([1.0]), np.array([[1.0]]), 1.0, CostDistribution.exponential(1.0))
    z, g = sample_wsbm(p, 5)
    assert g.m == 30 * 29 // 2 and (g.w > 0).all()


def test_degenerate_pi_rejected():
    with pytest.raises(ValueError):
        WsbmParams(10, np.array([1.0, 0.0]), np.ones((2, 2)), 0.1, CostDistribution.exponential())


def test_probability_overflow():
    with pytest.raises(ProbabilityOverflow):
        WsbmParams(10, np.array([1.0]), np.array([[3.0]]), 0.5, CostDistribution.exponential())


def test_asymmetric_B_rejected():
    with pytest.raises(ValueError):
        WsbmParams(10, np.array([0.5, 0.5]), np.array([[1.0, 2.0], [1.0, 1.0]]), 0.1, CostDistribution.exponential())


def test_operator_example_one():
    s = operator_summary(planted_partition(4000, 2, 6, 2))
    assert np.allclose(s.tau, [4.0, 4.0]) and s.tau_min == s.tau_max == 4.0
    assert np.allclose(s.T, [[3.0, 1.0], [1.0, 3.0]])
    assert math.isclose(s.mu, 2.0)


def test_operator_scalar_and_rank_deficient():
    p = WsbmParams(10, np.array([1.0]), np.array([[3.0]]), 0.1, CostDistribution.exponential(2.0))
    s = operator_summary(p)
    assert np.allclose(s.T, [[6.0]]) and s.tau_min == 6.0 and math.isclose(s.mu, 6.0)
    assert operator_summary(planted_partition(100, 2, 3, 3)).mu == pytest.approx(0.0, abs=1e-12)


def test_operator_hand_expanded_k3():
    pi = np.array([0.2, 0.3, 0.5])
    B = np.array([[4.0, 1.0, 2.0], [1.0, 5.0, 0.5], [2.0, 0.5, 3.0]])
    lam = [[1.0, 2.0, 0.5], [2.0, 1.5, 1.0], [0.5, 1.0, 3.0]]
    costs = [[CostDistribution.exponential(x) for x in row] for row in lam]
    s = operator_summary(WsbmParams(100, pi, B, 0.01, costs))
    for a in range(3):
        assert math.isclose(s.tau[a], sum(lam[a][b] * B[a, b] * pi[b] for b in range(3)))
    T = np.array([[lam[a][b] * B[a, b] * pi[b] for b in range(3)] for a in range(3)])
    assert np.allclose(s.T, T)
    assert math.isclose(s.mu, np.abs(np.linalg.eigvals(T)).min())


def test_predicted_retention_example_one():
    n, k, p0, q0 = 4000, 2, 6.0, 2.0
    p = planted_partition(n, k, p0, q0)
    band = predicted_retention(p)
    assert band.is_point
    dens = predicted_backbone_density(p).mid
    scale = math.log(n) / n
    assert math.isclose(dens[0, 0], k * p0 / (p0 + (k - 1) * q0) * scale)
    assert math.isclose(dens[0, 1], k * q0 / (p0 + (k - 1) * q0) * scale)
    assert math.isclose(dens[0, 0] / dens[0, 1], p0 / q0)


def test_predicted_retention_example_two():
    # equal expected degree dbar: rows of B diag(pi) sum to the same value
    pi = np.array([0.25, 0.75])
    B = np.array([[6.0, 2.0], [2.0, 10.0 / 3.0]])
    n = 3000
    rho = default_rho(n)
    p = WsbmParams(n, pi, B, rho, CostDistribution.exponential())
    dbar = n * rho * (B @ pi)[0]
    assert np.allclose(n * rho * (B @ pi), dbar)
    dens = predicted_backbone_density(p).mid
    expected = B * (n * rho / dbar) * math.log(n) / n
    assert np.allclose(dens, expected)


def test_unranking_brute_force():
    pairs = [(i, j) for j in range(1, 80) for i in range(j)]
    i, j = _unrank_pairs(np.arange(len(pairs)))
    assert list(zip(i.tolist(), j.tolist())) == pairs
    t = np.array([2**52 - 1, 10**15 + 7, 123456789012345])
    i, j = _unrank_pairs(t)
    assert np.all((0 <= i) & (i < j)) and np.array_equal(j * (j - 1) // 2 + i, t)


def test_geometric_positions_rate():
    rng = np.random.default_rng(0)
    idx = _geometric_positions(rng, 10**6, 0.01)
    assert np.all(np.diff(idx) > 0) and idx.max() < 10**6
    assert abs(idx.size - 10**4) < 5 * math.sqrt(10**4)
    assert _geometric_positions(rng, 10, 1.0).tolist() == list(range(10))


@pytest.mark.parametrize("law", ["exp:1", "exp:2.5", "unif:1", "unif:0.5"])
def test_cost_sampler_ks(law):
    d = CostDistribution.parse(law)
    x = d.sample(np.random.default_rng(1), 100_000)
    assert (x > 0).all()
    assert stats.kstest(x, d.cdf).statistic < 0.02


def test_custom_cost_law():
    # Pareto-like tail starting at 0: F(x) = 1 - (1 + x)^-2, lambda = F'(0) = 2
    d = CostDistribution.custom(lambda u: (1 - u) ** -0.5 - 1, lam=2.0, cdf=lambda x: 1 - (1 + x) ** -2.0)
    x = d.sample(np.random.default_rng(2), 100_000)
    assert stats.kstest(x, d.cdf).statistic < 0.02


def test_edge_presence_chi_square():
    n = 2000
    p = planted_partition(n, 2, 6, 2)
    z, g = sample_wsbm(p, 11)
    lab = z.labels
    iu, iv = np.triu_indices(n, 1)
    bp = lab[iu] + lab[iv]  # 0: (0,0), 1: cross, 2: (1,1)
    bucket = bp * 20 + (iu + iv) % 20
    pairs = np.bincount(bucket, minlength=60)
    prob = np.array([p.p[0, 0], p.p[0, 1], p.p[1, 1]]).repeat(20)
    eb = lab[g.u] + lab[g.v]
    obs = np.bincount(eb * 20 + (g.u + g.v) % 20, minlength=60)
    exp = pairs * prob
    chi = np.sum((obs - exp) ** 2 / (exp * (1 - prob)))
    assert stats.chi2.sf(chi, df=60) > 0.001


def test_within_block_fraction():
    n = 2000
    p = planted_partition(n, 2, 6, 2)
    z, g = sample_wsbm(p, 3)
    ret = empirical_retention(g, z, np.ones(g.m, dtype=bool))
    pairs = ret.pairs[0, 0] + ret.pairs[1, 1]
    frac = (ret.original[0, 0] + ret.original[1, 1]) / pairs
    p0 = p.p[0, 0]
    assert abs(frac - p0) <= 3 * math.sqrt(p0 * (1 - p0) / pairs)


def test_sampling_deterministic():
    p = planted_partition(500, 3, 6, 2)
    z1, g1 = sample_wsbm(p, 42)
    z2, g2 = sample_wsbm(p, 42)
    assert np.array_equal(z1.labels, z2.labels) and np.array_equal(g1.w, g2.w) and np.array_equal(g1.u, g2.u)
    _, g3 = sample_wsbm(p, 43)
    assert not (g3.m == g1.m and np.array_equal(g3.u, g1.u))


def test_quadrature_examples():
    d = CostDistribution.uniform(1.0)
    # uniform law on (0, 1]: F(0) = 0
    assert backbone_probability_quadrature([0.0, 0.0], 0.3, d) == 0.0
    est = backbone_probability_quadrature([0.01], 0.01, CostDistribution.exponential())
    target = 0.01 * (1 - math.exp(-0.01))
    assert math.isclose(est, target, rel_tol=1e-3)
    with pytest.raises(DomainError):
        backbone_probability_quadrature([1.0], 1.0, d)


def test_quadrature_matches_count_n2000():
    p = planted_partition(2000, 2, 6, 2)
    z, g = sample_wsbm(p, 0)
    res = metric_backbone(g)
    counted = empirical_retention(g, z, res).kept_density[0, 0]
    from metric_backbone.backbone import pair_distances
    from metric_backbone.wsbm import sample_block_pairs

    us, vs = sample_block_pairs(z, 0, 0, 500, np.random.default_rng(1))
    est = backbone_probability_quadrature(pair_distances(g, us, vs), p.p[0, 0], p.costs[0][0])
    assert abs(est / counted - 1) < 0.15


def test_empirical_retention_examples():
    p = planted_partition(300, 2, 6, 2)
    z, g = sample_wsbm(p, 0)
    full = empirical_retention(g, z, g)
    assert np.allclose(full.ratio, 1.0)
    kept = np.ones(g.m, dtype=bool)
    lab = z.labels
    kept[lab[g.u] != lab[g.v]] = False
    r = empirical_retention(g, z, kept)
    assert r.ratio[0, 1] == 0.0 and r.ratio[0, 0] == 1.0


def test_params_from_dict():
    p = params_from_dict({"n": 1000, "planted": {"k": 3, "p0": 5, "q0": 1}, "rho_exponent": 1.5, "costs": "unif:2"})
    assert p.k == 3 and math.isclose(p.rho, math.log(1000) ** 1.5 / 1000)
    assert p.costs[1][2].kind == "unif" and p.lam[0, 0] == 2.0
    q = params_from_dict({"n": 100, "pi": [0.5, 0.5], "B": [[2, 1], [1, 2]], "rho": 0.1,
                          "costs": [["exp:1", "exp:2"], ["exp:2", "exp:1"]]})
    assert q.lam[0, 1] == 2.0
