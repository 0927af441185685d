"""Baseline sparsifiers matched to a target edge budget.

Both operate on proximity graphs. Thresholding keeps the most similar edges
with their weights intact; spectral sparsification samples edges with
probability proportional to weight times effective resistance and
reweights them, so surviving weights generally change.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import BudgetUnreachable, Disconnected
from .graph import Mode, Partition, WeightedGraph, component_count
from .report import SparsifyReport, block_retention

DENSE_LIMIT = 3000


def _report(method, g, m_target, kept_mask, labels, **extra) -> SparsifyReport:
    retention = block_retention(g, labels, kept_mask) if labels is not None else None
    return SparsifyReport(method, g.m, int(m_target), int(kept_mask.sum()), retention, extra)


def threshold_sparsify(
    g: WeightedGraph, m_target: int, labels: Partition | None = None
) -> tuple[WeightedGraph, SparsifyReport]:
    """Keep the ``m_target`` highest-proximity edges; ties go to the lexicographically smaller edge."""
    g.require_mode(Mode.PROXIMITY)
    if not 0 <= m_target <= g.m:
        raise ValueError(f"m_target must lie in [0, {g.m}]")
    order = np.lexsort((g.v, g.u, -g.w))
    kept = np.zeros(g.m, dtype=bool)
    kept[order[:m_target]] = True
    theta = float(g.w[order[m_target - 1]]) if m_target else math.inf
    return g.edge_subgraph(kept), _report("threshold", g, m_target, kept, labels, theta=theta)


def laplacian(g: WeightedGraph) -> sp.csr_matrix:
    a = g.adjacency
    return (sp.diags(np.asarray(a.sum(axis=1)).ravel()) - a).tocsr()


def effective_resistances(g: WeightedGraph, dense_limit: int = DENSE_LIMIT, batch: int = 256) -> np.ndarray:
    """Effective resistance across every edge, with weights as conductances.

    Dense pseudoinverse up to ``dense_limit`` vertices, sparse LU solves on
    the grounded Laplacian beyond that.
    """
    if g.n > 1 and component_count(g) > 1:
        raise Disconnected("effective resistances need a connected graph")
    if g.m == 0:
        return np.zeros(0)
    n = g.n
    if n <= dense_limit:
        lap = laplacian(g).toarray()
        # for connected graphs L^+ = (L + J/n)^-1 - J/n
        lp = np.linalg.inv(lap + 1.0 / n) - 1.0 / n
        r = lp[g.u, g.u] + lp[g.v, g.v] - 2.0 * lp[g.u, g.v]
    else:
        # ground the last vertex; its potential is fixed at 0
        lu = splu(laplacian(g)[:-1, :-1].tocsc())
        r = np.empty(g.m)
        for e0 in range(0, g.m, batch):
            e1 = min(g.m, e0 + batch)
            rhs = np.zeros((n, e1 - e0))
            cols = np.arange(e1 - e0)
            rhs[g.u[e0:e1], cols] += 1.0
            rhs[g.v[e0:e1], cols] -= 1.0
            x = lu.solve(rhs[:-1])
            x = np.vstack([x, np.zeros((1, e1 - e0))])
            r[e0:e1] = x[g.u[e0:e1], cols] - x[g.v[e0:e1], cols]
    return np.maximum(r, 0.0)


def spectral_sparsify(
    g: WeightedGraph,
    m_target: int,
    seed=None,
    labels: Partition | None = None,
    resistances: np.ndarray | None = None,
    max_draws: int | None = None,
) -> tuple[WeightedGraph, SparsifyReport]:
    """Importance-sample edges until exactly ``m_target`` distinct edges are drawn.

    Draws are with replacement, edge ``e`` with probability
    ``p_e ~ w_e R_e``. After ``Q`` draws, a sampled edge gets weight
    ``count_e * w_e / (Q p_e)``. ``Q`` is the shortest prefix of one
    seeded draw stream containing ``m_target`` distinct edges.
    """
    g.require_mode(Mode.PROXIMITY)
    if m_target > g.m:
        raise BudgetUnreachable(f"m_target={m_target} exceeds the {g.m} available edges")
    if m_target < 0:
        raise ValueError("m_target must be non-negative")
    r = effective_resistances(g) if resistances is None else np.asarray(resistances, dtype=np.float64)
    lev = g.w * r
    prob = lev / lev.sum()
    cdf = np.cumsum(prob)
    cdf[-1] = 1.0
    positive = int(np.count_nonzero(prob > 0))
    if m_target > positive:
        raise BudgetUnreachable(f"only {positive} edges have positive sampling probability")
    rng = np.random.default_rng(seed)
    if max_draws is None:
        # generous coupon-collector allowance for the rarest required edge
        max_draws = int(50 * g.m * (math.log(g.m + 1) + 1) / max(positive / g.m, 1e-12)) + 1000

    counts = np.zeros(g.m, dtype=np.int64)
    distinct = 0
    drawn = 0
    chunk = max(1024, 2 * m_target)
    while distinct < m_target:
        if drawn >= max_draws:
            raise BudgetUnreachable(f"{distinct} distinct edges after {drawn} draws")
        draws = np.searchsorted(cdf, rng.random(chunk), side="right")
        draws = np.minimum(draws, g.m - 1)
        uniq, first = np.unique(draws, return_index=True)
        fresh = counts[uniq] == 0
        first_new = np.sort(first[fresh])
        need = m_target - distinct
        if first_new.size >= need:
            stop = int(first_new[need - 1]) + 1
            draws = draws[:stop]
        np.add.at(counts, draws, 1)
        distinct = int(np.count_nonzero(counts))
        drawn += draws.size
    kept = counts > 0
    q = max(drawn, 1)
    new_w = counts[kept] * g.w[kept] / (q * prob[kept])
    out = g.edge_subgraph(kept, weights=new_w)
    return out, _report("spectral", g, m_target, kept, labels, num_draws=drawn)
