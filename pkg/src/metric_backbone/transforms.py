"""Proximity/cost conversions and proximity graphs built from point clouds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DuplicatePoints, NonPositiveProximity, WrongMode
from .graph import Mode, WeightedGraph

PROXIMITY_CLAMP = 1e-9


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise ValueError("points must be an n x d array with d >= 1")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=np.int64).ravel()
            if lab.size != pts.shape[0]:
                raise ValueError("one label per point required")
            object.__setattr__(self, "labels", lab)

    @property
    def n(self) -> int:
        return int(self.points.shape[0])


def weighted_jaccard(g: WeightedGraph, unweighted: bool = False, chunk: int = 1 << 22) -> WeightedGraph:
    """Weighted Jaccard proximity of each edge's endpoint neighbourhoods.

    Neighbourhoods are closed: every vertex belongs to its own, with a
    self-similarity equal to its largest incident weight. With all weights
    equal this is the plain Jaccard index of the closed neighbourhoods.
    Cost graphs are accepted only with ``unweighted=True``.
    """
    if g.mode is Mode.COST and not unweighted:
        raise WrongMode("weighted Jaccard needs similarity weights; pass unweighted=True to ignore costs")
    if g.m == 0:
        raise ValueError("graph has no edges")
    w = np.ones(g.m) if unweighted else g.w
    a = g.with_weights(w).adjacency
    selfsim = a.max(axis=1).toarray().ravel()
    s = (a + sp.diags(selfsim)).tocsr()
    s.sort_indices()
    rowsum = np.asarray(s.sum(axis=1)).ravel()
    n = g.n
    keys = np.repeat(np.arange(n, dtype=np.int64), np.diff(s.indptr)) * n + s.indices

    # sum_w min(s(x, w), s(y, w)) by walking the smaller closed neighbourhood
    deg = np.diff(s.indptr)
    x = np.where(deg[g.u] <= deg[g.v], g.u, g.v)
    y = np.where(deg[g.u] <= deg[g.v], g.v, g.u)
    common = np.zeros(g.m)
    lengths = deg[x]
    starts = np.concatenate([[0], np.cumsum(lengths)])
    e0 = 0
    while e0 < g.m:
        e1 = int(np.searchsorted(starts, starts[e0] + chunk, side="right")) - 1
        e1 = max(e1, e0 + 1)
        e1 = min(e1, g.m)
        ln = lengths[e0:e1]
        eid = np.repeat(np.arange(e0, e1), ln)
        offs = np.arange(ln.sum()) - np.repeat(starts[e0:e1] - starts[e0], ln)
        ptr = s.indptr[x[eid]] + offs
        nb, sx = s.indices[ptr], s.data[ptr]
        look = y[eid] * n + nb
        pos = np.searchsorted(keys, look)
        pos = np.minimum(pos, keys.size - 1)
        hit = keys[pos] == look
        sy = np.where(hit, s.data[pos], 0.0)
        common[e0:e1] = np.bincount(eid - e0, weights=np.minimum(sx, sy), minlength=e1 - e0)
        e0 = e1
    union = rowsum[g.u] + rowsum[g.v] - common
    prox = np.minimum(common / union, 1.0)
    keep = prox > 0
    out = WeightedGraph(n, g.u[keep], g.v[keep], prox[keep], Mode.PROXIMITY, _trusted=True)
    return out


def proximity_to_distance(g: WeightedGraph, clamp: float = PROXIMITY_CLAMP) -> WeightedGraph:
    """Cost ``1/p - 1`` per edge, with ``p`` clamped to ``<= 1 - clamp`` so costs stay positive."""
    g.require_mode(Mode.PROXIMITY)
    p = g.w
    if np.any(p <= 0):
        raise NonPositiveProximity("proximities must be positive")
    if np.any(p > 1.0 + 1e-12):
        raise ValueError("proximities must not exceed 1")
    p = np.minimum(p, 1.0 - clamp)
    return g.with_weights(1.0 / p - 1.0, Mode.COST)


def distance_to_proximity(g: WeightedGraph) -> WeightedGraph:
    """Inverse of :func:`proximity_to_distance`: ``p = 1 / (1 + c)``."""
    g.require_mode(Mode.COST)
    return g.with_weights(1.0 / (1.0 + g.w), Mode.PROXIMITY)


def _select_neighbors(score: np.ndarray, q: int) -> np.ndarray:
    """Boolean mask of the ``q`` smallest scores per row, ties to the smaller column."""
    kth = np.partition(score, q - 1, axis=1)[:, q - 1:q]
    less = score < kth
    eq = score == kth
    need = q - less.sum(axis=1, keepdims=True)
    return less | (eq & (np.cumsum(eq, axis=1) <= need))


def knn_graph(cloud, q: int, kernel: str = "gaussian", chunk_rows: int | None = None) -> WeightedGraph:
    """Union q-nearest-neighbour proximity graph.

    ``(u, v)`` is an edge when either point nominates the other among its q
    most similar points; its proximity is ``(s_uv + s_vu) / 2`` where
    ``s_uv`` is the kernel value if ``u`` nominated ``v`` and 0 otherwise.

    Kernels: ``"gaussian"`` uses ``exp(-|x_u - x_v|^2 / d_q(u)^2)`` with
    ``d_q(u)`` the distance from ``u`` to its q-th neighbour; ``"angular"``
    ranks by ``|<x_u, x_v>|`` on unit-normalized points and uses
    ``exp(-2 arccos |<x_u, x_v>|)``.
    """
    x = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=np.float64)
    n = x.shape[0]
    if not 1 <= q < n:
        raise ValueError(f"q must lie in [1, {n - 1}]")
    if kernel not in ("gaussian", "angular"):
        raise ValueError(f"unknown kernel {kernel!r}")
    if kernel == "angular":
        norms = np.linalg.norm(x, axis=1)
        if np.any(norms == 0):
            raise ValueError("angular kernel needs non-zero points")
        x = x / norms[:, None]
    sq = np.einsum("ij,ij->i", x, x)
    chunk_rows = chunk_rows or max(1, (1 << 24) // n)
    rows, cols, vals = [], [], []
    for r0 in range(0, n, chunk_rows):
        r1 = min(n, r0 + chunk_rows)
        dot = x[r0:r1] @ x.T
        if kernel == "gaussian":
            score = np.maximum(sq[r0:r1, None] + sq[None, :] - 2.0 * dot, 0.0)
        else:
            score = -np.minimum(np.abs(dot), 1.0)
        score[np.arange(r1 - r0), np.arange(r0, r1)] = np.inf
        mask = _select_neighbors(score, q)
        ri, cj = np.nonzero(mask)
        if kernel == "gaussian":
            d2 = score[ri, cj]
            bw = score[mask].reshape(r1 - r0, q).max(axis=1)
            if np.any(bw == 0):
                bad = int(np.flatnonzero(bw == 0)[0]) + r0
                raise DuplicatePoints(f"point {bad} has {q} or more exact duplicates")
            sim = np.exp(-d2 / bw[ri])
        else:
            sim = np.exp(-2.0 * np.arccos(-score[ri, cj]))
        rows.append(ri + r0)
        cols.append(cj)
        vals.append(sim)
    s = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    p = sp.triu((s + s.T) * 0.5, k=1).tocoo()
    return WeightedGraph(n, p.row, p.col, p.data, Mode.PROXIMITY)
