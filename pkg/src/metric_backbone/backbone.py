"""Shortest paths and metric-backbone extraction.

An edge is *metric* when its own cost equals the shortest-path distance
between its endpoints; the metric backbone keeps exactly the metric edges.
Exact extraction runs one Dijkstra per source vertex. Two exact shortcuts
keep that affordable on dense random graphs:

* no shortest path is longer than the weighted diameter, which is at most
  twice the eccentricity of any vertex in the same component, so edges
  costlier than that bound are semi-metric and are removed up front (the
  removal leaves every distance unchanged);
* a source only needs distances up to the largest cost among its candidate
  edges, so each Dijkstra batch runs with that search limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import dijkstra as _dijkstra

from .errors import Disconnected
from .graph import Mode, WeightedGraph, component_count, connected_components

REL_TOL = 1e-9
_CHUNK_CELLS = 1 << 23  # distance-matrix cells per Dijkstra batch


@dataclass(frozen=True)
class ShortestPathTree:
    root: int
    dist: np.ndarray
    parent: np.ndarray  # parent vertex, -1 for the root and unreachable vertices

    def parent_edge(self, x: int) -> tuple[int, int] | None:
        p = int(self.parent[x])
        if p < 0:
            return None
        return (min(p, x), max(p, x))

    def edge_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        child = np.flatnonzero(self.parent >= 0)
        par = self.parent[child]
        return np.minimum(par, child), np.maximum(par, child)


@dataclass(frozen=True)
class BackboneResult:
    backbone: WeightedGraph
    kept: np.ndarray  # bool per edge of the input graph
    roots_used: np.ndarray

    @property
    def retention_ratio(self) -> float:
        return float(self.kept.mean()) if self.kept.size else 1.0


def dijkstra(g: WeightedGraph, root: int) -> ShortestPathTree:
    """Single-source shortest-path tree of a cost graph (``inf`` when unreachable)."""
    g.require_mode(Mode.COST)
    if not 0 <= root < g.n:
        raise ValueError(f"root {root} out of range")
    dist, pred = _dijkstra(g.adjacency, directed=False, indices=root, return_predecessors=True)
    pred = np.where(pred < 0, -1, pred).astype(np.int64)
    return ShortestPathTree(int(root), dist, pred)


_LANDMARKS = 8


def _path_bound(g: WeightedGraph) -> np.ndarray:
    """Per-edge upper bound on ``dist(u, v)``: ``min_r d(r, u) + d(r, v)`` over a few landmark roots.

    One landmark per non-trivial component plus up to ``_LANDMARKS`` evenly
    spaced vertices; ``inf`` where no landmark shares the edge's component.
    """
    roots = [int(c[0]) for c in connected_components(g) if c.size > 1]
    roots = np.unique(np.concatenate([roots, np.linspace(0, g.n - 1, min(_LANDMARKS, g.n)).astype(np.int64)]))
    d = _dijkstra(g.adjacency, directed=False, indices=roots)
    bound = np.full(g.m, np.inf)
    for row in d:
        np.minimum(bound, row[g.u] + row[g.v], out=bound)
    return bound


def metric_backbone(g: WeightedGraph, rel_tol: float = REL_TOL) -> BackboneResult:
    """Exact metric backbone of a cost graph.

    Edge ``(u, v)`` is kept iff ``dist(u, v) >= c(u, v) * (1 - rel_tol)``, so
    edges tied with an alternative shortest path are kept.
    """
    g.require_mode(Mode.COST)
    kept = np.zeros(g.m, dtype=bool)
    if g.m == 0:
        return BackboneResult(g, kept, np.arange(g.n))

    lowered = g.w * (1.0 - rel_tol)
    # an edge dearer than some known path cannot be metric
    cand = np.flatnonzero(lowered <= _path_bound(g))
    if cand.size == 0:
        return BackboneResult(g.edge_subgraph(kept), kept, np.arange(g.n))
    reduced = g.edge_subgraph(cand).adjacency

    # candidates grouped by smaller endpoint (edges are sorted by u); sources
    # with similar search radii share a batch
    cu, cv, cw = g.u[cand], g.v[cand], lowered[cand]
    sources, starts = np.unique(cu, return_index=True)
    ends = np.append(starts[1:], cu.size)
    radius = np.maximum.reduceat(g.w[cand], starts)
    order = np.argsort(radius, kind="stable")
    batch = max(1, _CHUNK_CELLS // max(g.n, 1))
    for s0 in range(0, sources.size, batch):
        sel = order[s0:s0 + batch]
        src = sources[sel]
        counts = ends[sel] - starts[sel]
        idx = np.repeat(starts[sel] - np.cumsum(counts) + counts, counts) + np.arange(counts.sum())
        dist = _dijkstra(reduced, directed=False, indices=src, limit=float(radius[sel].max()))
        row = np.repeat(np.arange(src.size), counts)
        kept[cand[idx]] = dist[row, cv[idx]] >= cw[idx]
    return BackboneResult(g.edge_subgraph(kept), kept, np.arange(g.n))


def default_num_roots(n: int) -> int:
    return max(1, min(n, math.ceil(2 * math.log(n)))) if n > 1 else 1


def approximate_backbone(
    g: WeightedGraph, num_roots: int | None = None, seed=None, roots=None
) -> BackboneResult:
    """Union of shortest-path trees rooted at randomly sampled vertices.

    Roots are drawn uniformly without replacement (``num_roots`` defaults to
    ``ceil(2 ln n)``); pass ``roots`` to fix them explicitly. Every tree edge
    lies on a shortest path, so the result is a subgraph of the exact
    backbone.
    """
    g.require_mode(Mode.COST)
    if roots is None:
        if num_roots is None:
            num_roots = default_num_roots(g.n)
        if not 1 <= num_roots <= g.n:
            raise ValueError(f"num_roots must lie in [1, {g.n}]")
        rng = np.random.default_rng(seed)
        roots = np.sort(rng.choice(g.n, size=num_roots, replace=False))
    roots = np.asarray(roots, dtype=np.int64)
    kept = np.zeros(g.m, dtype=bool)
    batch = max(1, _CHUNK_CELLS // max(g.n, 1))
    for s0 in range(0, roots.size, batch):
        src = roots[s0:s0 + batch]
        _, pred = _dijkstra(g.adjacency, directed=False, indices=src, return_predecessors=True)
        rows, child = np.nonzero(pred >= 0)
        par = pred[rows, child]
        ids = g.edge_ids(np.minimum(par, child), np.maximum(par, child))
        kept[ids] = True
    return BackboneResult(g.edge_subgraph(kept), kept, roots)


def all_pairs_distances(g: WeightedGraph) -> np.ndarray:
    g.require_mode(Mode.COST)
    return _dijkstra(g.adjacency, directed=False)


def pair_distances(g: WeightedGraph, a, b) -> np.ndarray:
    """Shortest-path costs for the vertex pairs ``(a[i], b[i])``."""
    g.require_mode(Mode.COST)
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.empty(a.size)
    src, inv = np.unique(a, return_inverse=True)
    batch = max(1, _CHUNK_CELLS // max(g.n, 1))
    for s0 in range(0, src.size, batch):
        d = _dijkstra(g.adjacency, directed=False, indices=src[s0:s0 + batch])
        sel = (inv >= s0) & (inv < s0 + batch)
        out[sel] = d[inv[sel] - s0, b[sel]]
    return out


def max_shortest_path_cost(g: WeightedGraph) -> float:
    """Weighted diameter: the largest shortest-path cost over all vertex pairs."""
    g.require_mode(Mode.COST)
    if g.n > 1 and component_count(g) > 1:
        raise Disconnected("weighted diameter is undefined on a disconnected graph")
    if g.n <= 1:
        return 0.0
    # the backbone preserves every distance and is usually far sparser
    adj = metric_backbone(g).backbone.adjacency
    best = 0.0
    batch = max(1, _CHUNK_CELLS // g.n)
    for s0 in range(0, g.n, batch):
        d = _dijkstra(adj, directed=False, indices=np.arange(s0, min(g.n, s0 + batch)))
        best = max(best, float(d.max()))
    return best
