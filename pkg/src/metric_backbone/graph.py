"""Immutable undirected weighted graphs and community partitions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc

from .errors import (
    ConflictingDuplicateEdge,
    EmptyResult,
    NonPositiveWeight,
    SelfLoop,
    WrongMode,
)


class Mode(str, enum.Enum):
    COST = "cost"
    PROXIMITY = "proximity"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


class WeightedGraph:
    """Undirected graph on vertices ``0..n-1`` with strictly positive weights.

    Each edge is stored once as ``(u, v)`` with ``u < v``; the edge arrays are
    sorted lexicographically and never mutated after construction. The
    ``mode`` tag says whether weights are costs (additive along paths) or
    proximities (similarities).
    """

    def __init__(self, n: int, u, v, w, mode: Mode | str = Mode.COST, *, _trusted: bool = False):
        mode = Mode(mode)
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        w = np.asarray(w, dtype=np.float64).ravel()
        if not _trusted:
            u, v, w = _canonicalize(int(n), u, v, w)
        self.n = int(n)
        self.u = _frozen(u)
        self.v = _frozen(v)
        self.w = _frozen(w)
        self.mode = mode

    # construction helpers -------------------------------------------------

    @classmethod
    def empty(cls, n: int, mode: Mode | str = Mode.COST) -> "WeightedGraph":
        z = np.zeros(0, dtype=np.int64)
        return cls(n, z, z, np.zeros(0), mode, _trusted=True)

    def with_weights(self, w, mode: Mode | str | None = None) -> "WeightedGraph":
        """Same topology, new per-edge weights (aligned with ``self.u``/``self.v``)."""
        w = np.asarray(w, dtype=np.float64)
        if w.shape != self.w.shape:
            raise ValueError("weight vector does not match edge count")
        if np.any(~(w > 0)):
            raise NonPositiveWeight("weights must be strictly positive")
        return WeightedGraph(self.n, self.u, self.v, w, mode or self.mode, _trusted=True)

    def edge_subgraph(self, keep, weights=None) -> "WeightedGraph":
        """Spanning subgraph on the edges selected by a boolean mask or index array.

        ``weights``, when given, are aligned with the selected edges in the
        order they were selected.
        """
        keep = np.asarray(keep)
        if keep.dtype == bool:
            idx = np.flatnonzero(keep)
            order = np.arange(idx.size)
        else:
            order = np.argsort(keep, kind="stable")
            idx = keep.astype(np.int64)[order]
        w = self.w[idx] if weights is None else np.asarray(weights, dtype=np.float64)[order]
        if np.any(~(w > 0)):
            raise NonPositiveWeight("weights must be strictly positive")
        return WeightedGraph(self.n, self.u[idx], self.v[idx], w, self.mode, _trusted=True)

    def induced_subgraph(self, vertices) -> tuple["WeightedGraph", np.ndarray]:
        """Subgraph induced by ``vertices``; returns it with the new-to-old id map."""
        keep = np.unique(np.asarray(vertices, dtype=np.int64))
        new_id = np.full(self.n, -1, dtype=np.int64)
        new_id[keep] = np.arange(keep.size)
        emask = (new_id[self.u] >= 0) & (new_id[self.v] >= 0)
        g = WeightedGraph(
            keep.size, new_id[self.u[emask]], new_id[self.v[emask]], self.w[emask], self.mode, _trusted=True
        )
        return g, keep

    # queries ---------------------------------------------------------------

    @property
    def m(self) -> int:
        return int(self.u.size)

    def __len__(self) -> int:
        return self.m

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m}, mode={self.mode.value})"

    def require_mode(self, mode: Mode) -> None:
        if self.mode is not mode:
            raise WrongMode(f"expected a {mode.value}-valued graph, got {self.mode.value}")

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Symmetric sparse weighted adjacency matrix."""
        rows = np.concatenate([self.u, self.v])
        cols = np.concatenate([self.v, self.u])
        data = np.concatenate([self.w, self.w])
        a = sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
        a.sort_indices()
        return a

    @cached_property
    def _edge_index(self) -> sp.csr_matrix:
        rows = np.concatenate([self.u, self.v])
        cols = np.concatenate([self.v, self.u])
        ids = np.tile(np.arange(1, self.m + 1, dtype=np.int64), 2)
        return sp.csr_matrix((ids, (rows, cols)), shape=(self.n, self.n))

    def edge_ids(self, a, b) -> np.ndarray:
        """Index into the edge arrays for each pair ``(a[i], b[i])``; -1 when absent."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.size == 0:
            return np.zeros(0, dtype=np.int64)
        return np.asarray(self._edge_index[a, b]).ravel().astype(np.int64) - 1

    def weight(self, a: int, b: int) -> float | None:
        idx = int(self.edge_ids([a], [b])[0])
        return None if idx < 0 else float(self.w[idx])

    def neighbors(self, x: int) -> np.ndarray:
        a = self.adjacency
        return a.indices[a.indptr[x]:a.indptr[x + 1]]

    def degrees(self) -> np.ndarray:
        return np.bincount(np.concatenate([self.u, self.v]), minlength=self.n)

    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.u.tolist(), self.v.tolist(), self.w.tolist()))

    def edge_set(self) -> set[tuple[int, int]]:
        return set(zip(self.u.tolist(), self.v.tolist()))

    def to_dense(self) -> np.ndarray:
        return self.adjacency.toarray()


def _canonicalize(n, u, v, w):
    if not (u.size == v.size == w.size):
        raise ValueError("edge arrays must have equal length")
    if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
        raise ValueError(f"vertex id out of range [0, {n})")
    if np.any(u == v):
        i = int(np.flatnonzero(u == v)[0])
        raise SelfLoop(f"self-loop at vertex {int(u[i])}")
    bad = ~(w > 0) | ~np.isfinite(w)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise NonPositiveWeight(f"edge ({int(u[i])}, {int(v[i])}) has weight {float(w[i])!r}")
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    order = np.lexsort((w, hi, lo))
    lo, hi, w = lo[order], hi[order], w[order]
    if lo.size > 1:
        same = (lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])
        if np.any(same):
            clash = same & (w[1:] != w[:-1])
            if np.any(clash):
                i = int(np.flatnonzero(clash)[0])
                raise ConflictingDuplicateEdge(
                    f"edge ({int(lo[i])}, {int(hi[i])}) listed with weights {float(w[i])!r} and {float(w[i + 1])!r}"
                )
            keep = np.concatenate([[True], ~same])
            lo, hi, w = lo[keep], hi[keep], w[keep]
    return lo, hi, w


def from_edge_list(
    rows: Iterable[Sequence], mode: Mode | str = Mode.COST, n: int | None = None
) -> WeightedGraph:
    """Build a graph from ``(u, v, w)`` rows with dense integer ids.

    ``n`` defaults to ``max id + 1``. Repeated rows with the same weight are
    merged; repeated rows with different weights raise
    :class:`ConflictingDuplicateEdge`.
    """
    rows = list(rows)
    if rows:
        arr = np.asarray(rows, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 3:
            raise ValueError("rows must be (u, v, w) triples")
        u = arr[:, 0].astype(np.int64)
        v = arr[:, 1].astype(np.int64)
        w = arr[:, 2]
    else:
        u = v = np.zeros(0, dtype=np.int64)
        w = np.zeros(0)
    if n is None:
        n = int(max(u.max(), v.max()) + 1) if u.size else 0
    return WeightedGraph(n, u, v, w, mode)


@dataclass(frozen=True)
class Partition:
    """Community labels ``labels[u] in [0, k)`` for every vertex."""

    labels: np.ndarray
    k: int = field(default=-1)

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64).ravel()
        k = int(labels.max()) + 1 if (self.k < 0 and labels.size) else self.k
        if k < 1:
            raise ValueError("a partition needs k >= 1")
        if labels.size and (labels.min() < 0 or labels.max() >= k):
            raise ValueError(f"labels must lie in [0, {k})")
        object.__setattr__(self, "labels", _frozen(labels))
        object.__setattr__(self, "k", int(k))

    @property
    def n(self) -> int:
        return int(self.labels.size)

    def block_sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def restrict(self, vertices) -> "Partition":
        return Partition(self.labels[np.asarray(vertices, dtype=np.int64)], self.k)


def as_labels(z) -> np.ndarray:
    if isinstance(z, Partition):
        return z.labels
    return np.asarray(z, dtype=np.int64).ravel()


def connected_components(g: WeightedGraph) -> list[np.ndarray]:
    """Vertex sets of the connected components, largest first, ties by smallest id."""
    if g.n == 0:
        return []
    ncomp, lab = _cc(g.adjacency, directed=False)
    order = np.argsort(lab, kind="stable")
    bounds = np.searchsorted(lab[order], np.arange(ncomp + 1))
    comps = [order[bounds[i]:bounds[i + 1]] for i in range(ncomp)]
    comps.sort(key=lambda c: (-c.size, int(c[0])))
    return comps


def component_count(g: WeightedGraph) -> int:
    if g.n == 0:
        return 0
    return int(_cc(g.adjacency, directed=False)[0])


def is_connected(g: WeightedGraph) -> bool:
    return component_count(g) == 1


def filter_small_components(g: WeightedGraph, min_size: int) -> tuple[WeightedGraph, np.ndarray]:
    """Drop components with fewer than ``min_size`` vertices.

    Returns the induced subgraph on the surviving vertices and the array
    mapping each new vertex id to its original id.
    """
    if min_size < 1:
        raise ValueError("min_size must be >= 1")
    keep = [c for c in connected_components(g) if c.size >= min_size]
    if not keep:
        raise EmptyResult(f"no component has at least {min_size} vertices")
    return g.induced_subgraph(np.concatenate(keep))


def filter_well_connected_components(g: WeightedGraph, min_gap: float = 0.1) -> tuple[WeightedGraph, np.ndarray]:
    """Keep components whose normalized-Laplacian second eigenvalue exceeds ``min_gap``.

    Components with fewer than two vertices have no second eigenvalue and
    are dropped.
    """
    keep = []
    for comp in connected_components(g):
        if comp.size < 2:
            continue
        sub, _ = g.induced_subgraph(comp)
        a = sub.adjacency.toarray()
        d = a.sum(axis=1)
        inv = 1.0 / np.sqrt(d)
        lap = np.eye(comp.size) - inv[:, None] * a * inv[None, :]
        gap = np.linalg.eigvalsh(lap)[1]
        if gap > min_gap:
            keep.append(comp)
    if not keep:
        raise EmptyResult("no component passes the spectral-gap filter")
    return g.induced_subgraph(np.concatenate(keep))
