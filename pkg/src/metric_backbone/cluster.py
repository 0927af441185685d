"""Adjacency spectral clustering and partition-comparison metrics."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linear_sum_assignment
from scipy.sparse.linalg import ArpackNoConvergence, eigsh
from sklearn.cluster import KMeans, SpectralClustering
from sklearn.exceptions import ConvergenceWarning

from .errors import ConvergenceFailure, LabelCountMismatch
from .graph import Partition, WeightedGraph, as_labels

DENSE_EIG_LIMIT = 400
RESIDUAL_TOL = 1e-6


@dataclass(frozen=True)
class SpectralEmbedding:
    vectors: np.ndarray  # n x k, orthonormal columns
    values: np.ndarray  # |values| non-increasing


@dataclass(frozen=True)
class ClusteringResult:
    labels: Partition
    inertia: float
    restarts_used: int
    embedding: SpectralEmbedding | None = None


def _order_and_sign(vals: np.ndarray, vecs: np.ndarray, k: int) -> SpectralEmbedding:
    mag = np.abs(vals)
    scale = max(float(mag.max()) if mag.size else 0.0, 1e-300)
    # equal magnitudes (to rounding): positive eigenvalue first
    order = np.lexsort((-vals, -np.round(mag / scale, 10)))[:k]
    vals, vecs = vals[order], vecs[:, order].copy()
    piv = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[piv, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return SpectralEmbedding(vecs * signs, vals)


def spectral_embedding(W, k: int, tol: float = RESIDUAL_TOL, maxiter: int | None = None) -> SpectralEmbedding:
    """Top-``k`` eigenpairs by |eigenvalue| of a symmetric weighted adjacency matrix.

    Small matrices use a dense solver; larger ones use ARPACK's Lanczos
    iteration. Each pair must satisfy ``|W u - s u| <= tol * |W|``.
    """
    if isinstance(W, WeightedGraph):
        W = W.adjacency
    n = W.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}]")
    dense = n <= DENSE_EIG_LIMIT or k >= n - 1
    if dense:
        a = W.toarray() if sp.issparse(W) else np.asarray(W, dtype=np.float64)
        vals, vecs = np.linalg.eigh(a)
    else:
        W = sp.csr_matrix(W, dtype=np.float64)
        # extra Lanczos vectors separate near-degenerate +/- pairs at the cut-off
        kk = min(n - 2, k + 2)
        try:
            vals, vecs = eigsh(W, k=kk, which="LM", tol=1e-10, maxiter=maxiter or 20 * n)
        except ArpackNoConvergence as exc:
            raise ConvergenceFailure(f"eigensolver did not converge for k={k}") from exc
    emb = _order_and_sign(vals, vecs, k)
    norm = float(np.abs(emb.values).max()) if k else 0.0
    if sp.issparse(W):
        res = W @ emb.vectors - emb.vectors * emb.values
    else:
        res = np.asarray(W) @ emb.vectors - emb.vectors * emb.values
    if norm > 0 and np.linalg.norm(res, axis=0).max() > tol * norm:
        raise ConvergenceFailure("eigenpair residual above tolerance")
    return emb


def kmeans(rows, k: int, restarts: int = 10, seed=0, max_iter: int = 300, tol: float = 1e-7) -> ClusteringResult:
    """Best of ``restarts`` k-means++ initialised Lloyd runs."""
    x = np.asarray(rows, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if not 1 <= k <= x.shape[0]:
        raise ValueError(f"k must lie in [1, {x.shape[0]}]")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        km = KMeans(n_clusters=k, init="k-means++", n_init=restarts, max_iter=max_iter, tol=tol, random_state=seed)
        lab = km.fit_predict(x)
    # exact objective of the returned labelling
    sums = np.zeros((k, x.shape[1]))
    np.add.at(sums, lab, x)
    counts = np.bincount(lab, minlength=k)[:, None]
    centres = sums / np.maximum(counts, 1)
    inertia = float(((x - centres[lab]) ** 2).sum())
    return ClusteringResult(Partition(lab, k), inertia, restarts)


def spectral_clustering(g: WeightedGraph, k: int, restarts: int = 10, seed=0) -> ClusteringResult:
    """k-means on the rows of the top-``k`` adjacency eigenvectors (weights used as given)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    emb = spectral_embedding(g.adjacency, k)
    res = kmeans(emb.vectors, k, restarts=restarts, seed=seed)
    return ClusteringResult(res.labels, res.inertia, res.restarts_used, emb)


def normalized_spectral_clustering(g: WeightedGraph, k: int, restarts: int = 10, seed=0) -> ClusteringResult:
    """scikit-learn's normalized-Laplacian spectral clustering with ``g``'s weights as affinities.

    Not the adjacency algorithm above; provided for comparison runs on
    proximity graphs. ``inertia`` is not reported (NaN).
    """
    if not 1 <= k <= g.n:
        raise ValueError(f"k must lie in [1, {g.n}]")
    with warnings.catch_warnings():
        # disconnected affinity graphs are legitimate inputs here
        warnings.simplefilter("ignore", UserWarning)
        sc = SpectralClustering(
            n_clusters=k, affinity="precomputed", n_init=restarts, random_state=seed, assign_labels="kmeans"
        )
        lab = sc.fit_predict(g.adjacency)
    return ClusteringResult(Partition(lab, k), float("nan"), restarts)


CLUSTERERS = {"adjacency": spectral_clustering, "normalized": normalized_spectral_clustering}


def confusion_matrix(z, zhat, k: int | None = None) -> np.ndarray:
    a, b = as_labels(z), as_labels(zhat)
    if a.size != b.size:
        raise ValueError("partitions cover different vertex counts")
    size = max(int(a.max(initial=0)), int(b.max(initial=0))) + 1 if k is None else k
    return np.bincount(a * size + b, minlength=size * size).reshape(size, size)


def clustering_loss(z, zhat, k: int | None = None) -> float:
    """Fraction of misclassified vertices under the best relabelling of ``zhat``."""
    a, b = as_labels(z), as_labels(zhat)
    if a.size != b.size:
        raise ValueError("partitions cover different vertex counts")
    if a.size == 0:
        return 0.0
    if k is None:
        k = z.k if isinstance(z, Partition) else int(a.max()) + 1
    if int(b.max()) >= k or int(a.max()) >= k:
        raise LabelCountMismatch(f"labels exceed the {k} allowed communities")
    cm = confusion_matrix(a, b, k)
    r, c = linear_sum_assignment(cm, maximize=True)
    return 1.0 - cm[r, c].sum() / a.size


def _comb2(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float((x * (x - 1) / 2).sum())


def adjusted_rand_index(z, zhat) -> float:
    """Pair-counting Rand index corrected for chance (Hubert and Arabie)."""
    a, b = as_labels(z), as_labels(zhat)
    if a.size != b.size:
        raise ValueError("partitions cover different vertex counts")
    n = a.size
    _, a = np.unique(a, return_inverse=True)
    _, b = np.unique(b, return_inverse=True)
    cm = confusion_matrix(a, b)
    index = _comb2(cm)
    sa = _comb2(cm.sum(axis=1))
    sb = _comb2(cm.sum(axis=0))
    total = n * (n - 1) / 2
    expected = sa * sb / total if total else 0.0
    top = 0.5 * (sa + sb)
    if top == expected:
        # both partitions trivial (one block, or all singletons) and hence identical
        return 1.0
    return (index - expected) / (top - expected)
