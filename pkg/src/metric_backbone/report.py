"""Edge-retention bookkeeping shared by the backbone and the competing sparsifiers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Partition, WeightedGraph


@dataclass(frozen=True)
class BlockRetention:
    """Per block pair ``(a, b)`` (symmetric k x k tables).

    ``pairs`` counts vertex pairs, ``original`` the edges of the input graph
    and ``kept`` the surviving edges. Ratios are NaN where there is nothing
    to divide by.
    """

    pairs: np.ndarray
    original: np.ndarray
    kept: np.ndarray

    @property
    def k(self) -> int:
        return int(self.pairs.shape[0])

    @property
    def ratio(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.original > 0, self.kept / np.maximum(self.original, 1), np.nan)

    @property
    def density(self) -> np.ndarray:
        """Empirical edge probability of the input graph, per block pair."""
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.pairs > 0, self.original / np.maximum(self.pairs, 1), np.nan)

    @property
    def kept_density(self) -> np.ndarray:
        """Empirical probability that a vertex pair is a surviving edge."""
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.pairs > 0, self.kept / np.maximum(self.pairs, 1), np.nan)

    def intra_inter(self) -> dict[str, float]:
        """Pool diagonal vs. off-diagonal block pairs."""
        k = self.k
        diag = np.eye(k, dtype=bool)
        upper = np.triu(np.ones((k, k), dtype=bool), 1)
        out = {}
        for name, mask in (("intra", diag), ("inter", upper)):
            pairs = self.pairs[mask].sum()
            orig = self.original[mask].sum()
            kept = self.kept[mask].sum()
            out[f"{name}_pairs"] = float(pairs)
            out[f"{name}_edges"] = float(orig)
            out[f"{name}_kept"] = float(kept)
            out[f"{name}_density"] = orig / pairs if pairs else float("nan")
            out[f"{name}_kept_density"] = kept / pairs if pairs else float("nan")
            out[f"{name}_retention"] = kept / orig if orig else float("nan")
        return out

    def to_dict(self) -> dict:
        return {
            "pairs": self.pairs.tolist(),
            "original": self.original.tolist(),
            "kept": self.kept.tolist(),
            "ratio": [[None if np.isnan(x) else float(x) for x in row] for row in self.ratio],
        }


def _symmetric_counts(k: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    c = np.bincount(lo * k + hi, minlength=k * k).reshape(k, k).astype(np.int64)
    return c + np.triu(c, 1).T


def block_retention(g: WeightedGraph, z: Partition, kept: np.ndarray) -> BlockRetention:
    k = z.k
    lab = z.labels
    sizes = z.block_sizes().astype(np.int64)
    pairs = np.outer(sizes, sizes)
    np.fill_diagonal(pairs, sizes * (sizes - 1) // 2)
    a, b = lab[g.u], lab[g.v]
    kept = np.asarray(kept, dtype=bool)
    return BlockRetention(pairs, _symmetric_counts(k, a, b), _symmetric_counts(k, a[kept], b[kept]))


@dataclass
class SparsifyReport:
    method: str
    m_original: int
    m_target: int
    m_achieved: int
    retention: BlockRetention | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.m_achieved > self.m_original:
            raise ValueError("a sparsifier cannot add edges")

    @property
    def retention_ratio(self) -> float:
        return self.m_achieved / self.m_original if self.m_original else 1.0

    def to_dict(self) -> dict:
        d = {
            "method": self.method,
            "m_original": self.m_original,
            "m_target": self.m_target,
            "m_achieved": self.m_achieved,
            "retention_ratio": self.retention_ratio,
        }
        if self.retention is not None:
            d["block_retention"] = self.retention.to_dict()
        d.update(self.extra)
        return d
