"""Weighted stochastic block models and the quantities that predict their backbone.

Vertices get iid block labels from ``pi``; a pair in blocks ``(a, b)`` is an
edge with probability ``B[a, b] * rho`` and, if present, costs a draw from
``costs[a][b]``. ``lam[a, b]`` is the cost density at zero, which governs how
short the cheapest paths are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, ProbabilityOverflow
from .graph import Mode, Partition, WeightedGraph, as_labels
from .report import BlockRetention, block_retention


@dataclass(frozen=True)
class CostDistribution:
    """Edge-cost law with ``F(0) = 0`` and density ``lam`` at zero.

    ``kind`` is ``"exp"`` (Exp(lam)), ``"unif"`` (Unif(0, 1/lam)) or
    ``"custom"``. Custom laws supply the inverse CDF for sampling and,
    for quadrature, the CDF itself; ``lam`` must be given explicitly.
    """

    kind: str
    lam: float
    inverse_cdf: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)
    cdf_fn: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("exp", "unif", "custom"):
            raise ValueError(f"unknown cost kind {self.kind!r}")
        if not self.lam > 0:
            raise ValueError("density at zero (lam) must be positive")
        if self.kind == "custom" and self.inverse_cdf is None:
            raise ValueError("custom cost law needs an inverse CDF")

    @classmethod
    def exponential(cls, lam: float = 1.0) -> "CostDistribution":
        return cls("exp", float(lam))

    @classmethod
    def uniform(cls, lam: float = 1.0) -> "CostDistribution":
        return cls("unif", float(lam))

    @classmethod
    def custom(cls, inverse_cdf, lam: float, cdf=None) -> "CostDistribution":
        return cls("custom", float(lam), inverse_cdf, cdf)

    @classmethod
    def parse(cls, text: str) -> "CostDistribution":
        """Parse ``exp:1.5`` or ``unif:2``."""
        kind, _, val = text.strip().partition(":")
        kind = {"exponential": "exp", "uniform": "unif"}.get(kind, kind)
        if kind not in ("exp", "unif"):
            raise ValueError(f"cannot parse cost law {text!r}")
        return cls(kind, float(val) if val else 1.0)

    def __str__(self) -> str:
        return f"{self.kind}:{self.lam:g}"

    def cdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "exp":
            return -np.expm1(-self.lam * np.maximum(x, 0.0))
        if self.kind == "unif":
            return np.clip(self.lam * x, 0.0, 1.0)
        if self.cdf_fn is None:
            raise ValueError("custom cost law has no CDF")
        return np.asarray(self.cdf_fn(x), dtype=np.float64)

    def _ppf(self, u: np.ndarray) -> np.ndarray:
        if self.kind == "exp":
            return -np.log1p(-u) / self.lam
        if self.kind == "unif":
            return u / self.lam
        return np.asarray(self.inverse_cdf(u), dtype=np.float64)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw ``size`` strictly positive costs by inversion."""
        out = self._ppf(rng.random(size))
        bad = ~(out > 0)
        while np.any(bad):
            out[bad] = self._ppf(rng.random(int(bad.sum())))
            bad = ~(out > 0)
        return out


@dataclass(frozen=True)
class WsbmParams:
    n: int
    pi: np.ndarray
    B: np.ndarray
    rho: float
    costs: tuple[tuple[CostDistribution, ...], ...]

    def __post_init__(self):
        pi = np.asarray(self.pi, dtype=np.float64)
        B = np.atleast_2d(np.asarray(self.B, dtype=np.float64))
        k = pi.size
        if B.shape != (k, k):
            raise ValueError(f"B must be {k}x{k}")
        if abs(pi.sum() - 1.0) > 1e-9 or pi.min() <= 0:
            raise ValueError("pi must be a positive probability vector")
        if not np.allclose(B, B.T) or B.min() <= 0:
            raise ValueError("B must be symmetric with positive entries")
        if not self.rho > 0:
            raise ValueError("rho must be positive")
        costs = self.costs
        if isinstance(costs, CostDistribution):
            costs = [[costs] * k for _ in range(k)]
        costs = tuple(tuple(row) for row in costs)
        if len(costs) != k or any(len(r) != k for r in costs):
            raise ValueError(f"costs must be a {k}x{k} table")
        for a in range(k):
            for b in range(a):
                if costs[a][b] != costs[b][a]:
                    raise ValueError("cost laws must be symmetric (F_ab = F_ba)")
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "costs", costs)
        if np.any(self.p > 1.0):
            raise ProbabilityOverflow(f"B * rho exceeds 1 (max {self.p.max():.4g})")

    @property
    def k(self) -> int:
        return int(self.pi.size)

    @property
    def p(self) -> np.ndarray:
        return self.B * self.rho

    @property
    def lam(self) -> np.ndarray:
        return np.array([[c.lam for c in row] for row in self.costs])

    @property
    def log_scale(self) -> float:
        """``log n / (n rho)``: the natural unit of shortest-path costs."""
        return math.log(self.n) / (self.n * self.rho)


def default_rho(n: int, exponent: float = 2.0) -> float:
    """``(log n)^exponent / n``; exponent 2 is the default sparsity scale."""
    return math.log(n) ** exponent / n


def planted_partition(
    n: int,
    k: int,
    p0: float,
    q0: float,
    rho: float | None = None,
    cost: CostDistribution | None = None,
) -> WsbmParams:
    B = np.full((k, k), float(q0))
    np.fill_diagonal(B, float(p0))
    return WsbmParams(
        n=n,
        pi=np.full(k, 1.0 / k),
        B=B,
        rho=default_rho(n) if rho is None else rho,
        costs=cost or CostDistribution.exponential(1.0),
    )


def params_from_dict(cfg: dict) -> WsbmParams:
    """Build parameters from a JSON-style mapping.

    Accepts either ``{"planted": {"k", "p0", "q0"}}`` or explicit ``pi`` and
    ``B``; ``rho`` or ``rho_exponent``; ``costs`` as one law string or a
    k x k table of strings.
    """
    n = int(cfg["n"])
    if "rho" in cfg:
        rho = float(cfg["rho"])
    else:
        rho = default_rho(n, float(cfg.get("rho_exponent", 2.0)))
    costs = cfg.get("costs", "exp:1")
    if isinstance(costs, str):
        costs = CostDistribution.parse(costs)
    else:
        costs = [[CostDistribution.parse(c) for c in row] for row in costs]
    if "planted" in cfg:
        pp = cfg["planted"]
        k = int(pp["k"])
        B = np.full((k, k), float(pp["q0"]))
        np.fill_diagonal(B, float(pp["p0"]))
        return WsbmParams(n, np.full(k, 1.0 / k), B, rho, costs)
    return WsbmParams(n, np.asarray(cfg["pi"], float), np.asarray(cfg["B"], float), rho, costs)


# sampling --------------------------------------------------------------------


def _geometric_positions(rng: np.random.Generator, total: int, p: float) -> np.ndarray:
    """Indices in ``[0, total)`` kept independently with probability ``p``, by geometric skips."""
    if total <= 0 or p <= 0:
        return np.zeros(0, dtype=np.int64)
    if p >= 1:
        return np.arange(total, dtype=np.int64)
    out = []
    pos = -1
    while True:
        expect = (total - pos) * p
        size = int(expect + 6 * math.sqrt(expect + 1) + 16)
        gaps = rng.geometric(p, size=size).astype(np.int64)
        idx = pos + np.cumsum(gaps)
        done = idx[-1] >= total
        idx = idx[idx < total]
        out.append(idx)
        if done:
            break
        pos = int(idx[-1])
    return np.concatenate(out)


def _unrank_pairs(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of ``t = j (j - 1) / 2 + i`` for ``0 <= i < j``."""
    j = np.floor((1.0 + np.sqrt(1.0 + 8.0 * t.astype(np.float64))) / 2.0).astype(np.int64)
    # float rounding can be off by one either way
    j -= (j * (j - 1) // 2) > t
    j += ((j + 1) * j // 2) <= t
    i = t - j * (j - 1) // 2
    return i, j


def _stream(seed_seq: np.random.SeedSequence, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed_seq.entropy, spawn_key=key))


def sample_wsbm(params: WsbmParams, seed=None) -> tuple[Partition, WeightedGraph]:
    """Draw labels and a cost-valued graph; deterministic for a given seed.

    Each block pair uses its own random stream, so the result does not
    depend on the order in which block pairs are generated.
    """
    ss = np.random.SeedSequence(seed)
    k, n = params.k, params.n
    z = _stream(ss, 0).choice(k, size=n, p=params.pi)
    members = [np.flatnonzero(z == a) for a in range(k)]
    us, vs, ws = [], [], []
    for a in range(k):
        for b in range(a, k):
            rng = _stream(ss, 1, a, b)
            ma, mb = members[a], members[b]
            if a == b:
                t = _geometric_positions(rng, ma.size * (ma.size - 1) // 2, params.p[a, a])
                i, j = _unrank_pairs(t)
                x, y = ma[i], ma[j]
            else:
                t = _geometric_positions(rng, ma.size * mb.size, params.p[a, b])
                x, y = ma[t // mb.size], mb[t % mb.size]
            us.append(np.minimum(x, y))
            vs.append(np.maximum(x, y))
            ws.append(params.costs[a][b].sample(rng, t.size))
    u = np.concatenate(us)
    v = np.concatenate(vs)
    w = np.concatenate(ws)
    order = np.lexsort((v, u))
    g = WeightedGraph(n, u[order], v[order], w[order], Mode.COST, _trusted=True)
    return Partition(z, k), g


# theory-side quantities --------------------------------------------------------


@dataclass(frozen=True)
class OperatorSummary:
    T: np.ndarray
    tau: np.ndarray
    tau_min: float
    tau_max: float
    mu: float
    eigenvalues: np.ndarray


def operator_summary(params: WsbmParams) -> OperatorSummary:
    """``T = (lam * B) diag(pi)``, its row sums ``tau`` and smallest |eigenvalue| ``mu``."""
    LB = params.lam * params.B
    T = LB * params.pi[None, :]
    tau = T.sum(axis=1)
    # T is similar to the symmetric matrix diag(sqrt pi) (lam*B) diag(sqrt pi)
    s = np.sqrt(params.pi)
    eig = np.linalg.eigvalsh(s[:, None] * LB * s[None, :])
    eig = eig[np.argsort(-np.abs(eig), kind="stable")]
    return OperatorSummary(T, tau, float(tau.min()), float(tau.max()), float(np.abs(eig).min()), eig)


@dataclass(frozen=True)
class RetentionBand:
    """Predicted bounds, per block pair, at leading order."""

    lower: np.ndarray
    upper: np.ndarray

    @property
    def is_point(self) -> bool:
        return bool(np.allclose(self.lower, self.upper))

    @property
    def mid(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)


def predicted_retention(params: WsbmParams) -> RetentionBand:
    """Band for the survival ratio ``p_mb / p`` of each block pair.

    ``[lam_ab / tau_max, lam_ab / tau_min] * log n / (n rho)``.
    """
    s = operator_summary(params)
    scale = params.log_scale
    return RetentionBand(params.lam / s.tau_max * scale, params.lam / s.tau_min * scale)


def predicted_backbone_density(params: WsbmParams) -> RetentionBand:
    """Band for ``p_mb``, the probability that a block-pair vertex pair is a backbone edge."""
    r = predicted_retention(params)
    return RetentionBand(r.lower * params.p, r.upper * params.p)


def predicted_cost_band(params: WsbmParams) -> tuple[float, float]:
    """Band ``[1/tau_max, 1/tau_min]`` for shortest-path costs in units of ``log n / (n rho)``."""
    s = operator_summary(params)
    return 1.0 / s.tau_max, 1.0 / s.tau_min


def max_cost_bound(params: WsbmParams, factor: float = 3.0) -> float:
    """Leading-order bound ``factor / tau_min * log n / (n rho)`` on the weighted diameter."""
    return factor / operator_summary(params).tau_min * params.log_scale


def backbone_probability_quadrature(cost_samples: Sequence[float], p_ab: float, F_ab: CostDistribution) -> float:
    """Monte-Carlo estimate of ``p_mb`` from sampled shortest-path costs.

    Averages ``-log(1 - p_ab F_ab(C))`` over the samples ``C``, i.e. integrates
    against their empirical density.
    """
    c = np.asarray(cost_samples, dtype=np.float64)
    if c.size == 0:
        raise ValueError("need at least one cost sample")
    if not 0 < p_ab < 1:
        raise DomainError("p_ab must lie in (0, 1)")
    x = p_ab * F_ab.cdf(c)
    if np.any(x >= 1.0):
        raise DomainError("p_ab * F_ab(C) reached 1")
    return float(np.mean(-np.log1p(-x)))


def sample_block_pairs(
    z: Partition, a: int, b: int, count: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """``count`` vertex pairs drawn uniformly with ``u`` in block ``a``, ``v`` in block ``b``, ``u != v``."""
    ma = np.flatnonzero(z.labels == a)
    mb = np.flatnonzero(z.labels == b)
    if ma.size == 0 or mb.size == 0 or (a == b and ma.size < 2):
        raise ValueError(f"blocks ({a}, {b}) too small to sample pairs")
    us = np.empty(0, dtype=np.int64)
    vs = np.empty(0, dtype=np.int64)
    while us.size < count:
        x = rng.choice(ma, size=count)
        y = rng.choice(mb, size=count)
        ok = x != y
        us = np.concatenate([us, x[ok]])
        vs = np.concatenate([vs, y[ok]])
    return us[:count], vs[:count]


def empirical_retention(g: WeightedGraph, z, backbone) -> BlockRetention:
    """Per block pair: original edge count, kept edge count and their ratio.

    ``backbone`` may be a boolean mask over ``g``'s edges, a graph whose edge
    set is contained in ``g``'s, or a :class:`BackboneResult`.
    """
    z = z if isinstance(z, Partition) else Partition(as_labels(z))
    if hasattr(backbone, "kept"):
        kept = backbone.kept
    elif isinstance(backbone, WeightedGraph):
        ids = g.edge_ids(backbone.u, backbone.v)
        if np.any(ids < 0):
            raise ValueError("backbone has edges that are not in the graph")
        kept = np.zeros(g.m, dtype=bool)
        kept[ids] = True
    else:
        kept = np.asarray(backbone, dtype=bool)
    return block_retention(g, z, kept)
