"""Shannon entropy, Jensen-Shannon disequilibrium, and statistical complexity.

All logarithms are natural, so entropies are in nats and the normalized
entropy of a distribution over M states is S/ln M. The complexity is the
product of the normalized entropy with the Q0-normalized Jensen-Shannon
divergence from the uniform reference distribution; it vanishes both for a
one-hot distribution (perfect order) and for the uniform one (full
randomness).

Scalar entry points accumulate with ``math.fsum``, which is exact, so the
results are invariant under any permutation of the input vector and stable
down to the last bit. ``plane_many`` is the vectorized batch variant used
for envelope sweeps and Monte Carlo checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ordinal import EmbeddingParams, OrdinalDistribution

SUM_TOLERANCE = 1e-9  # accepted drift of sum(p) from 1 before rejecting


@dataclass(frozen=True)
class PlaneQuantifiers:
    """A point on the complexity-entropy plane plus extraction metadata."""

    h: float
    c: float
    params: EmbeddingParams
    n_effective: int
    length_warning: bool

    def as_tuple(self) -> tuple[float, float]:
        return (self.h, self.c)


def _validated(p) -> np.ndarray:
    """Check a probability vector and silently renormalize rounding drift."""
    v = np.asarray(p, dtype=float)
    if v.ndim != 1:
        raise ValueError("probability vector must be one-dimensional")
    if v.size < 1:
        raise ValueError("probability vector is empty")
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise ValueError("probabilities must be finite and non-negative")
    s = math.fsum(v.tolist())
    if abs(s - 1.0) > SUM_TOLERANCE:
        raise ValueError(f"probabilities sum to {s!r}, not 1")
    if s != 1.0:
        v = v / s
    return v


def shannon_entropy(p) -> float:
    """Shannon entropy -sum(p_i ln p_i) in nats, with 0 ln 0 = 0."""
    v = _validated(p)
    # + 0.0 turns the -0.0 of a one-hot distribution into 0.0
    return -math.fsum(x * math.log(x) for x in v.tolist() if x > 0.0) + 0.0


def normalized_entropy(p) -> float:
    """Shannon entropy divided by its maximum ln M; lies in [0, 1].

    Rounding can push the ratio an ulp past the mathematical range, so the
    result is clamped to [0, 1].
    """
    v = _validated(p)
    m = v.size
    if m < 2:
        raise ValueError("normalized entropy needs at least 2 states")
    return min(max(shannon_entropy(v) / math.log(m), 0.0), 1.0)


def jensen_shannon_divergence(p, q) -> float:
    """Jensen-Shannon divergence S[(p+q)/2] - (S[p] + S[q])/2.

    Symmetric and non-negative; zero exactly when p equals q.
    """
    vp = _validated(p)
    vq = _validated(q)
    if vp.size != vq.size:
        raise ValueError(f"length mismatch: {vp.size} vs {vq.size}")
    mid = (vp + vq) / 2.0
    j = shannon_entropy(mid) - 0.5 * (shannon_entropy(vp) + shannon_entropy(vq))
    # mathematically >= 0; rounding can leave a ~1 ulp negative residue
    return j if j > 0.0 else 0.0


def q0(m: int) -> float:
    """Normalization constant 1 / max JSD(P, uniform) over M states.

    The maximum is attained at any one-hot P, giving
    -2 / ((M+1)/M ln(M+1) - 2 ln(2M) + ln M).
    """
    if m < 2:
        raise ValueError(f"need at least 2 states, got {m}")
    mf = float(m)
    return -2.0 / ((mf + 1.0) / mf * math.log(mf + 1.0) - 2.0 * math.log(2.0 * mf) + math.log(mf))


def statistical_complexity(p) -> float:
    """Jensen-Shannon statistical complexity q0 * JSD(p, uniform) * H(p)."""
    v = _validated(p)
    m = v.size
    if m < 2:
        raise ValueError("statistical complexity needs at least 2 states")
    uniform = np.full(m, 1.0 / m)
    return q0(m) * jensen_shannon_divergence(v, uniform) * normalized_entropy(v)


def plane_point(dist: OrdinalDistribution) -> PlaneQuantifiers:
    """Locate an ordinal distribution on the complexity-entropy plane."""
    p = dist.probabilities
    return PlaneQuantifiers(
        h=normalized_entropy(p),
        c=statistical_complexity(p),
        params=dist.params,
        n_effective=dist.total,
        length_warning=dist.length_warning,
    )


def plane_many(dists: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(h, c) for each row of a matrix of probability vectors.

    Batch path for envelope sweeps and Monte Carlo oracles; plain float64
    reductions, which agree with the exact scalar path to ~1e-15.
    """
    pm = np.asarray(dists, dtype=float)
    if pm.ndim != 2 or pm.shape[1] < 2:
        raise ValueError("expected a (n, M) matrix with M >= 2")
    if np.any(pm < 0) or not np.all(np.isfinite(pm)):
        raise ValueError("probabilities must be finite and non-negative")
    sums = pm.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > SUM_TOLERANCE):
        raise ValueError("at least one row does not sum to 1")
    pm = pm / sums[:, None]

    m = pm.shape[1]
    log_m = math.log(m)
    u = 1.0 / m

    with np.errstate(divide="ignore", invalid="ignore"):
        s = -np.where(pm > 0.0, pm * np.log(pm), 0.0).sum(axis=1) + 0.0
    mid = (pm + u) / 2.0
    s_mid = -(mid * np.log(mid)).sum(axis=1)
    j = s_mid - 0.5 * (s + log_m)
    np.maximum(j, 0.0, out=j)
    h = np.clip(s / log_m, 0.0, 1.0)
    c = q0(m) * j * h
    return h, c
