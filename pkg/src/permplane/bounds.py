"""Envelope of attainable statistical complexity as a function of entropy.

For M states and a given normalized entropy h, the complexity is confined
between two curves, c_min(h) and c_max(h). Both branches are traced by
sweeping one-parameter families of distributions: with m of the M
components pinned to zero (m = 0..M-2), one distinguished component carries
probability p and the remaining M-m-1 components share 1-p equally.
Sweeping p over a dense grid for every m and taking the pointwise min and
max of c on a common entropy grid reproduces the dashed bounds seen on
complexity-entropy diagrams.

There is no closed form for the envelope itself; correctness is enforced
by Monte Carlo containment and tightness checks in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .infomeasures import q0

P_GRID = 4096  # p samples per family
DEFAULT_RESOLUTION = 512
_H_SLACK = 1e-12  # tolerated rounding overshoot of h beyond [0, 1]


@dataclass(frozen=True)
class ComplexityEnvelope:
    """Sampled (h, c_min, c_max) envelope curves for M states."""

    m: int
    h: np.ndarray
    c_min: np.ndarray
    c_max: np.ndarray

    def __post_init__(self) -> None:
        for arr in (self.h, self.c_min, self.c_max):
            arr.setflags(write=False)

    @property
    def samples(self) -> list[tuple[float, float, float]]:
        return list(zip(self.h.tolist(), self.c_min.tolist(), self.c_max.tolist()))


def _family_curve(m_states: int, n_zero: int, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(h, c) along one extremal family, closed form in the sweep parameter.

    The family has ``n_zero`` zero components, one component with
    probability ``p`` and ``k = m_states - n_zero - 1`` components sharing
    ``1 - p`` equally.
    """
    k = m_states - n_zero - 1
    u = 1.0 / m_states
    log_m = math.log(m_states)
    q = (1.0 - p) / k

    with np.errstate(divide="ignore", invalid="ignore"):
        term_p = np.where(p > 0.0, p * np.log(p), 0.0)
        term_q = np.where(p < 1.0, (1.0 - p) * np.log(q), 0.0)
    s = -(term_p + term_q) + 0.0

    a = (p + u) / 2.0
    b = (q + u) / 2.0
    d = u / 2.0
    s_mid = -(a * np.log(a) + k * b * np.log(b) + n_zero * d * math.log(d))
    j = np.maximum(s_mid - 0.5 * (s + log_m), 0.0)

    h = np.clip(s / log_m, 0.0, 1.0)
    c = q0(m_states) * j * h
    return h, c


def _monotone_runs(h: np.ndarray) -> list[tuple[int, int]]:
    """Split indices of a curve into maximal runs monotone in h."""
    n = h.size
    runs = []
    start = 0
    direction = 0
    for i in range(1, n):
        step = h[i] - h[i - 1]
        d = 0 if step == 0.0 else (1 if step > 0.0 else -1)
        if d == 0:
            continue
        if direction == 0:
            direction = d
        elif d != direction:
            runs.append((start, i - 1))
            start = i - 1
            direction = d
    runs.append((start, n - 1))
    return runs


@lru_cache(maxsize=32)
def envelope(m: int, resolution: int = DEFAULT_RESOLUTION) -> ComplexityEnvelope:
    """Envelope curves for M states over ``resolution`` entropy bins.

    Samples sit at the resolution + 1 nodes j / resolution, so doubling the
    resolution nests the coarse grid inside the fine one and refinement only
    adds detail: values at shared nodes are identical by construction.

    Cached per (m, resolution) within the process; the returned arrays are
    read-only and safe to share across threads.
    """
    if m < 2:
        raise ValueError(f"need at least 2 states, got {m}")
    if resolution < 100:
        raise ValueError(f"resolution must be >= 100, got {resolution}")

    nodes = np.linspace(0.0, 1.0, resolution + 1)
    c_min = np.full(nodes.size, np.inf)
    c_max = np.full(nodes.size, -np.inf)
    covered = np.zeros(nodes.size, dtype=bool)

    base = np.linspace(0.0, 1.0, P_GRID)
    for n_zero in range(m - 1):
        # include the equal-share point, where the family degenerates to
        # the uniform distribution over m - n_zero states
        p = np.unique(np.concatenate((base, [1.0 / (m - n_zero)])))
        h, c = _family_curve(m, n_zero, p)
        for lo, hi in _monotone_runs(h):
            hr, cr = h[lo : hi + 1], c[lo : hi + 1]
            if hr[0] > hr[-1]:
                hr, cr = hr[::-1], cr[::-1]
            keep = np.concatenate(([True], np.diff(hr) > 0.0))
            hr, cr = hr[keep], cr[keep]
            if hr.size < 2:
                continue
            i0 = np.searchsorted(nodes, hr[0], side="left")
            i1 = np.searchsorted(nodes, hr[-1], side="right")
            if i0 >= i1:
                continue
            vals = np.interp(nodes[i0:i1], hr, cr)
            np.minimum(c_min[i0:i1], vals, out=c_min[i0:i1])
            np.maximum(c_max[i0:i1], vals, out=c_max[i0:i1])
            covered[i0:i1] = True

    # both branches collapse to zero at the one-hot (h=0) and uniform (h=1)
    # limits; pin them exactly so rounding in the sweep cannot leave the
    # terminal nodes uncovered
    c_min[0] = c_max[0] = 0.0
    c_min[-1] = c_max[-1] = 0.0
    covered[0] = covered[-1] = True
    if not covered.all():
        missing = nodes[~covered]
        raise RuntimeError(f"envelope sweep left entropy nodes uncovered: {missing[:5]}")

    return ComplexityEnvelope(m=m, h=nodes, c_min=c_min, c_max=c_max)


def contains(env: ComplexityEnvelope, h: float, c: float, eps: float = 1e-9) -> bool:
    """Whether (h, c) lies between the envelope curves, within eps.

    Linear interpolation between envelope samples; h must lie in [0, 1]
    up to rounding slack.
    """
    if not (-_H_SLACK <= h <= 1.0 + _H_SLACK):
        raise ValueError(f"entropy {h} outside [0, 1]")
    hh = min(max(h, 0.0), 1.0)
    lo = float(np.interp(hh, env.h, env.c_min))
    hi = float(np.interp(hh, env.h, env.c_max))
    return lo - eps <= c <= hi + eps


def contains_many(
    env: ComplexityEnvelope, h: np.ndarray, c: np.ndarray, eps: float = 1e-9
) -> np.ndarray:
    """Vectorized :func:`contains` for arrays of plane points."""
    h = np.asarray(h, dtype=float)
    c = np.asarray(c, dtype=float)
    if np.any(h < -_H_SLACK) or np.any(h > 1.0 + _H_SLACK):
        raise ValueError("entropy values outside [0, 1]")
    hh = np.clip(h, 0.0, 1.0)
    lo = np.interp(hh, env.h, env.c_min)
    hi = np.interp(hh, env.h, env.c_max)
    return (c >= lo - eps) & (c <= hi + eps)
