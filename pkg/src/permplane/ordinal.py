"""Ordinal-pattern (Bandt-Pompe) symbolization of time series.

A window of D values taken at spacing tau is mapped to the permutation of
time offsets that sorts the values ascending; equal values keep the earlier
offset first. Counting the D! patterns over all sliding windows yields the
ordinal-pattern probability distribution that the information measures
consume.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

import numpy as np

MAX_DIMENSION = 10  # D! count table grows factorially; 10! ~ 3.6M states

OrdinalPattern = tuple[int, ...]


@dataclass(frozen=True)
class EmbeddingParams:
    """Embedding dimension D and delay tau for pattern extraction."""

    dimension: int
    delay: int = 1

    def __post_init__(self) -> None:
        if self.dimension < 2:
            raise ValueError(f"embedding dimension must be >= 2, got {self.dimension}")
        if self.dimension > MAX_DIMENSION:
            raise ValueError(
                f"embedding dimension must be <= {MAX_DIMENSION}, got {self.dimension}"
            )
        if self.delay < 1:
            raise ValueError(f"embedding delay must be >= 1, got {self.delay}")

    @property
    def n_states(self) -> int:
        """Number of possible ordinal patterns, D!."""
        return factorial(self.dimension)

    @property
    def span(self) -> int:
        """Number of samples one window covers, (D-1)*tau + 1."""
        return (self.dimension - 1) * self.delay + 1


@dataclass(frozen=True)
class OrdinalDistribution:
    """Estimated probability distribution over the D! ordinal patterns.

    ``counts[r]`` is the number of windows whose pattern has Lehmer rank
    ``r``; ``probabilities`` is ``counts / total``. ``length_warning`` is
    set when the source series is too short (N < 5*D!) for the pattern
    statistics to be considered reliable.
    """

    params: EmbeddingParams
    counts: np.ndarray
    total: int
    probabilities: np.ndarray
    n_source: int
    length_warning: bool = field(default=False)

    def __post_init__(self) -> None:
        if self.counts.shape != (self.params.n_states,):
            raise ValueError("counts length must equal D!")
        if int(self.counts.sum()) != self.total:
            raise ValueError("counts must sum to total")
        self.counts.setflags(write=False)
        self.probabilities.setflags(write=False)


def extract_pattern(window: Sequence[float], params: EmbeddingParams) -> OrdinalPattern:
    """Ordinal pattern of a single window of ``params.dimension`` values.

    Returns the permutation of time offsets that sorts the values ascending.
    Ties keep the smaller offset first, so (5, 5, 5) maps to (0, 1, 2).
    """
    w = np.asarray(window, dtype=float)
    if w.shape != (params.dimension,):
        raise ValueError(
            f"window length {w.shape} does not match dimension {params.dimension}"
        )
    return tuple(int(i) for i in np.argsort(w, kind="stable"))


def _check_permutation(pattern: Sequence[int]) -> tuple[int, ...]:
    p = tuple(int(i) for i in pattern)
    if sorted(p) != list(range(len(p))):
        raise ValueError(f"{pattern!r} is not a permutation of 0..{len(p) - 1}")
    return p


def pattern_rank(pattern: Sequence[int]) -> int:
    """Lexicographic rank of a permutation in [0, D!-1] via its Lehmer code."""
    p = _check_permutation(pattern)
    d = len(p)
    rank = 0
    for j in range(d):
        smaller_after = sum(1 for k in range(j + 1, d) if p[k] < p[j])
        rank += smaller_after * factorial(d - 1 - j)
    return rank


def pattern_unrank(rank: int, dimension: int) -> OrdinalPattern:
    """Inverse of :func:`pattern_rank` for permutations of the given size."""
    m = factorial(dimension)
    if not 0 <= rank < m:
        raise ValueError(f"rank {rank} out of range [0, {m - 1}] for D={dimension}")
    remaining = list(range(dimension))
    out = []
    for j in range(dimension):
        f = factorial(dimension - 1 - j)
        idx, rank = divmod(rank, f)
        out.append(remaining.pop(idx))
    return tuple(out)


def _pattern_ranks_vectorized(windows: np.ndarray) -> np.ndarray:
    """Lehmer ranks for each row of a (n, D) window matrix."""
    d = windows.shape[1]
    perms = np.argsort(windows, axis=1, kind="stable")
    # Lehmer digit j = number of later entries smaller than perms[:, j]
    greater = perms[:, :, None] > perms[:, None, :]
    after = np.triu(np.ones((d, d), dtype=bool), k=1)
    lehmer = np.logical_and(greater, after).sum(axis=2)
    weights = np.array([factorial(d - 1 - j) for j in range(d)], dtype=np.int64)
    return lehmer @ weights


def ordinal_distribution(series, params: EmbeddingParams) -> OrdinalDistribution:
    """Ordinal-pattern distribution of a series under the given embedding.

    Slides a window of span (D-1)*tau + 1 over the series with unit step,
    extracts the pattern of the D values spaced tau apart, and normalizes
    pattern counts by the number of windows, N - (D-1)*tau.

    ``series`` may be anything array-like or an object with a ``values``
    attribute (e.g. an ingest TimeSeries).
    """
    values = getattr(series, "values", series)
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise ValueError("series contains NaN or infinite values; clean it first")
    n = x.size
    if n < params.span:
        raise ValueError(
            f"series of length {n} too short for D={params.dimension}, "
            f"tau={params.delay} (needs >= {params.span})"
        )
    if params.delay > max(1, n // 2):
        raise ValueError(f"delay {params.delay} exceeds half the series length")

    windows = np.lib.stride_tricks.sliding_window_view(x, params.span)[:, :: params.delay]
    ranks = _pattern_ranks_vectorized(windows)
    m = params.n_states
    counts = np.bincount(ranks, minlength=m)
    total = n - (params.dimension - 1) * params.delay
    probabilities = counts / total
    return OrdinalDistribution(
        params=params,
        counts=counts,
        total=total,
        probabilities=probabilities,
        n_source=n,
        length_warning=n < 5 * m,
    )
