"""Shuffled surrogates: destroy temporal order, keep the value distribution.

A surrogate is a uniform random permutation of the original observations.
Any structure the quantifiers saw in the original series vanishes in the
surrogate, so a sufficiently long shuffle lands near the fully random
corner of the complexity-entropy plane (h close to 1, c close to 0).
Shuffles are driven by the in-package SplitMix64 generator and are
bit-reproducible for a given (series, seed, n_shuffles).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .infomeasures import PlaneQuantifiers, plane_point
from .ingest import TimeSeries
from .ordinal import EmbeddingParams, ordinal_distribution
from .rng import SplitMix64, child_seed

SURROGATE_SUFFIX = "~shuffled"


@dataclass(frozen=True)
class SurrogateReport:
    """Original vs shuffled plane positions for one series."""

    name: str
    params: EmbeddingParams
    original: PlaneQuantifiers
    surrogates: tuple[PlaneQuantifiers, ...]
    seed: int
    n_shuffles: int

    def __post_init__(self) -> None:
        if len(self.surrogates) != self.n_shuffles:
            raise ValueError("surrogate count does not match n_shuffles")


def shuffle_series(series: TimeSeries, seed: int) -> TimeSeries:
    """Uniform random permutation of a series under a deterministic seed.

    The value multiset is preserved exactly; date labels are dropped since
    the permuted values no longer align with them.
    """
    if len(series) < 2:
        raise ValueError(f"series {series.name!r} too short to shuffle (length {len(series)})")
    values = series.values.tolist()
    SplitMix64(seed).shuffle(values)
    return TimeSeries(
        name=series.name + SURROGATE_SUFFIX,
        values=np.array(values, dtype=float),
        labels=None,
    )


def surrogate_test(
    series: TimeSeries,
    params: EmbeddingParams,
    n_shuffles: int = 1,
    seed: int = 0,
) -> SurrogateReport:
    """Plane positions of a series and of n seeded shuffles of it.

    Shuffle i uses seed ``child_seed(seed, i)``, so the report is fully
    determined by (series, seed, n_shuffles) and individual shuffles can be
    recomputed in isolation.
    """
    if n_shuffles < 1:
        raise ValueError(f"n_shuffles must be >= 1, got {n_shuffles}")
    original = plane_point(ordinal_distribution(series, params))
    surrogates = tuple(
        plane_point(ordinal_distribution(shuffle_series(series, child_seed(seed, i)), params))
        for i in range(n_shuffles)
    )
    return SurrogateReport(
        name=series.name,
        params=params,
        original=original,
        surrogates=surrogates,
        seed=seed,
        n_shuffles=n_shuffles,
    )
