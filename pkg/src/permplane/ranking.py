"""Efficiency ranking on the complexity-entropy plane and group summaries.

A fully random process sits at (h, c) = (1, 0); distance from that corner
orders series from most to least informationally efficient. The metric is
pluggable: "euclidean" (default) uses sqrt((1-h)^2 + c^2), "entropy" uses
the entropy deviation 1-h alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .infomeasures import PlaneQuantifiers
from .ordinal import EmbeddingParams

METRICS = ("euclidean", "entropy")


@dataclass(frozen=True)
class RankEntry:
    name: str
    h: float
    c: float
    distance: float


@dataclass(frozen=True)
class EfficiencyRanking:
    """Entries sorted ascending by distance, name as tie-breaker."""

    entries: tuple[RankEntry, ...]
    params: EmbeddingParams
    metric: str = "euclidean"


@dataclass(frozen=True)
class GroupSummary:
    group: str
    mean_h: float
    std_h: float
    mean_c: float
    std_c: float
    n: int


def efficiency_distance(q: PlaneQuantifiers, metric: str = "euclidean") -> float:
    """Distance of a plane point from the ideal random corner (1, 0)."""
    if metric == "euclidean":
        return math.hypot(1.0 - q.h, q.c)
    if metric == "entropy":
        return abs(1.0 - q.h)
    raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")


def rank_series(
    points: Mapping[str, PlaneQuantifiers], metric: str = "euclidean"
) -> EfficiencyRanking:
    """Order named plane points by efficiency distance, ascending.

    All points must share the same embedding parameters; equal distances
    fall back to name order so the ranking is deterministic.
    """
    if not points:
        raise ValueError("no points to rank")
    params_set = {q.params for q in points.values()}
    if len(params_set) > 1:
        raise ValueError(f"mixed embedding parameters: {sorted(map(str, params_set))}")
    entries = [
        RankEntry(name=name, h=q.h, c=q.c, distance=efficiency_distance(q, metric))
        for name, q in points.items()
    ]
    entries.sort(key=lambda e: (e.distance, e.name))
    return EfficiencyRanking(
        entries=tuple(entries), params=next(iter(params_set)), metric=metric
    )


def _mean_std(values: list[float]) -> tuple[float, float]:
    n = len(values)
    if all(v == values[0] for v in values):
        # identical members: summation rounding must not manufacture spread
        return values[0], 0.0
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def group_summary(
    points: Mapping[str, PlaneQuantifiers], groups: Mapping[str, str]
) -> list[GroupSummary]:
    """Per-group mean and sample (n-1) standard deviation of h and c.

    Every point must carry a group label and every label must reference a
    known point. Summaries come back sorted by group label.
    """
    missing = sorted(set(points) - set(groups))
    if missing:
        raise ValueError(f"points without a group label: {missing}")
    unknown = sorted(set(groups) - set(points))
    if unknown:
        raise ValueError(f"group labels reference unknown points: {unknown}")
    members: dict[str, list[str]] = {}
    for name, label in groups.items():
        members.setdefault(label, []).append(name)
    out = []
    for label in sorted(members):
        hs = [points[name].h for name in members[label]]
        cs = [points[name].c for name in members[label]]
        mean_h, std_h = _mean_std(hs)
        mean_c, std_c = _mean_std(cs)
        out.append(
            GroupSummary(
                group=label,
                mean_h=mean_h,
                std_h=std_h,
                mean_c=mean_c,
                std_c=std_c,
                n=len(hs),
            )
        )
    return out
