"""Nonparametric rank correlations and the entropy-vs-attribute battery.

Spearman's rho is the Pearson correlation of mid-ranks (ties get average
ranks) with a two-sided p-value from the t approximation on n-2 degrees of
freedom; a perfect rho of +-1 reports the permutation bound 2/n! instead.
Kendall's tau-b applies the usual tie corrections with a normal
approximation for the p-value. Exact permutation p-values are available
for n <= 8 via ``exact_p=True``; they exist for oracle testing, not
production use.

Pairs with a missing member are dropped before anything is computed, so
each battery cell reports its own effective n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Mapping, Sequence

import numpy as np
from scipy.special import stdtr

from .infomeasures import PlaneQuantifiers
from .ingest import Panel

_EXACT_P_MAX_N = 8
_PERFECT_RHO_TOL = 1e-12


@dataclass(frozen=True)
class CorrelationResult:
    method: str
    rho: float
    p_value: float
    n: int
    group: str = "all"


@dataclass(frozen=True)
class BatteryCell:
    """One (group, D, attribute) cell of the correlation battery."""

    group: str
    dimension: int
    attribute: str
    rho: float | None
    p_value: float | None
    n: int
    stars: str
    insufficient: bool


def _drop_missing_pairs(x, y) -> tuple[np.ndarray, np.ndarray]:
    xv = np.array([math.nan if v is None else float(v) for v in x], dtype=float)
    yv = np.array([math.nan if v is None else float(v) for v in y], dtype=float)
    if xv.size != yv.size:
        raise ValueError(f"length mismatch: {xv.size} vs {yv.size}")
    keep = np.isfinite(xv) & np.isfinite(yv)
    return xv[keep], yv[keep]


def midranks(x: np.ndarray) -> np.ndarray:
    """1-based ranks with ties replaced by the mean rank of their block."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size, dtype=float)
    i = 0
    sx = x[order]
    while i < x.size:
        j = i
        while j + 1 < x.size and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    ac = a - a.mean()
    bc = b - b.mean()
    denom = math.sqrt(float(ac @ ac) * float(bc @ bc))
    if denom == 0.0:
        raise ValueError("zero rank variance")
    return min(max(float(ac @ bc) / denom, -1.0), 1.0)


def _exact_permutation_p(statistic, ry: np.ndarray, observed: float, n: int) -> float:
    if n > _EXACT_P_MAX_N:
        raise ValueError(f"exact p-value limited to n <= {_EXACT_P_MAX_N}, got {n}")
    hits = 0
    total = 0
    threshold = abs(observed) - 1e-12
    for perm in permutations(range(n)):
        total += 1
        if abs(statistic(ry[list(perm)])) >= threshold:
            hits += 1
    return hits / total


def spearman(x, y, *, exact_p: bool = False, group: str = "all") -> CorrelationResult:
    """Spearman rank correlation with mid-rank ties and two-sided p-value."""
    xv, yv = _drop_missing_pairs(x, y)
    n = xv.size
    if n < 3:
        raise ValueError(f"need at least 3 complete pairs, got {n}")
    rx, ry = midranks(xv), midranks(yv)
    rho = _pearson(rx, ry)

    if exact_p:
        rxc = rx - rx.mean()
        denom_x = math.sqrt(float(rxc @ rxc))

        def stat(perm_ry: np.ndarray) -> float:
            pc = perm_ry - perm_ry.mean()
            d = denom_x * math.sqrt(float(pc @ pc))
            return float(rxc @ pc) / d if d else 0.0

        p = _exact_permutation_p(stat, ry, rho, n)
    elif 1.0 - abs(rho) < _PERFECT_RHO_TOL:
        p = min(1.0, 2.0 / factorial(n))
    else:
        t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
        p = 2.0 * float(stdtr(n - 2, -abs(t)))
    return CorrelationResult(method="spearman", rho=rho, p_value=p, n=n, group=group)


def _kendall_s(x: np.ndarray, y: np.ndarray) -> int:
    sx = np.sign(x[:, None] - x[None, :])
    sy = np.sign(y[:, None] - y[None, :])
    upper = np.triu_indices(x.size, k=1)
    return int(np.sum(sx[upper] * sy[upper]))


def _tie_sums(v: np.ndarray) -> tuple[float, float, float]:
    _, counts = np.unique(v, return_counts=True)
    t = counts.astype(float)
    return (
        float(np.sum(t * (t - 1) / 2.0)),
        float(np.sum(t * (t - 1) * (2 * t + 5))),
        float(np.sum(t * (t - 1) * (t - 2))),
    )


def kendall(x, y, *, exact_p: bool = False, group: str = "all") -> CorrelationResult:
    """Kendall tau-b with tie corrections and normal-approximation p-value."""
    xv, yv = _drop_missing_pairs(x, y)
    n = xv.size
    if n < 3:
        raise ValueError(f"need at least 3 complete pairs, got {n}")
    s = _kendall_s(xv, yv)
    n0 = n * (n - 1) / 2.0
    n1, vt, t3x = _tie_sums(xv)
    n2, vu, t3y = _tie_sums(yv)
    denom = math.sqrt((n0 - n1) * (n0 - n2))
    if denom == 0.0:
        raise ValueError("zero rank variance")
    tau = min(max(s / denom, -1.0), 1.0)

    if exact_p:
        p = _exact_permutation_p(lambda perm_y: _kendall_s(xv, perm_y), yv, float(s), n)
    else:
        v0 = n * (n - 1) * (2 * n + 5)
        var_s = (v0 - vt - vu) / 18.0
        var_s += t3x * t3y / (9.0 * n * (n - 1) * (n - 2))
        var_s += (2.0 * n1) * (2.0 * n2) / (2.0 * n * (n - 1))
        if var_s <= 0.0:
            raise ValueError("zero rank variance")
        z = s / math.sqrt(var_s)
        p = math.erfc(abs(z) / math.sqrt(2.0))
    return CorrelationResult(method="kendall", rho=tau, p_value=p, n=n, group=group)


def significance_stars(p_value: float) -> str:
    """'*' below the 5% level, '**' below 1%."""
    if p_value < 0.01:
        return "**"
    if p_value < 0.05:
        return "*"
    return ""


def correlation_battery(
    panel: Panel,
    quantifiers_by_dim: Mapping[int, Mapping[str, PlaneQuantifiers]],
    groups: Mapping[str, Sequence[str]] | None = None,
    method: str = "spearman",
) -> list[BatteryCell]:
    """Entropy-vs-attribute correlations per (group, D, attribute) cell.

    The implicit "all" group always runs first. Missing attribute values
    are dropped pairwise, so n varies cell by cell; cells with fewer than
    3 complete pairs (or degenerate ranks) are flagged insufficient
    instead of fabricating a coefficient.
    """
    if method not in ("spearman", "kendall"):
        raise ValueError(f"unknown method {method!r}")
    if panel.attributes is None:
        raise ValueError("panel carries no attributes")
    known = set(panel.names)
    group_map: dict[str, list[str]] = {}
    for label, members in (groups or {}).items():
        members = list(members)
        unknown = sorted(set(members) - known)
        if unknown:
            raise ValueError(f"group {label!r} references unknown series: {unknown}")
        group_map[label] = members

    corr = spearman if method == "spearman" else kendall
    cells: list[BatteryCell] = []
    for dim in sorted(quantifiers_by_dim):
        h_by_name = {name: q.h for name, q in quantifiers_by_dim[dim].items()}
        all_members = [name for name in panel.names if name in h_by_name]
        for label, members in [("all", all_members)] + sorted(group_map.items()):
            members = [name for name in members if name in h_by_name]
            for attribute in panel.attribute_columns:
                xs = [h_by_name[name] for name in members]
                ys = [
                    (panel.attributes.get(name) or {}).get(attribute)
                    for name in members
                ]
                xv, yv = _drop_missing_pairs(xs, ys)
                n = xv.size
                if n < 3:
                    cells.append(
                        BatteryCell(label, dim, attribute, None, None, n, "", True)
                    )
                    continue
                try:
                    result = corr(xv, yv, group=label)
                except ValueError:
                    cells.append(
                        BatteryCell(label, dim, attribute, None, None, n, "", True)
                    )
                    continue
                cells.append(
                    BatteryCell(
                        group=label,
                        dimension=dim,
                        attribute=attribute,
                        rho=result.rho,
                        p_value=result.p_value,
                        n=result.n,
                        stars=significance_stars(result.p_value),
                        insufficient=False,
                    )
                )
    return cells
