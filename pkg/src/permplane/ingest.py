"""Loading, validation, and cleaning of time-series panels from CSV.

Two layouts are supported: wide (first column holds date labels, one column
per series) and long (columns series,date,value). Cells that are empty or
spell "NA"/"NaN" in any casing are missing markers and survive loading as
NaN until :func:`clean_series` applies a policy; any other non-numeric cell
is a parse error. Dates are opaque strings; ordering is file order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Literal, Mapping

import numpy as np

Layout = Literal["wide", "long"]
MISSING_TOKENS = frozenset({"", "na", "nan"})


class PanelFormatError(ValueError):
    """A panel, attribute, or groups file violates its declared format."""


@dataclass(frozen=True)
class TimeSeries:
    """A named, ordered sequence of observations with optional date labels.

    NaN entries mark missing observations and are only expected on freshly
    loaded series; :func:`clean_series` removes or rejects them.
    """

    name: str
    values: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.ndim != 1 or v.size < 1:
            raise ValueError(f"series {self.name!r} must hold at least one value")
        if self.labels is not None:
            labels = tuple(self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != v.size:
                raise ValueError(
                    f"series {self.name!r}: {len(labels)} labels for {v.size} values"
                )
        v.setflags(write=False)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def n_missing(self) -> int:
        return int(np.count_nonzero(~np.isfinite(self.values)))

    @property
    def is_clean(self) -> bool:
        return self.n_missing == 0


@dataclass(frozen=True)
class Panel:
    """A collection of uniquely named series, optionally with attributes."""

    series: tuple[TimeSeries, ...]
    attributes: Mapping[str, Mapping[str, float | None]] | None = None
    attribute_columns: tuple[str, ...] = ()
    orphaned_attributes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        names = [s.name for s in self.series]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise PanelFormatError(f"duplicate series names: {sorted(dupes)}")

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.series]

    def get(self, name: str) -> TimeSeries:
        for s in self.series:
            if s.name == name:
                return s
        raise KeyError(name)


def _parse_cell(text: str, where: str) -> float:
    token = text.strip()
    if token.lower() in MISSING_TOKENS:
        return math.nan
    try:
        value = float(token)
    except ValueError:
        raise PanelFormatError(f"{where}: cannot parse {text!r} as a number") from None
    if not math.isfinite(value):
        raise PanelFormatError(f"{where}: non-finite value {text!r}")
    return value


def _read_rows(path: str | Path, delimiter: str) -> list[list[str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh, delimiter=delimiter)]
    except OSError as exc:
        raise PanelFormatError(f"cannot read {path}: {exc}") from exc
    # a fully blank trailing line is a file artifact, not a data row
    while rows and rows[-1] == []:
        rows.pop()
    if not rows:
        raise PanelFormatError(f"{path}: file is empty")
    return rows


def load_panel(
    path: str | Path, *, layout: Layout = "wide", delimiter: str = ","
) -> Panel:
    """Load a CSV panel in wide or long layout.

    Missing markers survive as NaN; run :func:`clean_series` (or
    :func:`clean_panel`) before analysis.
    """
    rows = _read_rows(path, delimiter)
    header, data = rows[0], rows[1:]
    if not data:
        raise PanelFormatError(f"{path}: no data rows")

    if layout == "wide":
        return _panel_from_wide(path, header, data)
    if layout == "long":
        return _panel_from_long(path, header, data)
    raise ValueError(f"unknown layout {layout!r}")


def _panel_from_wide(path, header: list[str], data: list[list[str]]) -> Panel:
    if len(header) < 2:
        raise PanelFormatError(f"{path}: wide layout needs a date column plus series columns")
    names = [h.strip() for h in header[1:]]
    if any(not n for n in names):
        raise PanelFormatError(f"{path}: blank series name in header")
    labels: list[str] = []
    columns: list[list[float]] = [[] for _ in names]
    for i, row in enumerate(data, start=2):
        if len(row) != len(header):
            raise PanelFormatError(
                f"{path}, line {i}: expected {len(header)} cells, found {len(row)}"
            )
        labels.append(row[0].strip())
        for j, cell in enumerate(row[1:]):
            columns[j].append(_parse_cell(cell, f"{path}, line {i}, column {names[j]}"))
    label_tuple = tuple(labels)
    series = tuple(
        TimeSeries(name=n, values=np.array(col, dtype=float), labels=label_tuple)
        for n, col in zip(names, columns)
    )
    return Panel(series=series)


def _panel_from_long(path, header: list[str], data: list[list[str]]) -> Panel:
    expected = ["series", "date", "value"]
    got = [h.strip().lower() for h in header]
    if got != expected:
        raise PanelFormatError(
            f"{path}: long layout header must be series,date,value (got {header})"
        )
    order: list[str] = []
    values: dict[str, list[float]] = {}
    labels: dict[str, list[str]] = {}
    for i, row in enumerate(data, start=2):
        if len(row) != 3:
            raise PanelFormatError(f"{path}, line {i}: expected 3 cells, found {len(row)}")
        name = row[0].strip()
        if not name:
            raise PanelFormatError(f"{path}, line {i}: blank series name")
        if name not in values:
            order.append(name)
            values[name] = []
            labels[name] = []
        labels[name].append(row[1].strip())
        values[name].append(_parse_cell(row[2], f"{path}, line {i}, series {name}"))
    series = tuple(
        TimeSeries(name=n, values=np.array(values[n], dtype=float), labels=tuple(labels[n]))
        for n in order
    )
    return Panel(series=series)


def clean_series(raw: TimeSeries, policy: Literal["drop", "fail"] = "drop") -> TimeSeries:
    """Resolve missing observations by dropping them or failing fast.

    ``drop`` removes each missing value together with its paired label,
    preserving order; ``fail`` raises on the first missing value. The result
    always satisfies the clean-series invariant (finite values only).
    """
    if policy not in ("drop", "fail"):
        raise ValueError(f"unknown policy {policy!r}")
    mask = np.isfinite(raw.values)
    if mask.all():
        return raw
    if policy == "fail":
        first = int(np.argmin(mask))
        raise ValueError(f"series {raw.name!r} has a missing value at index {first}")
    if not mask.any():
        raise ValueError(f"series {raw.name!r} is empty after dropping missing values")
    labels = None
    if raw.labels is not None:
        labels = tuple(lab for lab, keep in zip(raw.labels, mask) if keep)
    return TimeSeries(name=raw.name, values=raw.values[mask], labels=labels)


def clean_panel(panel: Panel, policy: Literal["drop", "fail"] = "drop") -> Panel:
    """Apply :func:`clean_series` to every series of a panel."""
    return replace(panel, series=tuple(clean_series(s, policy) for s in panel.series))


def load_attributes(
    path: str | Path, *, delimiter: str = ","
) -> tuple[tuple[str, ...], dict[str, dict[str, float | None]]]:
    """Load a per-series attribute table (header row, first column = name).

    Missing attribute cells become None and are dropped pairwise by the
    correlation battery.
    """
    rows = _read_rows(path, delimiter)
    header, data = rows[0], rows[1:]
    if len(header) < 2:
        raise PanelFormatError(f"{path}: attribute file needs a name column plus attributes")
    columns = tuple(h.strip() for h in header[1:])
    if any(not c for c in columns):
        raise PanelFormatError(f"{path}: blank attribute name in header")
    table: dict[str, dict[str, float | None]] = {}
    for i, row in enumerate(data, start=2):
        if len(row) != len(header):
            raise PanelFormatError(
                f"{path}, line {i}: expected {len(header)} cells, found {len(row)}"
            )
        name = row[0].strip()
        if not name:
            raise PanelFormatError(f"{path}, line {i}: blank series name")
        if name in table:
            raise PanelFormatError(f"{path}, line {i}: duplicate attribute row for {name!r}")
        entry: dict[str, float | None] = {}
        for col, cell in zip(columns, row[1:]):
            value = _parse_cell(cell, f"{path}, line {i}, attribute {col}")
            entry[col] = None if math.isnan(value) else value
        table[name] = entry
    if not table:
        raise PanelFormatError(f"{path}: no attribute rows")
    return columns, table


def attach_attributes(
    panel: Panel, columns: Iterable[str], table: Mapping[str, Mapping[str, float | None]]
) -> Panel:
    """Join an attribute table onto a panel by series name.

    Rows whose name matches no series are kept aside as orphans rather than
    rejected, so a stale attribute file degrades loudly but gracefully.
    """
    known = set(panel.names)
    attributes = {name: dict(attrs) for name, attrs in table.items() if name in known}
    orphans = tuple(sorted(name for name in table if name not in known))
    return replace(
        panel,
        attributes=attributes,
        attribute_columns=tuple(columns),
        orphaned_attributes=orphans,
    )


def load_groups(path: str | Path, *, delimiter: str = ",") -> dict[str, str]:
    """Load a name,label CSV mapping series to group labels."""
    rows = _read_rows(path, delimiter)
    header, data = rows[0], rows[1:]
    if len(header) != 2:
        raise PanelFormatError(f"{path}: groups file must have exactly name,label columns")
    groups: dict[str, str] = {}
    for i, row in enumerate(data, start=2):
        if len(row) != 2:
            raise PanelFormatError(f"{path}, line {i}: expected 2 cells, found {len(row)}")
        name, label = row[0].strip(), row[1].strip()
        if not name or not label:
            raise PanelFormatError(f"{path}, line {i}: blank name or label")
        if name in groups:
            raise PanelFormatError(f"{path}, line {i}: duplicate group row for {name!r}")
        groups[name] = label
    if not groups:
        raise PanelFormatError(f"{path}: no group rows")
    return groups


def write_panel(
    panel: Panel, path: str | Path, *, layout: Layout = "wide", delimiter: str = ","
) -> None:
    """Emit a panel back to CSV; the inverse of :func:`load_panel`.

    Values render with full round-trip precision, NaN as the "NaN" missing
    marker. Wide layout requires all series to share length and labels.
    """

    def cell(v: float) -> str:
        if math.isnan(v):
            return "NaN"
        if math.isinf(v):
            raise ValueError("cannot serialize infinite values")
        return repr(v)

    def label_of(s: TimeSeries, i: int) -> str:
        return s.labels[i] if s.labels is not None else str(i)

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        if layout == "wide":
            lengths = {len(s) for s in panel.series}
            if len(lengths) != 1:
                raise ValueError("wide layout requires equal-length series")
            first = panel.series[0]
            for s in panel.series[1:]:
                if s.labels != first.labels:
                    raise ValueError("wide layout requires identical labels across series")
            writer.writerow(["date"] + panel.names)
            for i in range(len(first)):
                writer.writerow(
                    [label_of(first, i)] + [cell(float(s.values[i])) for s in panel.series]
                )
        elif layout == "long":
            writer.writerow(["series", "date", "value"])
            for s in panel.series:
                for i in range(len(s)):
                    writer.writerow([s.name, label_of(s, i), cell(float(s.values[i]))])
        else:
            raise ValueError(f"unknown layout {layout!r}")
