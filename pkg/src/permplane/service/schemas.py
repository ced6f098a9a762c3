"""Pydantic request/response models for the analysis service."""

from __future__ import annotations

import math
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from ..ordinal import MAX_DIMENSION

DEFAULT_DIMS = [3, 4, 5]


class SeriesIn(BaseModel):
    """One clean time series. Values must be finite; labels optional."""

    name: str = Field(min_length=1)
    values: list[float] = Field(min_length=1)
    labels: Optional[list[str]] = None

    @field_validator("values")
    @classmethod
    def _finite(cls, v: list[float]) -> list[float]:
        if any(not math.isfinite(x) for x in v):
            raise ValueError("values must be finite; clean the series first")
        return v

    @model_validator(mode="after")
    def _labels_match(self) -> "SeriesIn":
        if self.labels is not None and len(self.labels) != len(self.values):
            raise ValueError("labels and values must have the same length")
        return self


class _SeriesRequest(BaseModel):
    series: list[SeriesIn] = Field(min_length=1)
    dims: list[int] = Field(default_factory=lambda: list(DEFAULT_DIMS))
    tau: int = Field(default=1, ge=1)

    @field_validator("dims")
    @classmethod
    def _dims_valid(cls, v: list[int]) -> list[int]:
        if not v:
            raise ValueError("dims must be non-empty")
        if any(d < 2 or d > MAX_DIMENSION for d in v):
            raise ValueError(f"each dimension must lie in [2, {MAX_DIMENSION}]")
        if len(set(v)) != len(v):
            raise ValueError("dims must be unique")
        return v

    @model_validator(mode="after")
    def _unique_names(self) -> "_SeriesRequest":
        names = [s.name for s in self.series]
        if len(set(names)) != len(names):
            raise ValueError("series names must be unique")
        return self


class AnalyzeRequest(_SeriesRequest):
    metric: Literal["euclidean", "entropy"] = "euclidean"
    groups: Optional[dict[str, str]] = None

    @model_validator(mode="after")
    def _groups_known(self) -> "AnalyzeRequest":
        if self.groups:
            known = {s.name for s in self.series}
            unknown = sorted(set(self.groups) - known)
            if unknown:
                raise ValueError(f"groups reference unknown series: {unknown}")
        return self


class PointOut(BaseModel):
    name: str
    dim: int
    tau: int
    h: float
    c: float
    distance: float
    n_effective: int
    length_warning: bool


class SkipOut(BaseModel):
    name: str
    dim: int
    reason: str


class SummaryOut(BaseModel):
    group: str
    dim: int
    mean_h: float
    std_h: float
    mean_c: float
    std_c: float
    n: int


class AnalyzeResponse(BaseModel):
    version: str
    tau: int
    points: list[PointOut]
    ranking: list[PointOut]
    summaries: list[SummaryOut]
    skipped: list[SkipOut]


class EnvelopeRequest(BaseModel):
    m: Optional[int] = None
    dim: Optional[int] = None
    resolution: int = Field(default=512, ge=100)

    @model_validator(mode="after")
    def _one_of_m_dim(self) -> "EnvelopeRequest":
        if (self.m is None) == (self.dim is None):
            raise ValueError("provide exactly one of m or dim")
        if self.m is not None and self.m < 2:
            raise ValueError("m must be >= 2")
        if self.dim is not None and not 2 <= self.dim <= MAX_DIMENSION:
            raise ValueError(f"dim must lie in [2, {MAX_DIMENSION}]")
        return self


class EnvelopeSampleOut(BaseModel):
    h: float
    c_min: float
    c_max: float


class EnvelopeResponse(BaseModel):
    version: str
    m: int
    resolution: int
    samples: list[EnvelopeSampleOut]


class ShuffleTestRequest(_SeriesRequest):
    n_shuffles: int = Field(default=1, ge=1)
    seed: int


class ShuffleRowOut(BaseModel):
    name: str
    dim: int
    tau: int
    role: Literal["original", "surrogate"]
    shuffle_index: Optional[int] = None
    h: float
    c: float
    n_effective: int
    length_warning: bool


class ShuffleTestResponse(BaseModel):
    version: str
    tau: int
    seed: int
    n_shuffles: int
    rows: list[ShuffleRowOut]
    skipped: list[SkipOut]


class CorrelateRequest(_SeriesRequest):
    attributes: dict[str, dict[str, Optional[float]]]
    attribute_columns: Optional[list[str]] = None
    groups: Optional[dict[str, str]] = None
    method: Literal["spearman", "kendall"] = "spearman"

    @model_validator(mode="after")
    def _check_tables(self) -> "CorrelateRequest":
        known = {s.name for s in self.series}
        if self.groups:
            unknown = sorted(set(self.groups) - known)
            if unknown:
                raise ValueError(f"groups reference unknown series: {unknown}")
        for name, attrs in self.attributes.items():
            for col, value in attrs.items():
                if value is not None and not math.isfinite(value):
                    raise ValueError(f"attribute {col!r} of {name!r} is not finite")
        if self.attribute_columns is not None:
            declared = set(self.attribute_columns)
            seen = {col for attrs in self.attributes.values() for col in attrs}
            undeclared = sorted(seen - declared)
            if undeclared:
                raise ValueError(f"attribute columns not declared: {undeclared}")
        return self


class CorrelationCellOut(BaseModel):
    group: str
    dim: int
    attribute: str
    rho: Optional[float] = None
    p_value: Optional[float] = None
    n: int
    stars: str
    insufficient: bool


class CorrelateResponse(BaseModel):
    version: str
    tau: int
    method: str
    cells: list[CorrelationCellOut]
    orphaned_attributes: list[str]
    skipped: list[SkipOut]


class HealthResponse(BaseModel):
    status: str
    version: str
