"""Permutation quantifiers for time-series panels on the complexity-entropy plane."""

__version__ = "0.1.0"

from .bounds import ComplexityEnvelope, contains, envelope
from .infomeasures import (
    PlaneQuantifiers,
    jensen_shannon_divergence,
    normalized_entropy,
    plane_point,
    q0,
    shannon_entropy,
    statistical_complexity,
)
from .ingest import Panel, TimeSeries, clean_panel, clean_series, load_panel
from .ordinal import (
    EmbeddingParams,
    OrdinalDistribution,
    extract_pattern,
    ordinal_distribution,
    pattern_rank,
    pattern_unrank,
)
from .ranking import EfficiencyRanking, GroupSummary, efficiency_distance, group_summary, rank_series
from .stats import CorrelationResult, correlation_battery, kendall, spearman
from .surrogate import SurrogateReport, shuffle_series, surrogate_test

__all__ = [
    "__version__",
    "ComplexityEnvelope",
    "CorrelationResult",
    "EfficiencyRanking",
    "EmbeddingParams",
    "GroupSummary",
    "OrdinalDistribution",
    "Panel",
    "PlaneQuantifiers",
    "SurrogateReport",
    "TimeSeries",
    "clean_panel",
    "clean_series",
    "contains",
    "correlation_battery",
    "efficiency_distance",
    "envelope",
    "extract_pattern",
    "group_summary",
    "jensen_shannon_divergence",
    "kendall",
    "load_panel",
    "normalized_entropy",
    "ordinal_distribution",
    "pattern_rank",
    "pattern_unrank",
    "plane_point",
    "q0",
    "rank_series",
    "shannon_entropy",
    "shuffle_series",
    "spearman",
    "statistical_complexity",
    "surrogate_test",
]
