"""Supervision-aware leaderboard platform.

Attaches a three-dimensional supervision declaration (pre-training,
training labels, training data; six levels each) to every benchmark
submission, then ranks, filters and compares methods by performance and
supervision together.
"""

from .analysis import (
    DominanceRelation,
    FrontierReport,
    ImpactReport,
    NoData,
    SchemaMismatch,
    dominance,
    dominates,
    frontier_report,
    impact,
    pareto_frontier,
)
from .board import (
    DuplicateId,
    IngestReport,
    InvalidBound,
    Leaderboard,
    StageMismatch,
    Submission,
    UnreadableDocument,
    ValidationIssue,
    bundled_fixture_csv,
    filter_board,
    ingest,
    metric_slug,
    rank,
    submissions_to_json,
    validate_submission_payload,
)
from .core import (
    DIMENSIONS,
    LEVELS,
    MAX_LEVEL,
    MIN_LEVEL,
    Dimension,
    EmptyStageList,
    LevelOutOfRange,
    MalformedTag,
    SLSVector,
    StageDeclaration,
    TagError,
    all_vectors,
    compose_stages,
    format_tag,
    leq,
    parse_tag,
)
from .store import Store, StorageFailure, StoreCorrupt, UnknownTask, ValidationFailed
from .taxonomy import (
    InvalidOverride,
    LevelDescriptor,
    Metric,
    MetricSchema,
    MissingMetricSchema,
    ProfileParseError,
    TaskProfile,
    bundled_profile,
    bundled_profile_ids,
    canonical_taxonomy,
    describe,
    load_profile,
)

__version__ = "0.1.0"

__all__ = [
    "DIMENSIONS",
    "Dimension",
    "DominanceRelation",
    "DuplicateId",
    "EmptyStageList",
    "FrontierReport",
    "ImpactReport",
    "IngestReport",
    "InvalidBound",
    "InvalidOverride",
    "LEVELS",
    "Leaderboard",
    "LevelDescriptor",
    "LevelOutOfRange",
    "MAX_LEVEL",
    "MIN_LEVEL",
    "MalformedTag",
    "Metric",
    "MetricSchema",
    "MissingMetricSchema",
    "NoData",
    "ProfileParseError",
    "SLSVector",
    "SchemaMismatch",
    "StageDeclaration",
    "StageMismatch",
    "StorageFailure",
    "Store",
    "StoreCorrupt",
    "Submission",
    "TagError",
    "TaskProfile",
    "UnknownTask",
    "UnreadableDocument",
    "ValidationFailed",
    "ValidationIssue",
    "all_vectors",
    "bundled_fixture_csv",
    "bundled_profile",
    "bundled_profile_ids",
    "canonical_taxonomy",
    "compose_stages",
    "describe",
    "dominance",
    "dominates",
    "filter_board",
    "format_tag",
    "frontier_report",
    "impact",
    "ingest",
    "leq",
    "load_profile",
    "metric_slug",
    "pareto_frontier",
    "parse_tag",
    "rank",
    "submissions_to_json",
    "validate_submission_payload",
]
