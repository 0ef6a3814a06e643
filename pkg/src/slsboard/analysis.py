"""Supervision-aware comparisons between submissions.

A submission dominates another when it performs at least as well on the
task's primary metric while using no more supervision on any dimension,
with at least one of the two comparisons strict. That relation is a
strict partial order; the Pareto frontier is the set of submissions no
other submission dominates. Equal performance with strictly less
supervision counts as dominance, so frugal methods surface on the
frontier rather than being buried by better-resourced ties.

The impact report groups a board by one dimension's level (optionally
pinning the other two) and summarizes each metric per group with
min/max/mean, the mean delta between consecutive occupied levels, and a
strict separation flag: whether every member of the higher level beats
every member of the lower level. Descriptive statistics only; group
sizes on real boards are far too small for significance claims.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Any, Mapping

from .board import InvalidBound, Leaderboard, Submission, _check_bounds, oriented
from .core import DIMENSIONS, Dimension, leq
from .taxonomy import MetricSchema


class SchemaMismatch(ValueError):
    """The two submissions cannot be compared under the given schema."""


class NoData(ValueError):
    """No submission satisfies the impact constraints."""


@dataclass(frozen=True)
class DominanceRelation:
    """Evidence that one submission dominates another."""

    dominator: str
    dominated: str
    metric_delta: float
    sls_delta: tuple[int, int, int]

    def __post_init__(self) -> None:
        if any(d > 0 for d in self.sls_delta):
            raise ValueError("dominator must not use more supervision on any dimension")
        if self.metric_delta < 0:
            raise ValueError("dominator must not perform worse on the primary metric")
        if self.metric_delta == 0 and self.sls_delta == (0, 0, 0):
            raise ValueError("dominance requires at least one strict comparison")

    def to_payload(self) -> dict[str, Any]:
        return {
            "dominator": self.dominator,
            "dominated": self.dominated,
            "metric_delta": self.metric_delta,
            "sls_delta": {
                d.value: delta for d, delta in zip(DIMENSIONS, self.sls_delta)
            },
        }


def _primary_value(s: Submission, schema: MetricSchema) -> float:
    try:
        return s.metric(schema.primary_metric)
    except KeyError:
        raise SchemaMismatch(
            f"submission {s.id!r} has no value for primary metric "
            f"{schema.primary_metric!r}"
        ) from None


def dominance(
    a: Submission, b: Submission, schema: MetricSchema
) -> DominanceRelation | None:
    """The dominance relation from ``a`` to ``b``, or None if absent."""
    if a.task_id != b.task_id:
        raise SchemaMismatch(
            f"submissions {a.id!r} and {b.id!r} belong to different tasks"
        )
    metric = schema.primary
    value_a = oriented(_primary_value(a, schema), metric.higher_is_better)
    value_b = oriented(_primary_value(b, schema), metric.higher_is_better)
    if value_a < value_b or not leq(a.sls, b.sls):
        return None
    strict_metric = value_a > value_b
    strict_sls = a.sls != b.sls
    if not (strict_metric or strict_sls):
        return None
    return DominanceRelation(
        dominator=a.id,
        dominated=b.id,
        metric_delta=value_a - value_b,
        sls_delta=(a.sls.pt - b.sls.pt, a.sls.tl - b.sls.tl, a.sls.td - b.sls.td),
    )


def dominates(a: Submission, b: Submission, schema: MetricSchema) -> bool:
    """True iff ``a`` performs at least as well as ``b`` with no more
    supervision anywhere, and at least one comparison is strict."""
    return dominance(a, b, schema) is not None


def pareto_frontier(board: Leaderboard) -> frozenset[str]:
    """Ids of submissions not dominated by any other on the board."""
    schema = board.schema
    subs = board.submissions
    frontier: set[str] = set()
    for s in subs:
        if not any(o.id != s.id and dominates(o, s, schema) for o in subs):
            frontier.add(s.id)
    return frozenset(frontier)


@dataclass(frozen=True)
class FrontierReport:
    """Frontier membership plus one frontier witness per dominated entry."""

    frontier: tuple[str, ...]
    witnesses: dict[str, DominanceRelation] = field(default_factory=dict)

    def to_payload(self) -> dict[str, Any]:
        return {
            "frontier": list(self.frontier),
            "dominated": [
                {"id": dominated, "witness": relation.to_payload()}
                for dominated, relation in self.witnesses.items()
            ],
        }


def frontier_report(board: Leaderboard) -> FrontierReport:
    """Frontier ids in rank order, with a witnessing frontier dominator
    for every submission off the frontier."""
    from .board import rank as rank_board

    schema = board.schema
    frontier_ids = pareto_frontier(board)
    ranked = [s for _, s in rank_board(board)]
    frontier_sorted = tuple(s.id for s in ranked if s.id in frontier_ids)
    witnesses: dict[str, DominanceRelation] = {}
    for s in ranked:
        if s.id in frontier_ids:
            continue
        # Frontier members are scanned in rank order, so the witness is
        # the best-performing frontier dominator; transitivity of
        # dominance guarantees one exists.
        for candidate in ranked:
            if candidate.id not in frontier_ids:
                continue
            relation = dominance(candidate, s, schema)
            if relation is not None:
                witnesses[s.id] = relation
                break
    return FrontierReport(frontier=frontier_sorted, witnesses=witnesses)


@dataclass(frozen=True)
class MetricStats:
    min: float
    max: float
    mean: float

    def to_payload(self) -> dict[str, float]:
        return {"min": self.min, "max": self.max, "mean": self.mean}


@dataclass(frozen=True)
class ImpactGroup:
    level: int
    submission_ids: tuple[str, ...]
    stats: dict[str, MetricStats]

    @property
    def count(self) -> int:
        return len(self.submission_ids)


@dataclass(frozen=True)
class AdjacentDelta:
    """Mean difference per metric between two consecutive occupied levels."""

    from_level: int
    to_level: int
    mean_delta: dict[str, float]


@dataclass(frozen=True)
class ImpactReport:
    varied: Dimension
    fixed: dict[Dimension, tuple[int, int]]
    groups: tuple[ImpactGroup, ...]
    adjacent_deltas: tuple[AdjacentDelta, ...]
    separation: dict[str, bool]

    def group(self, level: int) -> ImpactGroup:
        for g in self.groups:
            if g.level == level:
                return g
        raise KeyError(level)

    @property
    def population(self) -> int:
        return sum(g.count for g in self.groups)


def impact(
    board: Leaderboard,
    varied: Dimension,
    fixed: Mapping[Dimension, tuple[int, int]] | None = None,
) -> ImpactReport:
    """Group the board by ``varied`` level and summarize every metric.

    ``fixed`` pins the other dimensions to level ranges before grouping.
    Separation per metric is true iff, for every consecutive pair of
    occupied levels, every member of the higher level strictly beats
    every member of the lower level (orientation-adjusted); it is
    vacuously true with fewer than two groups.
    """
    fixed = dict(fixed or {})
    if varied in fixed:
        raise InvalidBound(f"cannot fix the varied dimension {varied.value}")
    for dimension, (lo, hi) in fixed.items():
        _check_bounds(lo, hi, f"{dimension.value}={lo}..{hi}")

    def matches(s: Submission) -> bool:
        return all(lo <= s.sls.level(d) <= hi for d, (lo, hi) in fixed.items())

    selected = [s for s in board.submissions if matches(s)]
    if not selected:
        raise NoData(
            f"no submission matches the fixed constraints "
            f"{{{', '.join(f'{d.value}={lo}..{hi}' for d, (lo, hi) in fixed.items())}}}"
        )

    by_level: dict[int, list[Submission]] = {}
    for s in selected:
        by_level.setdefault(s.sls.level(varied), []).append(s)

    schema = board.schema
    groups: list[ImpactGroup] = []
    for level in sorted(by_level):
        members = by_level[level]
        stats = {
            name: MetricStats(
                min=min(s.metric(name) for s in members),
                max=max(s.metric(name) for s in members),
                mean=statistics.fmean(s.metric(name) for s in members),
            )
            for name in schema.names
        }
        groups.append(
            ImpactGroup(
                level=level,
                submission_ids=tuple(s.id for s in members),
                stats=stats,
            )
        )

    deltas: list[AdjacentDelta] = []
    separation = {name: True for name in schema.names}
    for lower, higher in zip(groups, groups[1:]):
        deltas.append(
            AdjacentDelta(
                from_level=lower.level,
                to_level=higher.level,
                mean_delta={
                    name: higher.stats[name].mean - lower.stats[name].mean
                    for name in schema.names
                },
            )
        )
        for name in schema.names:
            higher_better = schema.metric(name).higher_is_better
            lo_stats, hi_stats = lower.stats[name], higher.stats[name]
            if higher_better:
                separated = hi_stats.min > lo_stats.max
            else:
                separated = hi_stats.max < lo_stats.min
            if not separated:
                separation[name] = False

    return ImpactReport(
        varied=varied,
        fixed=fixed,
        groups=tuple(groups),
        adjacent_deltas=tuple(deltas),
        separation=separation,
    )
