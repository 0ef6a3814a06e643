"""Leaderboard submissions: ingestion, validation, ranking, filtering.

Submissions arrive as CSV or JSON documents and are validated row by
row against the task's metric schema and the supervision-tag rules.
Validation collects every problem it finds instead of stopping at the
first, so one bad row never hides another.

Ranking is dense: submissions tied on the primary metric (compared
exactly at their stored decimal values, no epsilon) share a rank and the
next distinct value takes the next integer. Boards are immutable
snapshots; every operation here is pure.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import math
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Any, Iterable, Mapping, Sequence

from .core import (
    DIMENSIONS,
    MAX_LEVEL,
    MIN_LEVEL,
    Dimension,
    LevelOutOfRange,
    MalformedTag,
    SLSVector,
    StageDeclaration,
    compose_stages,
    format_tag,
    parse_tag,
)
from .taxonomy import PERCENT_UNIT, MetricSchema, TaskProfile


class UnreadableDocument(ValueError):
    """The submissions document is structurally unusable (not row-level)."""


class InvalidBound(ValueError):
    """A filter bound is out of range, inverted, or names an unknown metric."""


class StageMismatch(ValueError):
    """Declared vector differs from the composition of the declared stages."""


class DuplicateId(ValueError):
    """Two submissions share an id within one board."""


@dataclass(frozen=True)
class ValidationIssue:
    """One problem (or caveat) found while validating a submission."""

    code: str
    message: str
    field: str | None = None
    row: int | None = None
    submission_id: str | None = None

    def to_payload(self) -> dict[str, Any]:
        return {
            "code": self.code,
            "message": self.message,
            "field": self.field,
            "row": self.row,
            "submission_id": self.submission_id,
        }


@dataclass(frozen=True)
class Submission:
    """One leaderboard entry with its self-declared supervision vector."""

    id: str
    team: str
    task_id: str
    date: dt.date
    entries: int
    sls: SLSVector
    metrics: Mapping[str, float]
    stages: tuple[StageDeclaration, ...] | None = None
    report_url: str | None = None
    caveats: str | None = None
    anonymous: bool = False
    semi_supervised: bool = False
    cohort: str | None = None

    def __post_init__(self) -> None:
        if not self.id.strip():
            raise ValueError("submission id must be non-empty")
        if self.entries < 0:
            raise ValueError("entries must be non-negative")
        if self.stages is not None:
            names = [s.name for s in self.stages]
            if len(set(names)) != len(names):
                raise ValueError("stage names must be unique within a submission")
            composed = compose_stages(self.stages)
            if composed != self.sls:
                raise StageMismatch(
                    f"declared {format_tag(self.sls)} but stages compose to "
                    f"{format_tag(composed)}"
                )

    def metric(self, name: str) -> float:
        return self.metrics[name]

    @property
    def display_team(self) -> str:
        return ANONYMOUS_TEAM if self.anonymous else self.team


ANONYMOUS_TEAM = "(anonymous)"


@dataclass(frozen=True)
class Leaderboard:
    """All submissions for one task, in ingestion order."""

    task: TaskProfile
    submissions: tuple[Submission, ...] = ()

    def __post_init__(self) -> None:
        ids: set[str] = set()
        for s in self.submissions:
            if s.task_id != self.task.task_id:
                raise ValueError(
                    f"submission {s.id!r} belongs to task {s.task_id!r}, "
                    f"not {self.task.task_id!r}"
                )
            if s.id in ids:
                raise DuplicateId(f"duplicate submission id {s.id!r}")
            ids.add(s.id)

    @property
    def schema(self) -> MetricSchema:
        return self.task.metric_schema

    def submission(self, submission_id: str) -> Submission:
        for s in self.submissions:
            if s.id == submission_id:
                return s
        raise KeyError(submission_id)

    def with_submissions(self, submissions: Iterable[Submission]) -> "Leaderboard":
        return replace(self, submissions=tuple(submissions))


@dataclass
class IngestReport:
    """Outcome of ingesting one document: per-row acceptance and rejection."""

    submissions: tuple[Submission, ...] = ()
    errors: list[ValidationIssue] = field(default_factory=list)
    warnings: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    @property
    def rejected_rows(self) -> list[int]:
        return sorted({e.row for e in self.errors if e.row is not None})


def metric_slug(name: str) -> str:
    """Lower-snake-case form of a metric name, used for CSV columns."""
    slug = re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_")
    if not slug:
        raise ValueError(f"metric name {name!r} has no usable characters")
    return slug


_RESERVED_COLUMNS = (
    "id",
    "team",
    "date",
    "entries",
    "sls",
    "cohort",
    "report_url",
    "caveats",
    "anonymous",
    "semi_supervised",
)
_REQUIRED_COLUMNS = ("id", "team", "date", "entries", "sls")

_DATE_FORMATS = ("%m/%d/%y", "%m/%d/%Y")


def parse_date(text: str) -> dt.date:
    """Accept ISO-8601 or MM/DD/YY(YY); the stored form is always ISO."""
    value = text.strip()
    try:
        return dt.date.fromisoformat(value)
    except ValueError:
        pass
    for fmt in _DATE_FORMATS:
        try:
            return dt.datetime.strptime(value, fmt).date()
        except ValueError:
            continue
    raise ValueError(f"unrecognised date {text!r} (expected ISO-8601 or MM/DD/YY)")


def _parse_bool(value: Any, default: bool = False) -> bool:
    if value is None:
        return default
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("", "none"):
        return default
    if text in ("true", "1", "yes"):
        return True
    if text in ("false", "0", "no"):
        return False
    raise ValueError(f"expected a boolean, got {value!r}")


def validate_submission_payload(
    data: Mapping[str, Any],
    schema: MetricSchema,
    task_id: str,
    existing_ids: Iterable[str] = (),
) -> tuple[Submission | None, list[ValidationIssue], list[ValidationIssue]]:
    """Validate one submission object against the schema and tag rules.

    Returns ``(submission, errors, warnings)``; ``submission`` is None
    whenever ``errors`` is non-empty. All problems are collected, not
    just the first.
    """
    errors: list[ValidationIssue] = []
    warnings: list[ValidationIssue] = []

    def err(code: str, message: str, field_name: str | None = None) -> None:
        errors.append(ValidationIssue(code=code, message=message, field=field_name))

    known_fields = set(_RESERVED_COLUMNS) | {"metrics", "stages", "task_id"}
    for key in data:
        if key not in known_fields:
            err("UnknownField", f"unknown field {key!r}", key)

    raw_id = data.get("id")
    sub_id = str(raw_id).strip() if raw_id is not None else ""
    if not sub_id:
        err("MissingField", "submission id is required", "id")
    elif sub_id in set(existing_ids):
        err("DuplicateId", f"submission id {sub_id!r} already exists", "id")

    team = str(data.get("team") or "").strip()
    if not team:
        err("MissingField", "team is required", "team")

    date: dt.date | None = None
    raw_date = data.get("date")
    if raw_date is None or str(raw_date).strip() == "":
        err("MissingField", "date is required", "date")
    else:
        try:
            date = parse_date(str(raw_date))
        except ValueError as exc:
            err("InvalidDate", str(exc), "date")

    entries = 0
    raw_entries = data.get("entries", 0)
    try:
        entries = int(str(raw_entries).strip() or 0)
        if entries < 0:
            raise ValueError
    except (TypeError, ValueError):
        err("InvalidEntries", f"entries must be a non-negative integer, got {raw_entries!r}", "entries")
        entries = 0

    sls: SLSVector | None = None
    raw_tag = data.get("sls")
    if raw_tag is None or str(raw_tag).strip() == "":
        err("MissingField", "sls tag is required", "sls")
    else:
        try:
            sls = parse_tag(str(raw_tag))
        except LevelOutOfRange as exc:
            err("LevelOutOfRange", str(exc), "sls")
        except MalformedTag as exc:
            err("MalformedTag", str(exc), "sls")

    metrics: dict[str, float] = {}
    raw_metrics = data.get("metrics")
    if not isinstance(raw_metrics, Mapping):
        err("MissingMetric", "metrics object is required", "metrics")
        raw_metrics = {}
    # Metric keys may be schema names or their lower-snake-case slugs.
    slug_to_name = {metric_slug(name): name for name in schema.names}
    normalized: dict[str, Any] = {}
    for key, raw_value in raw_metrics.items():
        name = key if key in schema.names else slug_to_name.get(str(key))
        if name is None:
            err("UnknownMetric", f"metric {key!r} is not in the task schema", str(key))
            continue
        normalized[name] = raw_value
    raw_metrics = normalized
    for name in schema.names:
        if name not in raw_metrics or raw_metrics[name] in (None, ""):
            err("MissingMetric", f"metric {name!r} is required", name)
    for name, raw_value in raw_metrics.items():
        if raw_value in (None, ""):
            continue
        try:
            value = float(raw_value)
            if not math.isfinite(value):
                raise ValueError
        except (TypeError, ValueError):
            err("InvalidMetricValue", f"metric {name!r} value {raw_value!r} is not a number", name)
            continue
        unit = schema.metric(name).unit
        if unit == PERCENT_UNIT and not (0.0 <= value <= 100.0):
            err(
                "MetricOutOfRange",
                f"metric {name!r} value {value} outside [0, 100] for percent unit",
                name,
            )
            continue
        metrics[name] = value

    stages: tuple[StageDeclaration, ...] | None = None
    raw_stages = data.get("stages")
    if raw_stages is not None:
        if not isinstance(raw_stages, Sequence) or isinstance(raw_stages, (str, bytes)):
            err("InvalidStages", "stages must be an array of {name, sls} objects", "stages")
        else:
            parsed: list[StageDeclaration] = []
            names_seen: set[str] = set()
            for i, entry in enumerate(raw_stages):
                where = f"stages[{i}]"
                if not isinstance(entry, Mapping):
                    err("InvalidStages", f"{where} must be an object", where)
                    continue
                name = str(entry.get("name") or "").strip()
                if not name:
                    err("InvalidStages", f"{where}: stage name is required", where)
                    continue
                if name in names_seen:
                    err("DuplicateStage", f"duplicate stage name {name!r}", where)
                    continue
                names_seen.add(name)
                try:
                    stage_sls = parse_tag(str(entry.get("sls") or ""))
                except LevelOutOfRange as exc:
                    err("LevelOutOfRange", f"{where}: {exc}", where)
                    continue
                except MalformedTag as exc:
                    err("MalformedTag", f"{where}: {exc}", where)
                    continue
                parsed.append(StageDeclaration(name=name, sls=stage_sls))
            if parsed and len(parsed) == len(raw_stages):
                stages = tuple(parsed)
                if sls is not None:
                    composed = compose_stages(stages)
                    if composed != sls:
                        err(
                            "StageMismatch",
                            f"declared {format_tag(sls)} but stages compose to "
                            f"{format_tag(composed)}",
                            "stages",
                        )

    caveats_raw = data.get("caveats")
    caveats = str(caveats_raw).strip() if caveats_raw not in (None, "") else None
    report_url_raw = data.get("report_url")
    report_url = str(report_url_raw).strip() if report_url_raw not in (None, "") else None
    cohort_raw = data.get("cohort")
    cohort = str(cohort_raw).strip() if cohort_raw not in (None, "") else None

    try:
        anonymous = _parse_bool(data.get("anonymous"))
    except ValueError as exc:
        err("InvalidField", str(exc), "anonymous")
        anonymous = False
    try:
        semi_supervised = _parse_bool(data.get("semi_supervised"))
    except ValueError as exc:
        err("InvalidField", str(exc), "semi_supervised")
        semi_supervised = False

    # Semi-supervised training mixes label regimes the three level scales
    # cannot encode; such declarations are only accepted with an explicit
    # caveat, and never silently.
    if semi_supervised:
        if caveats is None:
            err(
                "CaveatRequired",
                "semi-supervised methods are not representable on the level "
                "scales; a non-empty 'caveats' note is required",
                "caveats",
            )
        else:
            warnings.append(
                ValidationIssue(
                    code="SemiSupervisedCaveat",
                    message="semi-supervised declaration accepted with caveat; "
                    "the supervision vector may understate label usage",
                    field="caveats",
                )
            )

    if errors:
        return None, errors, warnings

    assert sls is not None and date is not None
    submission = Submission(
        id=sub_id,
        team=team,
        task_id=task_id,
        date=date,
        entries=entries,
        sls=sls,
        metrics=metrics,
        stages=stages,
        report_url=report_url,
        caveats=caveats,
        anonymous=anonymous,
        semi_supervised=semi_supervised,
        cohort=cohort,
    )
    return submission, [], warnings


def _csv_rows_to_payloads(
    text: str, schema: MetricSchema
) -> Iterable[tuple[int, dict[str, Any]]]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        return
    header = [h.strip() for h in reader.fieldnames]
    slug_to_name = {metric_slug(name): name for name in schema.names}
    known = set(_RESERVED_COLUMNS) | set(slug_to_name)
    unknown = [h for h in header if h not in known]
    if unknown:
        raise UnreadableDocument(f"unknown CSV columns: {', '.join(sorted(unknown))}")
    missing = [c for c in _REQUIRED_COLUMNS if c not in header]
    missing += [slug for slug in slug_to_name if slug not in header]
    if missing:
        raise UnreadableDocument(f"missing CSV columns: {', '.join(sorted(missing))}")
    for row_number, row in enumerate(reader, start=1):
        payload: dict[str, Any] = {}
        metrics: dict[str, Any] = {}
        for column, value in row.items():
            if column is None:
                raise UnreadableDocument(f"row {row_number} has more cells than the header")
            column = column.strip()
            value = value.strip() if isinstance(value, str) else value
            if column in slug_to_name:
                metrics[slug_to_name[column]] = value
            elif value not in (None, ""):
                payload[column] = value
        payload["metrics"] = metrics
        yield row_number, payload


def _json_rows_to_payloads(text: str) -> Iterable[tuple[int, dict[str, Any]]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UnreadableDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise UnreadableDocument("JSON submissions document must be a top-level array")
    for row_number, entry in enumerate(doc, start=1):
        if not isinstance(entry, dict):
            raise UnreadableDocument(f"row {row_number} is not an object")
        yield row_number, entry


def ingest(
    document: str | bytes,
    schema: MetricSchema,
    task_id: str = "task",
    existing_ids: Iterable[str] = (),
) -> IngestReport:
    """Parse and validate a CSV or JSON submissions document.

    Row-level problems are collected into the report; only structural
    failures (undecodable text, unusable header) raise
    :class:`UnreadableDocument`. An empty document yields an empty,
    error-free report.
    """
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise UnreadableDocument(f"not UTF-8 text: {exc}") from exc
    stripped = document.strip()
    if not stripped:
        return IngestReport()
    if stripped.startswith(("[", "{")):
        rows = _json_rows_to_payloads(document)
    else:
        rows = _csv_rows_to_payloads(document, schema)

    seen_ids: set[str] = set(existing_ids)
    submissions: list[Submission] = []
    errors: list[ValidationIssue] = []
    warnings: list[ValidationIssue] = []
    for row_number, payload in rows:
        payload.pop("task_id", None)
        raw_id = str(payload.get("id") or "").strip() or None
        submission, row_errors, row_warnings = validate_submission_payload(
            payload, schema, task_id, existing_ids=seen_ids
        )
        errors.extend(
            replace(issue, row=row_number, submission_id=raw_id) for issue in row_errors
        )
        warnings.extend(
            replace(issue, row=row_number, submission_id=raw_id) for issue in row_warnings
        )
        if submission is not None:
            submissions.append(submission)
            seen_ids.add(submission.id)
    return IngestReport(
        submissions=tuple(submissions), errors=errors, warnings=warnings
    )


def oriented(value: float, higher_is_better: bool) -> float:
    """Map a raw metric value so that larger always means better."""
    return value if higher_is_better else -value


def rank(board: Leaderboard) -> list[tuple[int, Submission]]:
    """Dense ranking by the task's primary metric.

    Tied values (exact comparison on the stored decimals) share a rank;
    the next distinct value gets the next integer. Within a tie, display
    order is earlier date first, then team name, then id.
    """
    metric = board.schema.primary
    ordered = sorted(
        board.submissions,
        key=lambda s: (
            -oriented(s.metric(metric.name), metric.higher_is_better),
            s.date,
            s.team,
            s.id,
        ),
    )
    result: list[tuple[int, Submission]] = []
    current_rank = 0
    previous_value: float | None = None
    for s in ordered:
        value = s.metric(metric.name)
        if previous_value is None or value != previous_value:
            current_rank += 1
            previous_value = value
        result.append((current_rank, s))
    return result


LevelBounds = Mapping[Dimension, tuple[int | None, int | None]]
MetricBounds = Mapping[str, tuple[float | None, float | None]]


def parse_level_range(text: str) -> tuple[int, int]:
    """Parse a level constraint: ``"2"``, ``"1..3"``, ``"..3"`` or ``"2.."``."""
    value = text.strip()
    if ".." in value:
        lo_text, hi_text = value.split("..", 1)
        try:
            lo = int(lo_text) if lo_text else MIN_LEVEL
            hi = int(hi_text) if hi_text else MAX_LEVEL
        except ValueError:
            raise InvalidBound(f"bad level range {text!r}") from None
    else:
        try:
            lo = hi = int(value)
        except ValueError:
            raise InvalidBound(f"bad level range {text!r}") from None
    _check_bounds(lo, hi, text)
    return lo, hi


def _check_bounds(lo: int, hi: int, source: Any) -> None:
    if not (MIN_LEVEL <= lo <= MAX_LEVEL and MIN_LEVEL <= hi <= MAX_LEVEL):
        raise InvalidBound(f"bound {source!r} outside {MIN_LEVEL}..{MAX_LEVEL}")
    if lo > hi:
        raise InvalidBound(f"bound {source!r} has min > max")


def filter_board(
    board: Leaderboard,
    sls_bounds: LevelBounds | None = None,
    metric_bounds: MetricBounds | None = None,
) -> Leaderboard:
    """Keep submissions whose levels and metrics fall inside every bound.

    Original submission order is preserved; an empty constraint set is
    the identity.
    """
    sls_bounds = dict(sls_bounds or {})
    metric_bounds = dict(metric_bounds or {})
    for dimension, (lo, hi) in sls_bounds.items():
        lo = MIN_LEVEL if lo is None else lo
        hi = MAX_LEVEL if hi is None else hi
        _check_bounds(lo, hi, f"{dimension.value}={lo}..{hi}")
        sls_bounds[dimension] = (lo, hi)
    for name, (mlo, mhi) in metric_bounds.items():
        if name not in board.schema.names:
            raise InvalidBound(f"unknown metric {name!r} in bound")
        if mlo is not None and mhi is not None and mlo > mhi:
            raise InvalidBound(f"metric bound {name}={mlo}..{mhi} has min > max")

    def keep(s: Submission) -> bool:
        for dimension, (lo, hi) in sls_bounds.items():
            if not (lo <= s.sls.level(dimension) <= hi):
                return False
        for name, (mlo, mhi) in metric_bounds.items():
            value = s.metric(name)
            if mlo is not None and value < mlo:
                return False
            if mhi is not None and value > mhi:
                return False
        return True

    return board.with_submissions(s for s in board.submissions if keep(s))


def submission_to_payload(s: Submission) -> dict[str, Any]:
    """JSON-ready object mirroring the submission; ingest reads it back."""
    payload: dict[str, Any] = {
        "id": s.id,
        "team": s.team,
        "date": s.date.isoformat(),
        "entries": s.entries,
        "sls": format_tag(s.sls),
        "metrics": {metric_slug(name): value for name, value in s.metrics.items()},
    }
    if s.stages is not None:
        payload["stages"] = [
            {"name": stage.name, "sls": format_tag(stage.sls)} for stage in s.stages
        ]
    if s.report_url is not None:
        payload["report_url"] = s.report_url
    if s.caveats is not None:
        payload["caveats"] = s.caveats
    if s.anonymous:
        payload["anonymous"] = True
    if s.semi_supervised:
        payload["semi_supervised"] = True
    if s.cohort is not None:
        payload["cohort"] = s.cohort
    return payload


def submissions_to_json(submissions: Iterable[Submission], indent: int | None = 2) -> str:
    """Serialize submissions in the JSON ingestion format (lossless)."""
    return json.dumps(
        [submission_to_payload(s) for s in submissions],
        indent=indent,
        ensure_ascii=False,
    )


def bundled_fixture_csv(name: str = "epic55_ar_2019_2020") -> str:
    """CSV text of a results fixture shipped with the package."""
    return resources.files("slsboard.data").joinpath(f"{name}.csv").read_text("utf-8")
