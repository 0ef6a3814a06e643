"""Level descriptions and per-task specialization profiles.

The canonical taxonomy ships as embedded data so every deployment agrees
on what each (dimension, level) pair means: 3 dimensions x 6 levels = 18
descriptors. A task profile re-words some of those pairs for one
benchmark task (and carries the task's metric schema), but it can never
add, remove or reorder levels; profiles are text-only refinements, so
every numeric operation behaves identically with or without one.

Profiles are user-editable JSON documents; see :func:`load_profile` for
the format. One profile ships with the package as a worked example
(``epic_kitchens_ar``, action recognition on egocentric video).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Any, Mapping

from .core import DIMENSIONS, LEVELS, MAX_LEVEL, MIN_LEVEL, Dimension, SLSVector

PERCENT_UNIT = "percent"


class ProfileParseError(ValueError):
    """The profile document is not valid JSON or misses required fields."""


class InvalidOverride(ValueError):
    """An override targets an unknown (dimension, level) pair or repeats one."""


class MissingMetricSchema(ValueError):
    """The profile declares no usable metric schema."""


@dataclass(frozen=True)
class Metric:
    """One column of a task's results table."""

    name: str
    unit: str = PERCENT_UNIT
    higher_is_better: bool = True

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise ValueError("metric name must be non-empty")


@dataclass(frozen=True)
class MetricSchema:
    """Ordered metric list plus the single metric submissions rank by."""

    metrics: tuple[Metric, ...]
    primary_metric: str

    def __post_init__(self) -> None:
        names = [m.name for m in self.metrics]
        if len(set(names)) != len(names):
            raise ValueError("metric names must be unique")
        if self.primary_metric not in names:
            raise ValueError(f"primary metric {self.primary_metric!r} is not declared")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(m.name for m in self.metrics)

    def metric(self, name: str) -> Metric:
        for m in self.metrics:
            if m.name == name:
                return m
        raise KeyError(name)

    @property
    def primary(self) -> Metric:
        return self.metric(self.primary_metric)


@dataclass(frozen=True)
class LevelDescriptor:
    """Human-readable meaning of one (dimension, level) pair."""

    dimension: Dimension
    level: int
    description: str
    examples: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.level not in LEVELS:
            raise InvalidOverride(
                f"{self.dimension.value} level {self.level} is outside "
                f"{MIN_LEVEL}..{MAX_LEVEL}; levels cannot be added"
            )
        if not self.description.strip():
            raise InvalidOverride(
                f"empty description for {self.dimension.value}-{self.level}"
            )


# Canonical descriptions, one per (dimension, level). Shipped as code so the
# taxonomy cannot drift between deployments; only profiles are user files.
_CANONICAL_TEXT: dict[tuple[Dimension, int], str] = {
    (Dimension.PT, 0): (
        "No pre-training was used. Models are randomly initialised, including "
        "features, i.e. features are trained from randomly initialised models."
    ),
    (Dimension.PT, 1): (
        "Standard pre-training on data of limited relevance to the task. For "
        "example, in a task on medical data, ImageNet is used for pre-training."
    ),
    (Dimension.PT, 2): (
        "Relevant pre-training to the task. The data for pre-training is chosen "
        "to best fit the problem, and is believed to have a significant impact "
        "on learning low-level as well as medium-level features."
    ),
    (Dimension.PT, 3): (
        "Self-supervision on large-scale unlabelled public data. Importantly, as "
        "public data is used, the pre-training can be replicated."
    ),
    (Dimension.PT, 4): (
        "Self-supervision using task-specific data. That is, a model has used "
        "training and/or test data on which performance will be trained/evaluated, "
        "with/without other large-scale public data, thus offering stronger "
        "pre-training supervision."
    ),
    (Dimension.PT, 5): (
        "In addition to any or all of the above, pre-training on private data. "
        "This level of pre-training supervision is restricted to approaches that "
        "pre-train on data not accessible to other researchers and thus cannot be "
        "replicated. Even when these models are made available, other researchers "
        "are unable to replicate or improve this pre-training, thus it should be "
        "considered as an advantage."
    ),
    (Dimension.TL, 0): (
        "No labelled supervision was used. Training data was used in an "
        "unsupervised or self-supervised manner without employing any labels."
    ),
    (Dimension.TL, 1): (
        "Weak supervision - L1. Weak labels are provided for multiple instances. "
        "One-to-one mapping between labels and instances is not available."
    ),
    (Dimension.TL, 2): (
        "Weak supervision - L2. Weak labels (noisy or incomplete) are associated "
        "with each instance."
    ),
    (Dimension.TL, 3): "Strong supervision - an instance-level label is given.",
    (Dimension.TL, 4): (
        "Strong supervision - in addition to instance-level labels, additional "
        "labels are provided (e.g. segmentation in images or spatio-temporal "
        "bounding boxes in video)."
    ),
    (Dimension.TL, 5): (
        "Strong supervision with additional labels, not available with the "
        "dataset by default."
    ),
    (Dimension.TD, 0): (
        "Zero-shot learning - the training set has no label class/category "
        "overlap with the test set."
    ),
    (Dimension.TD, 1): (
        "Few-shot learning - (up to) 5-shot training data is used (per label "
        "class/category)."
    ),
    (Dimension.TD, 2): (
        "Efficient learning - a randomly selected fraction (commonly 25%) of the "
        "data was used. The remainder of the training data were not used and the "
        "choice of sample is not optimised."
    ),
    (Dimension.TD, 3): "Train set - training set used in full.",
    (Dimension.TD, 4): (
        "Train+Val sets - after optimising any hyperparameters on the validation "
        "set, the combination of training and validation sets are used in "
        "training the model. Note that an official Train/Val split is assumed."
    ),
    (Dimension.TD, 5): (
        "Train+Val++ sets - additional data is used during training. Note that "
        "this is different from pre-training: the extra data could be used with "
        "or without labels, but is utilised during training the model itself."
    ),
}


def canonical_taxonomy() -> list[LevelDescriptor]:
    """All 18 canonical descriptors, dimension-major, levels ascending."""
    return [
        LevelDescriptor(dimension, level, _CANONICAL_TEXT[(dimension, level)])
        for dimension in DIMENSIONS
        for level in LEVELS
    ]


def canonical_description(dimension: Dimension, level: int) -> str:
    if (dimension, level) not in _CANONICAL_TEXT:
        raise KeyError(f"no canonical descriptor for {dimension.value}-{level}")
    return _CANONICAL_TEXT[(dimension, level)]


@dataclass(frozen=True)
class TaskProfile:
    """Per-task re-description of the taxonomy plus the task's metrics.

    Overrides replace descriptor text for specific (dimension, level)
    pairs; levels they do not mention keep the canonical meaning.
    """

    task_id: str
    task_name: str
    metric_schema: MetricSchema
    overrides: tuple[LevelDescriptor, ...] = ()
    notes: str | None = None

    def __post_init__(self) -> None:
        if not self.task_id.strip():
            raise ValueError("task_id must be non-empty")
        seen: set[tuple[Dimension, int]] = set()
        for d in self.overrides:
            key = (d.dimension, d.level)
            if key in seen:
                raise InvalidOverride(
                    f"duplicate override for {d.dimension.value}-{d.level}"
                )
            seen.add(key)

    def override_for(self, dimension: Dimension, level: int) -> LevelDescriptor | None:
        for d in self.overrides:
            if d.dimension is dimension and d.level == level:
                return d
        return None

    def description(self, dimension: Dimension, level: int) -> str:
        override = self.override_for(dimension, level)
        if override is not None:
            return override.description
        return canonical_description(dimension, level)


def describe(v: SLSVector, profile: TaskProfile | None = None) -> dict[Dimension, str]:
    """Level description per dimension, specialized by ``profile`` if given.

    Total over every valid vector: falls back to the canonical text
    wherever the profile has no override.
    """
    texts: dict[Dimension, str] = {}
    for dimension in DIMENSIONS:
        level = v.level(dimension)
        if profile is not None:
            texts[dimension] = profile.description(dimension, level)
        else:
            texts[dimension] = canonical_description(dimension, level)
    return texts


def _require(doc: Mapping[str, Any], key: str, kind: type, context: str) -> Any:
    if key not in doc:
        raise ProfileParseError(f"{context}: missing required field {key!r}")
    value = doc[key]
    if kind is float and isinstance(value, int):
        value = float(value)
    if not isinstance(value, kind):
        raise ProfileParseError(
            f"{context}: field {key!r} must be {kind.__name__}, got {type(value).__name__}"
        )
    return value


def parse_metric_schema(entries: Any, context: str = "profile") -> MetricSchema:
    """Build a schema from the profile's ``metrics`` array."""
    if not isinstance(entries, list) or not entries:
        raise MissingMetricSchema(f"{context}: 'metrics' must be a non-empty array")
    metrics: list[Metric] = []
    primary: list[str] = []
    for i, entry in enumerate(entries):
        where = f"{context}: metrics[{i}]"
        if not isinstance(entry, dict):
            raise ProfileParseError(f"{where} must be an object")
        name = _require(entry, "name", str, where)
        unit = entry.get("unit", PERCENT_UNIT)
        if not isinstance(unit, str):
            raise ProfileParseError(f"{where}: 'unit' must be a string")
        higher = entry.get("higher_is_better", True)
        if not isinstance(higher, bool):
            raise ProfileParseError(f"{where}: 'higher_is_better' must be a boolean")
        if entry.get("primary", False):
            primary.append(name)
        try:
            metrics.append(Metric(name=name, unit=unit, higher_is_better=higher))
        except ValueError as exc:
            raise ProfileParseError(f"{where}: {exc}") from exc
    if len(primary) != 1:
        raise MissingMetricSchema(
            f"{context}: exactly one metric must be marked primary, found {len(primary)}"
        )
    try:
        return MetricSchema(metrics=tuple(metrics), primary_metric=primary[0])
    except ValueError as exc:
        raise ProfileParseError(f"{context}: {exc}") from exc


def _parse_override(entry: Any, index: int) -> LevelDescriptor:
    where = f"overrides[{index}]"
    if not isinstance(entry, dict):
        raise ProfileParseError(f"{where} must be an object")
    dim_name = _require(entry, "dimension", str, where)
    try:
        dimension = Dimension(dim_name)
    except ValueError:
        raise InvalidOverride(
            f"{where}: unknown dimension {dim_name!r} (expected PT, TL or TD)"
        ) from None
    level = entry.get("level")
    if not isinstance(level, int) or isinstance(level, bool):
        raise InvalidOverride(f"{where}: 'level' must be an integer")
    description = _require(entry, "description", str, where)
    examples = entry.get("examples", [])
    if not isinstance(examples, list) or not all(isinstance(e, str) for e in examples):
        raise ProfileParseError(f"{where}: 'examples' must be an array of strings")
    return LevelDescriptor(
        dimension=dimension,
        level=level,
        description=description,
        examples=tuple(examples),
    )


def load_profile(document: str | bytes | Mapping[str, Any]) -> TaskProfile:
    """Parse a task profile from JSON text (or an already-decoded mapping).

    Expected top-level fields: ``task_id``, ``task_name``, ``metrics``
    (array of ``{name, unit, higher_is_better, primary}`` with exactly one
    primary), ``overrides`` (array of ``{dimension, level, description,
    examples?}``) and optional ``notes``.
    """
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ProfileParseError(f"profile is not valid JSON: {exc}") from exc
    else:
        doc = dict(document)
    if not isinstance(doc, dict):
        raise ProfileParseError("profile document must be a JSON object")

    task_id = _require(doc, "task_id", str, "profile")
    task_name = _require(doc, "task_name", str, "profile")
    if "metrics" not in doc:
        raise MissingMetricSchema("profile: missing 'metrics'")
    schema = parse_metric_schema(doc["metrics"])

    raw_overrides = doc.get("overrides", [])
    if not isinstance(raw_overrides, list):
        raise ProfileParseError("profile: 'overrides' must be an array")
    overrides = tuple(_parse_override(entry, i) for i, entry in enumerate(raw_overrides))

    notes = doc.get("notes")
    if notes is not None and not isinstance(notes, str):
        raise ProfileParseError("profile: 'notes' must be a string")

    try:
        return TaskProfile(
            task_id=task_id,
            task_name=task_name,
            metric_schema=schema,
            overrides=overrides,
            notes=notes,
        )
    except InvalidOverride:
        raise
    except ValueError as exc:
        raise ProfileParseError(f"profile: {exc}") from exc


def profile_to_document(profile: TaskProfile) -> dict[str, Any]:
    """Inverse of :func:`load_profile`, for registration payloads."""
    doc: dict[str, Any] = {
        "task_id": profile.task_id,
        "task_name": profile.task_name,
        "metrics": [
            {
                "name": m.name,
                "unit": m.unit,
                "higher_is_better": m.higher_is_better,
                "primary": m.name == profile.metric_schema.primary_metric,
            }
            for m in profile.metric_schema.metrics
        ],
        "overrides": [
            {
                "dimension": d.dimension.value,
                "level": d.level,
                "description": d.description,
                **({"examples": list(d.examples)} if d.examples else {}),
            }
            for d in profile.overrides
        ],
    }
    if profile.notes is not None:
        doc["notes"] = profile.notes
    return doc


def bundled_profile_ids() -> list[str]:
    files = resources.files("slsboard.data")
    return sorted(
        p.name.removesuffix(".json")
        for p in files.iterdir()
        if p.name.endswith(".json")
    )


def bundled_profile(task_id: str = "epic_kitchens_ar") -> TaskProfile:
    """Load a profile shipped with the package."""
    try:
        text = resources.files("slsboard.data").joinpath(f"{task_id}.json").read_text("utf-8")
    except FileNotFoundError:
        raise KeyError(
            f"no bundled profile {task_id!r}; available: {bundled_profile_ids()}"
        ) from None
    return load_profile(text)
