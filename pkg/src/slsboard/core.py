"""Supervision level value algebra.

A method's supervision is encoded as three independent discrete levels:
pre-training (PT), training labels (TL) and training data (TD), each an
integer from 0 (least supervision) to 5 (most). The triple is written as
a tag of the form ``SLS-PT-TL-TD``, e.g. ``SLS-0-3-3``.

Vectors carry no scalar total order: two vectors compare only
componentwise, so most pairs are incomparable. Multi-stage methods
declare one vector per stage and the method-level vector is the
componentwise maximum over stages.

Everything in this module is an immutable value; all operations are pure
functions and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

MIN_LEVEL = 0
MAX_LEVEL = 5
LEVELS = tuple(range(MIN_LEVEL, MAX_LEVEL + 1))


class Dimension(str, Enum):
    """The three supervision dimensions, in canonical order PT, TL, TD."""

    PT = "PT"
    TL = "TL"
    TD = "TD"

    @property
    def long_name(self) -> str:
        return _LONG_NAMES[self]


_LONG_NAMES = {
    Dimension.PT: "pre-training",
    Dimension.TL: "training labels",
    Dimension.TD: "training data",
}

DIMENSIONS: tuple[Dimension, Dimension, Dimension] = (
    Dimension.PT,
    Dimension.TL,
    Dimension.TD,
)


class TagError(ValueError):
    """Base class for tag parsing and level validation failures."""


class MalformedTag(TagError):
    """The string does not match the ``SLS-d-d-d`` grammar.

    ``position`` is the character index (in the trimmed input) where
    parsing failed.
    """

    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"malformed tag {text!r} at position {position}: {reason}")


class LevelOutOfRange(TagError):
    """A level digit or value lies outside 0..5."""

    def __init__(self, dimension: Dimension, value: int, position: int | None = None):
        self.dimension = dimension
        self.value = value
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(
            f"{dimension.value} level {value}{where} is outside {MIN_LEVEL}..{MAX_LEVEL}"
        )


class EmptyStageList(ValueError):
    """Stage composition needs at least one stage."""

    def __init__(self) -> None:
        super().__init__("cannot compose an empty stage list")


def _check_level(dimension: Dimension, value: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"{dimension.value} level must be an int, got {value!r}")
    if not MIN_LEVEL <= value <= MAX_LEVEL:
        raise LevelOutOfRange(dimension, value)


@dataclass(frozen=True)
class SLSVector:
    """One supervision declaration: a (pt, tl, td) level triple."""

    pt: int
    tl: int
    td: int

    def __post_init__(self) -> None:
        _check_level(Dimension.PT, self.pt)
        _check_level(Dimension.TL, self.tl)
        _check_level(Dimension.TD, self.td)

    def level(self, dimension: Dimension) -> int:
        return {Dimension.PT: self.pt, Dimension.TL: self.tl, Dimension.TD: self.td}[
            dimension
        ]

    @property
    def components(self) -> tuple[int, int, int]:
        return (self.pt, self.tl, self.td)

    def __str__(self) -> str:
        return format_tag(self)


@dataclass(frozen=True)
class StageDeclaration:
    """A per-stage supervision declaration for a multi-stage method."""

    name: str
    sls: SLSVector

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise ValueError("stage name must be non-empty")


_TAG_PREFIX = "SLS"
_DIGITS = "0123456789"


def parse_tag(text: str) -> SLSVector:
    """Parse a supervision tag of the form ``SLS-d-d-d``.

    The ``SLS`` prefix is case-insensitive and leading/trailing
    whitespace is trimmed; anything else, including internal whitespace,
    is rejected. Each digit must be a single character in 0..5.

    Raises :class:`MalformedTag` for grammar violations and
    :class:`LevelOutOfRange` for digits 6..9, both carrying the
    offending character position.
    """
    s = text.strip()
    if len(s) < len(_TAG_PREFIX) or s[: len(_TAG_PREFIX)].upper() != _TAG_PREFIX:
        raise MalformedTag(s, 0, f"expected {_TAG_PREFIX!r} prefix")
    i = len(_TAG_PREFIX)
    levels: list[int] = []
    for dimension in DIMENSIONS:
        if i >= len(s) or s[i] != "-":
            found = repr(s[i]) if i < len(s) else "end of input"
            raise MalformedTag(s, i, f"expected '-' before {dimension.value} level, found {found}")
        i += 1
        if i >= len(s):
            raise MalformedTag(s, i, f"expected {dimension.value} digit, found end of input")
        c = s[i]
        if c not in _DIGITS:
            raise MalformedTag(s, i, f"expected {dimension.value} digit, found {c!r}")
        value = int(c)
        if value > MAX_LEVEL:
            raise LevelOutOfRange(dimension, value, position=i)
        levels.append(value)
        i += 1
    if i != len(s):
        raise MalformedTag(s, i, f"unexpected trailing characters {s[i:]!r}")
    return SLSVector(*levels)


def format_tag(v: SLSVector) -> str:
    """Canonical uppercase tag for a vector, e.g. ``SLS-0-3-3``."""
    return f"SLS-{v.pt}-{v.tl}-{v.td}"


def compose_stages(stages: Sequence[StageDeclaration]) -> SLSVector:
    """Method-level vector for a multi-stage method.

    The composed level on every dimension is the maximum declared across
    stages, so supervision used anywhere in the pipeline is never
    understated.
    """
    if not stages:
        raise EmptyStageList()
    return SLSVector(
        pt=max(s.sls.pt for s in stages),
        tl=max(s.sls.tl for s in stages),
        td=max(s.sls.td for s in stages),
    )


def leq(a: SLSVector, b: SLSVector) -> bool:
    """Componentwise partial order: ``a`` uses no more supervision than ``b``.

    Incomparable vectors (each strictly higher somewhere) return False in
    both argument orders.
    """
    return a.pt <= b.pt and a.tl <= b.tl and a.td <= b.td


def all_vectors() -> Iterator[SLSVector]:
    """All 216 possible vectors, in lexicographic (pt, tl, td) order."""
    for pt in LEVELS:
        for tl in LEVELS:
            for td in LEVELS:
                yield SLSVector(pt, tl, td)
