"""Parsing, validation, and summaries for proof-method databases.

A database is UTF-8 text holding one record per line::

    induct, [1,0,0,1,0]

The method name comes first, then a bracketed vector of 0/1 feature flags.
Spaces around the comma, brackets, and flags are tolerated, and both LF and
CRLF line endings are accepted. Blank lines and lines whose first non-space
character is ``#`` are skipped. The vector width of the first record fixes
the feature count for the whole file; later records must agree.

A feature catalog is a separate tab-separated file mapping feature indices
to human-readable descriptions, used when rendering explanations::

    14\tthe context has locally defined assumptions
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Iterator, NamedTuple

import numpy as np

from .errors import (
    BadIndexError,
    DuplicateIndexError,
    EmptyDatabaseError,
    InconsistentWidthError,
    MalformedLineError,
    VectorWidthMismatchError,
)

METHOD_TOKEN = re.compile(r"[A-Za-z0-9_'.\-]+\Z")


class DataPoint(NamedTuple):
    """One observed proof-method application: name plus its feature bits."""

    method: str
    features: np.ndarray


@dataclass(frozen=True, eq=False)
class Corpus:
    """An immutable sequence of (method, feature vector) records.

    ``features`` is adopted as the backing store and marked read-only, so
    pass a copy if you need to keep a writable original. Rows are uint8 in
    {0, 1} and the matrix is C-contiguous.
    """

    method_names: tuple[str, ...]
    features: np.ndarray
    feature_count: int

    def __post_init__(self):
        X = self.features
        if not (
            isinstance(X, np.ndarray)
            and X.dtype == np.uint8
            and X.ndim == 2
            and X.flags.c_contiguous
        ):
            X = np.ascontiguousarray(X, dtype=np.uint8)
            if X.ndim != 2:
                raise ValueError("features must be a 2-D array")
        if self.feature_count < 1:
            raise ValueError("feature count must be positive")
        if X.shape != (len(self.method_names), self.feature_count):
            raise ValueError(
                f"features shape {X.shape} does not match "
                f"{len(self.method_names)} points x {self.feature_count} features"
            )
        if X.size and X.max() > 1:
            raise ValueError("feature values must be 0 or 1")
        for name in set(self.method_names):
            if not METHOD_TOKEN.match(name):
                raise ValueError(f"invalid method name: {name!r}")
        X.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "method_names", tuple(self.method_names))

    def __len__(self) -> int:
        return len(self.method_names)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return (
            self.method_names == other.method_names
            and self.feature_count == other.feature_count
            and np.array_equal(self.features, other.features)
        )

    def point(self, i: int) -> DataPoint:
        return DataPoint(self.method_names[i], self.features[i])

    def iter_points(self) -> Iterator[DataPoint]:
        for name, row in zip(self.method_names, self.features):
            yield DataPoint(name, row)

    @property
    def points(self) -> tuple[DataPoint, ...]:
        """Materialized record tuple; prefer iter_points on big corpora."""
        return tuple(self.iter_points())

    @cached_property
    def method_counts(self) -> dict[str, int]:
        """Occurrence count per distinct method name."""
        return dict(Counter(self.method_names))

    def take(self, indices) -> "Corpus":
        """New corpus holding the given rows, in the given order."""
        idx = np.asarray(indices, dtype=np.int64)
        names = tuple(self.method_names[i] for i in idx.tolist())
        return Corpus(names, np.ascontiguousarray(self.features[idx]), self.feature_count)


def _parse_bits(inner: str, line_no: int) -> bytearray:
    row = bytearray()
    for token in inner.split(","):
        bit = token.strip()
        if bit == "0":
            row.append(0)
        elif bit == "1":
            row.append(1)
        else:
            raise MalformedLineError(line_no, f"feature flag must be 0 or 1, got {bit!r}")
    return row


def _parse_record(line: str, line_no: int) -> tuple[str, bytearray]:
    head, sep, rest = line.partition(",")
    if not sep:
        raise MalformedLineError(line_no, "expected '<method>, [<bits>]'")
    method = head.strip()
    if not METHOD_TOKEN.match(method):
        raise MalformedLineError(line_no, f"invalid method name: {method!r}")
    vec = rest.strip()
    if not (vec.startswith("[") and vec.endswith("]")):
        raise MalformedLineError(line_no, "feature vector must be bracketed")
    row = _parse_bits(vec[1:-1], line_no)
    if not row:
        raise MalformedLineError(line_no, "feature vector is empty")
    return method, row


def parse_database(text: str | bytes) -> Corpus:
    """Parse database text into a validated corpus.

    Raises MalformedLineError / InconsistentWidthError with the 1-based
    line number on bad records and EmptyDatabaseError when no data lines
    remain after skipping blanks and comments.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    methods: list[str] = []
    bits = bytearray()
    width = -1
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        method, row = _parse_record(line, line_no)
        if width < 0:
            width = len(row)
        elif len(row) != width:
            raise InconsistentWidthError(line_no, len(row), width)
        methods.append(method)
        bits += row
    if width < 0:
        raise EmptyDatabaseError()
    X = np.frombuffer(bytes(bits), dtype=np.uint8).reshape(len(methods), width).copy()
    return Corpus(tuple(methods), X, width)


def serialize_database(corpus: Corpus) -> str:
    """Render a corpus back to database text (canonical spacing, LF lines)."""
    out = []
    for name, row in zip(corpus.method_names, corpus.features):
        out.append(f"{name}, [{','.join('1' if b else '0' for b in row.tolist())}]\n")
    return "".join(out)


def parse_vector(text: str, feature_count: int | None = None, line_no: int = 1) -> np.ndarray:
    """Parse one bracketed feature-vector literal, e.g. ``[1,0,1]``.

    The grammar matches the database bracket syntax. When feature_count is
    given the width is checked and VectorWidthMismatchError raised on
    disagreement.
    """
    vec = text.strip()
    if not (vec.startswith("[") and vec.endswith("]")):
        raise MalformedLineError(line_no, "feature vector must be bracketed")
    row = _parse_bits(vec[1:-1], line_no)
    if not row:
        raise MalformedLineError(line_no, "feature vector is empty")
    arr = np.frombuffer(bytes(row), dtype=np.uint8).copy()
    if feature_count is not None and arr.size != feature_count:
        raise VectorWidthMismatchError(arr.size, feature_count)
    return arr


def corpus_stats(corpus: Corpus) -> list[tuple[str, int, float]]:
    """Usage summary: (method, count, percent of all points).

    Rows are sorted by count descending, ties by ascending method name.
    Percents are exact (100 * count / points); rounding is left to renderers.
    """
    if len(corpus) == 0:
        raise EmptyDatabaseError("corpus has no points")
    total = len(corpus)
    rows = [
        (name, count, 100.0 * count / total)
        for name, count in corpus.method_counts.items()
    ]
    rows.sort(key=lambda r: (-r[1], r[0]))
    return rows


@dataclass(frozen=True, eq=False)
class FeatureCatalog:
    """Feature index -> human-readable description, immutable."""

    descriptions: dict[int, str]

    def __post_init__(self):
        object.__setattr__(
            self, "descriptions", MappingProxyType(dict(self.descriptions))
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeatureCatalog):
            return NotImplemented
        return dict(self.descriptions) == dict(other.descriptions)

    def __len__(self) -> int:
        return len(self.descriptions)

    def describe(self, index: int) -> str:
        """Description for a feature, with a stable fallback phrasing."""
        got = self.descriptions.get(index)
        return got if got is not None else f"feature #{index} holds"

    def check_range(self, feature_count: int) -> None:
        for index in self.descriptions:
            if index >= feature_count:
                raise BadIndexError(
                    None,
                    f"catalog index {index} out of range for {feature_count} features",
                )


EMPTY_CATALOG = FeatureCatalog({})


def parse_feature_catalog(text: str | bytes) -> FeatureCatalog:
    """Parse ``<index><TAB><description>`` lines; empty input is valid."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    descriptions: dict[int, str] = {}
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, rest = line.partition("\t")
        if not sep:
            raise BadIndexError(line_no, "expected '<index><TAB><description>'")
        try:
            index = int(head.strip())
        except ValueError:
            raise BadIndexError(line_no, f"bad feature index: {head.strip()!r}") from None
        if index < 0:
            raise BadIndexError(line_no, f"negative feature index: {index}")
        description = rest.strip()
        if not description:
            raise BadIndexError(line_no, "empty description")
        if index in descriptions:
            raise DuplicateIndexError(index)
        descriptions[index] = description
    return FeatureCatalog(descriptions)
