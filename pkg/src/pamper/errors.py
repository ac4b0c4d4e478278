"""Exception types raised across the package.

Everything user-facing derives from :class:`PamperError` so the CLI can map
input problems to a single exit code. Parse errors carry the 1-based line
number of the offending input line.
"""


class PamperError(Exception):
    """Base class for all errors raised by this package."""


class MalformedLineError(PamperError):
    """A database or vector line does not match the record grammar."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class InconsistentWidthError(PamperError):
    """A feature vector disagrees with the width fixed by the first record."""

    def __init__(self, line_no: int, got: int, want: int):
        super().__init__(
            f"line {line_no}: feature vector has {got} entries, expected {want}"
        )
        self.line_no = line_no
        self.got = got
        self.want = want


class EmptyDatabaseError(PamperError):
    """The database contains no data lines."""

    def __init__(self, message: str = "database contains no data lines"):
        super().__init__(message)


class DuplicateIndexError(PamperError):
    """A feature catalog defines the same index twice."""

    def __init__(self, index: int):
        super().__init__(f"duplicate feature index {index}")
        self.index = index


class BadIndexError(PamperError):
    """A feature index is unparsable, negative, or out of range."""

    def __init__(self, line_no: int | None, reason: str):
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + reason)
        self.line_no = line_no
        self.reason = reason


class EmptyDatasetError(PamperError):
    """An operation that needs at least one data point received none."""

    def __init__(self, message: str = "dataset has no points"):
        super().__init__(message)


class ModelParseError(PamperError):
    """A model file violates the serialization grammar."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class VectorWidthMismatchError(PamperError):
    """A query vector's width differs from the model's feature count."""

    def __init__(self, got: int, want: int):
        super().__init__(f"vector has {got} entries, model expects {want}")
        self.got = got
        self.want = want


class UnknownMethodError(PamperError):
    """A queried method has no tree in the model."""

    def __init__(self, method: str):
        super().__init__(f"unknown method: {method}")
        self.method = method


class FeatureWidthMismatchError(PamperError):
    """Training and evaluation corpora disagree on feature count."""

    def __init__(self, got: int, want: int):
        super().__init__(
            f"evaluation corpus has {got} features, training corpus has {want}"
        )
        self.got = got
        self.want = want


class InvalidDistributionError(PamperError):
    """A planted distribution has negative mass or does not sum to one."""


class PlantedConfigError(PamperError):
    """A planted-model config file violates its grammar."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class NoTrainPointsError(PamperError):
    """The corpus split left no training points."""

    def __init__(self):
        super().__init__("split produced no training points")


class NoEvalPointsError(PamperError):
    """The corpus split left no evaluation points."""

    def __init__(self):
        super().__init__("split produced no evaluation points")
