"""Exception hierarchy shared across the toolkit.

Record-level errors (``RecordError`` subclasses) are raised for a single bad
input line; pipelines catch them, count, and keep going. Everything else is
fatal for the operation that raised it.
"""

from __future__ import annotations


class AmbientkitError(Exception):
    """Base class for all toolkit errors."""


class RecordError(AmbientkitError):
    """A single corpus record is unusable. Carries the 1-based line number."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class MalformedRecord(RecordError):
    """Record is not a JSON object, or a field has an unusable value."""


class MissingField(RecordError):
    """A required record field (id, ts, text) is absent."""

    def __init__(self, field: str, line_no: int | None = None):
        self.field = field
        super().__init__(f"missing required field {field!r}", line_no)


class BadTimestamp(RecordError):
    """Timestamp field is not a non-negative integer."""


class OutOfRangeError(AmbientkitError):
    """Timestamp falls before the configured bin epoch."""


class LoadError(AmbientkitError):
    """A data file (lexicon, gazetteer, embeddings, labels) failed to load."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class LensTooWide(AmbientkitError):
    """Applying the score lens removed every lexicon entry."""


class NoScoredTokens(AmbientkitError):
    """A distribution shares no types with the lexicon; report the bin as a gap."""


class MissingLabel(AmbientkitError):
    """A document required a label for the requested partition but has none."""


class InsufficientDocuments(AmbientkitError):
    """Asked to sample more documents than the corpus contains."""


class SingleClassError(AmbientkitError):
    """A labeled set holds only one class; no split or training is possible."""


class TrainError(AmbientkitError):
    """Training inputs are inconsistent (missing rows, missing labels)."""


class PredictError(AmbientkitError):
    """Model and embedding dimensions do not match."""


class EvalError(AmbientkitError):
    """Prediction and truth id sets differ."""


class ExhaustedSample(AmbientkitError):
    """No unlabeled, unskipped documents remain in the session queue."""


class StoreLockedError(AmbientkitError):
    """Another process holds the advisory lock on the label store."""


class PipelineError(AmbientkitError):
    """A pipeline stage failed. Carries the stage name."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"stage {stage!r}: {message}")
