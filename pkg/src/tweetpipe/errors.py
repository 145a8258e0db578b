"""Exception hierarchy shared by all tweetpipe modules.

Everything raised on bad *data* (malformed files, inconsistent label maps,
invalid spans, degenerate statistics) derives from DataError so the CLI can
map it to a single exit code; numeric blow-ups during training get their own
class because they signal a different kind of failure.
"""

from __future__ import annotations


class TweetpipeError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(TweetpipeError):
    """Invalid flag combination. CLI exit code 2."""


class DataError(TweetpipeError, ValueError):
    """Invalid input data or arguments. CLI exit code 3."""


class ParseError(DataError):
    """A record file line could not be parsed."""

    def __init__(self, path: str, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class IntegrityError(DataError):
    """A record file violates an integrity constraint (e.g. duplicate id)."""


class CoverageError(DataError):
    """Prediction sets do not cover the same record ids."""


class UnknownLabelError(DataError):
    """A label is outside the declared class list."""


class KeyMismatchError(DataError):
    """Two label maps do not share an identical key set."""


class InvalidSpansError(DataError):
    """Spans overlap, are out of bounds or otherwise malformed."""


class AlignmentError(DataError):
    """A span does not align with token boundaries."""


class InvalidDistributionError(DataError):
    """A probability vector violates the distribution invariants."""


class DegenerateMarginalsError(DataError):
    """Cohen's kappa is undefined: chance agreement is 1 but observed is not."""


class ShapeError(DataError):
    """Array or sequence shapes do not agree."""


class DivergenceError(TweetpipeError):
    """Training produced a non-finite loss. CLI exit code 4."""

    def __init__(self, epoch: int, message: str = ""):
        detail = message or f"non-finite loss at epoch {epoch}"
        super().__init__(detail)
        self.epoch = epoch
