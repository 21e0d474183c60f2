"""Exception types shared across the toolkit.

All domain errors derive from QuizsmithError so the CLI can map them to a
single "data error" exit code.
"""

from __future__ import annotations


class QuizsmithError(Exception):
    """Base class for all toolkit-specific errors."""


class DataFormatError(QuizsmithError):
    """A file or record does not match the expected schema."""


class UnknownTokenError(QuizsmithError):
    """A token is not part of the model vocabulary."""


class ScorerError(QuizsmithError):
    """A next-token scorer returned an invalid log-probability vector."""


class InsufficientCandidatesError(QuizsmithError):
    """Too few distinct distractor candidates survived the pre-filter."""

    def __init__(self, survivors: int, required: int):
        super().__init__(
            f"only {survivors} distinct candidates survived the pre-filter, "
            f"need {required}"
        )
        self.survivors = survivors
        self.required = required


class UnknownBatchError(QuizsmithError):
    """No curation batch with the given id exists."""


class AlreadyCuratedError(QuizsmithError):
    """The batch has already been curated; it cannot be curated again."""


class NotCuratedError(QuizsmithError):
    """The batch is still open; the requested action needs a curated batch."""


class CurationRejectedError(QuizsmithError):
    """A curation submission violated the batch constraints."""

    def __init__(self, violations: list[str]):
        super().__init__("curation rejected: " + ", ".join(violations))
        self.violations = violations
