"""Statistics over rater judgments of multiple-choice answer options.

Raters mark every option they think might be correct (at least one), plus
any options they consider duplicates or overlapping. The report aggregates
how often distractors fooled raters along four ascending measures, and
duplicate flags are counted per option by strict majority vote of that
question's raters. Survey responses on a 1-5 scale aggregate to a mean with
a 95% normal-approximation margin.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DataFormatError


@dataclass(frozen=True)
class QuestionOptions:
    """The option ids of one question: a single key plus distractors."""

    question_id: str
    key_option: str
    distractor_options: frozenset[str]

    def __post_init__(self):
        if not self.distractor_options:
            raise ValueError("a question needs at least one distractor option")
        if self.key_option in self.distractor_options:
            raise ValueError("the key cannot also be a distractor")

    @property
    def all_options(self) -> frozenset[str]:
        return self.distractor_options | {self.key_option}


@dataclass(frozen=True)
class RatingRecord:
    """One rater's marks on one question."""

    rater_id: str
    question_id: str
    marked: frozenset[str]
    overlap_flags: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.marked:
            raise ValueError("raters must mark at least one option")


@dataclass(frozen=True)
class StatsReport:
    """Distractor-evaluation statistics; percentages are in [0, 100]."""

    plausible_per_question: float
    single_plausible_pct: float
    single_plausible_is_distractor_pct: float
    keys_not_plausible_pct: float
    distractors_plausible_pct: float
    at_least_one_distractor_plausible_pct: float
    duplicate_overlapping_pct: float

    def as_dict(self) -> dict[str, float]:
        return {
            "plausible_per_question": self.plausible_per_question,
            "single_plausible_pct": self.single_plausible_pct,
            "single_plausible_is_distractor_pct": self.single_plausible_is_distractor_pct,
            "keys_not_plausible_pct": self.keys_not_plausible_pct,
            "distractors_plausible_pct": self.distractors_plausible_pct,
            "at_least_one_distractor_plausible_pct": self.at_least_one_distractor_plausible_pct,
            "duplicate_overlapping_pct": self.duplicate_overlapping_pct,
        }


def _pct(numerator: int, denominator: int) -> float:
    return 100.0 * numerator / denominator if denominator else 0.0


def compute_stats(
    ratings: Sequence[RatingRecord], questions: Sequence[QuestionOptions]
) -> StatsReport:
    """Aggregate rater marks into the distractor-evaluation report.

    Every rating must reference a known question and only that question's
    options, and each (rater, question) pair may appear at most once.
    """
    if not ratings:
        raise ValueError("no ratings to aggregate")
    by_question = {q.question_id: q for q in questions}
    if len(by_question) != len(questions):
        raise DataFormatError("duplicate question ids")

    seen_pairs: set[tuple[str, str]] = set()
    marked_total = 0
    single = 0
    single_distractor = 0
    key_not_marked = 0
    distractor_marks = 0
    distractor_pairs = 0
    any_distractor = 0
    flag_counts: dict[tuple[str, str], int] = {}
    raters_per_question: dict[str, int] = {}

    for rating in ratings:
        question = by_question.get(rating.question_id)
        if question is None:
            raise DataFormatError(f"rating references unknown question {rating.question_id!r}")
        unknown = (rating.marked | rating.overlap_flags) - question.all_options
        if unknown:
            raise DataFormatError(
                f"rating references unknown options {sorted(unknown)} "
                f"on question {rating.question_id!r}"
            )
        pair = (rating.rater_id, rating.question_id)
        if pair in seen_pairs:
            raise DataFormatError(f"duplicate rating for {pair}")
        seen_pairs.add(pair)

        raters_per_question[rating.question_id] = (
            raters_per_question.get(rating.question_id, 0) + 1
        )
        marked_total += len(rating.marked)
        marked_distractors = rating.marked & question.distractor_options
        if len(rating.marked) == 1:
            single += 1
            if marked_distractors:
                single_distractor += 1
        if question.key_option not in rating.marked:
            key_not_marked += 1
        distractor_marks += len(marked_distractors)
        distractor_pairs += len(question.distractor_options)
        if marked_distractors:
            any_distractor += 1
        for option in rating.overlap_flags:
            flag_counts[(rating.question_id, option)] = (
                flag_counts.get((rating.question_id, option), 0) + 1
            )

    # Duplicate/overlap: an option counts when flagged by a strict majority
    # of the raters who rated its question; the base is all options of the
    # rated questions.
    flagged = 0
    option_total = 0
    for question_id, panel in raters_per_question.items():
        question = by_question[question_id]
        for option in question.all_options:
            option_total += 1
            if flag_counts.get((question_id, option), 0) * 2 > panel:
                flagged += 1

    n = len(ratings)
    return StatsReport(
        plausible_per_question=marked_total / n,
        single_plausible_pct=_pct(single, n),
        single_plausible_is_distractor_pct=_pct(single_distractor, single),
        keys_not_plausible_pct=_pct(key_not_marked, n),
        distractors_plausible_pct=_pct(distractor_marks, distractor_pairs),
        at_least_one_distractor_plausible_pct=_pct(any_distractor, n),
        duplicate_overlapping_pct=_pct(flagged, option_total),
    )


def aggregate_ratings(responses: Sequence[int]) -> tuple[float, float]:
    """Mean and 95% normal-approximation margin of 1-5 survey responses.

    margin = 1.96 * sample standard deviation / sqrt(n); zero for a single
    response or zero variance.
    """
    if not responses:
        raise ValueError("responses must be non-empty")
    for response in responses:
        if response not in (1, 2, 3, 4, 5):
            raise ValueError(f"response {response!r} is outside the 1..5 scale")
    mean = sum(responses) / len(responses)
    if len(responses) < 2:
        return mean, 0.0
    margin = 1.96 * statistics.stdev(responses) / math.sqrt(len(responses))
    return mean, margin
