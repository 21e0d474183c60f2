"""Quiz corpus records, writer-rule validation, post-processing, and splits.

A corpus is a list of summary records, each carrying an input passage and
several reference question-answer pairs. Post-processing enforces the
writer rules (question mark, no yes/no questions, answer punctuation,
blocklisted phrases), trims the shortest question per record, and keeps
only records with exactly four surviving references.
"""

from __future__ import annotations

import enum
import json
import random
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import DataFormatError

GrammarHook = Callable[[str], str]

#: First tokens that mark a question as yes/no answerable.
YES_NO_FIRST_TOKENS = frozenset(
    "is are was were do does did can could will would has have had should may might".split()
)

#: Phrases that disqualify a question. Single words match as standalone
#: tokens, longer phrases as case-insensitive substrings.
DEFAULT_BLOCKLIST = ("I", "according to the passage")

#: Characters the answer must not end with.
ANSWER_END_PUNCTUATION_CHARS = ".!?,;:"

#: Number of references a record must end up with to survive post-processing.
TARGET_REFERENCE_COUNT = 4


class StyleLabel(enum.Enum):
    """Source-style label prefixed onto model inputs during mid-training."""

    SQUAD = "SQuAD"
    NQ = "NQ"
    NEWSQA = "NewsQA"
    NEWSQUIZQA = "NewsQuizQA"

    @classmethod
    def from_name(cls, name: str) -> "StyleLabel":
        for label in cls:
            if label.value == name:
                return label
        raise DataFormatError(f"unknown style label: {name!r}")


class Violation(enum.Enum):
    """Writer-rule violations detected on a question-answer pair."""

    NO_QUESTION_MARK = "NO_QUESTION_MARK"
    YES_NO_QUESTION = "YES_NO_QUESTION"
    ANSWER_END_PUNCTUATION = "ANSWER_END_PUNCTUATION"
    BLOCKLISTED_PHRASE = "BLOCKLISTED_PHRASE"
    EMPTY_FIELD = "EMPTY_FIELD"


@dataclass(frozen=True)
class QAPair:
    """A question with its short answer."""

    question: str
    answer: str


@dataclass(frozen=True)
class SummaryRecord:
    """An input passage with its reference question-answer pairs."""

    id: str
    summary: str
    references: tuple[QAPair, ...]
    style: StyleLabel = StyleLabel.NEWSQUIZQA


@dataclass(frozen=True)
class SplitAssignment:
    """Disjoint train/validation/test record-id sets covering a corpus."""

    train: frozenset[str]
    validation: frozenset[str]
    test: frozenset[str]

    def sizes(self) -> tuple[int, int, int]:
        return (len(self.train), len(self.validation), len(self.test))


def _contains_standalone_token(text: str, word: str) -> bool:
    # Token boundaries follow the metrics tokenizer: maximal alphanumeric runs.
    pattern = r"(?<![^\W_])" + re.escape(word.lower()) + r"(?![^\W_])"
    return re.search(pattern, text.lower()) is not None


def validate_pair(
    pair: QAPair, blocklist: Sequence[str] = DEFAULT_BLOCKLIST
) -> list[Violation]:
    """Check a question-answer pair against the writer rules.

    Returns the violations found, in enum declaration order; an empty list
    means the pair is compliant. Empty fields suppress the other checks on
    that field.
    """
    question = pair.question.strip()
    answer = pair.answer.strip()
    violations: list[Violation] = []

    if question and not question.endswith("?"):
        violations.append(Violation.NO_QUESTION_MARK)

    if question:
        first = re.split(r"\s+", question)[0].strip(".,;:!?\"'").lower()
        if first in YES_NO_FIRST_TOKENS:
            violations.append(Violation.YES_NO_QUESTION)

    if answer and answer[-1] in ANSWER_END_PUNCTUATION_CHARS:
        violations.append(Violation.ANSWER_END_PUNCTUATION)

    if question:
        for phrase in blocklist:
            if len(phrase.split()) > 1:
                hit = phrase.lower() in question.lower()
            else:
                hit = _contains_standalone_token(question, phrase)
            if hit:
                violations.append(Violation.BLOCKLISTED_PHRASE)
                break

    if not question or not answer:
        violations.append(Violation.EMPTY_FIELD)

    return violations


def postprocess_corpus(
    records: Iterable[SummaryRecord],
    grammar_hook: GrammarHook | None = None,
    blocklist: Sequence[str] = DEFAULT_BLOCKLIST,
) -> list[SummaryRecord]:
    """Apply the corpus cleanup rules and keep exactly-four-reference records.

    Per record: run the grammar hook over every question (identity by
    default), drop references violating the writer rules, remove the single
    shortest question by character count (ties to the lowest index) when
    more than one reference survives, then keep the record only if exactly
    four references remain.
    """
    hook = grammar_hook or (lambda text: text)
    result: list[SummaryRecord] = []
    for record in records:
        corrected = [
            QAPair(question=hook(ref.question), answer=ref.answer)
            for ref in record.references
        ]
        valid = [ref for ref in corrected if not validate_pair(ref, blocklist)]
        if len(valid) > 1:
            shortest = min(range(len(valid)), key=lambda i: (len(valid[i].question), i))
            valid = valid[:shortest] + valid[shortest + 1 :]
        if len(valid) == TARGET_REFERENCE_COUNT:
            result.append(replace(record, references=tuple(valid)))
    return result


def _split_sizes(n: int) -> tuple[int, int, int]:
    # 80-10-10 with the 10% shares rounded half-up; remainder goes to train.
    validation = (n + 5) // 10
    test = (n + 5) // 10
    return n - validation - test, validation, test


def split_corpus(records: Sequence[SummaryRecord], seed: int) -> SplitAssignment:
    """Randomly partition record ids into 80/10/10 train/validation/test."""
    if not records:
        raise ValueError("cannot split an empty corpus")
    ids = [record.id for record in records]
    if len(set(ids)) != len(ids):
        raise DataFormatError("corpus contains duplicate record ids")
    rng = random.Random(seed)
    rng.shuffle(ids)
    n_train, n_validation, _ = _split_sizes(len(ids))
    return SplitAssignment(
        train=frozenset(ids[:n_train]),
        validation=frozenset(ids[n_train : n_train + n_validation]),
        test=frozenset(ids[n_train + n_validation :]),
    )


def apply_style_prefix(record: SummaryRecord) -> str:
    """Prefix the summary with its style label, e.g. ``"Style SQuAD: ..."``."""
    return f"Style {record.style.value}: {record.summary}"


def disaggregate(
    records: Sequence[SummaryRecord],
    seed: int,
    with_style_prefix: bool = False,
) -> list[tuple[str, QAPair]]:
    """Flatten to single-reference (input text, pair) examples, shuffled."""
    examples = [
        (apply_style_prefix(record) if with_style_prefix else record.summary, ref)
        for record in records
        for ref in record.references
    ]
    random.Random(seed).shuffle(examples)
    return examples


def sample_one(
    records: Sequence[SummaryRecord],
    seed: int,
    with_style_prefix: bool = False,
) -> list[tuple[str, QAPair]]:
    """Pick one reference per record a priori, keyed by the seed."""
    rng = random.Random(seed)
    return [
        (
            apply_style_prefix(record) if with_style_prefix else record.summary,
            record.references[rng.randrange(len(record.references))],
        )
        for record in records
    ]


# --- JSONL persistence -----------------------------------------------------

#: Default field names of the JSONL corpus format. A mapping adapter lets
#: differently-named releases load without conversion.
DEFAULT_FIELD_MAP = {
    "id": "id",
    "summary": "summary",
    "style": "style",
    "references": "references",
    "question": "question",
    "answer": "answer",
}


def record_to_dict(record: SummaryRecord) -> dict:
    return {
        "id": record.id,
        "summary": record.summary,
        "style": record.style.value,
        "references": [
            {"question": ref.question, "answer": ref.answer}
            for ref in record.references
        ],
    }


def record_from_dict(data: dict, field_map: dict[str, str] | None = None) -> SummaryRecord:
    fields = dict(DEFAULT_FIELD_MAP)
    if field_map:
        fields.update(field_map)
    try:
        references = tuple(
            QAPair(
                question=str(ref[fields["question"]]),
                answer=str(ref[fields["answer"]]),
            )
            for ref in data[fields["references"]]
        )
        style_name = data.get(fields["style"], StyleLabel.NEWSQUIZQA.value)
        return SummaryRecord(
            id=str(data[fields["id"]]),
            summary=str(data[fields["summary"]]),
            references=references,
            style=StyleLabel.from_name(style_name),
        )
    except KeyError as exc:
        raise DataFormatError(f"corpus record is missing field {exc}") from exc


def load_corpus(path: str | Path, field_map: dict[str, str] | None = None) -> list[SummaryRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            records.append(record_from_dict(data, field_map))
    return records


def dump_corpus(records: Iterable[SummaryRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record_to_dict(record)) + "\n")
