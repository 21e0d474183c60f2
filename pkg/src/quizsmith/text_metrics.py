"""From-scratch ROUGE scorers and the question-answer (QAG) extension.

All scorers work on lowercase word-token sequences produced by
:func:`tokenize` (maximal alphanumeric runs, no stemming). Multi-reference
evaluation returns the per-reference score with the highest F1. The QAG
variant splits a combined output at a separator, scores question and answer
halves separately, and combines them with a harmonic mean, so a prediction
that gets either half completely wrong scores zero.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .corpus import QAPair

TokenSeq = list[str]

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> TokenSeq:
    """Lowercase and split into maximal alphanumeric runs.

    Everything that is not a letter or digit acts as a delimiter; the empty
    string yields an empty sequence.
    """
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class RougeScore:
    """Precision/recall/F1 triple, each in [0, 1]."""

    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class QaSplitConfig:
    """How a combined output sequence separates question from answer."""

    separator: str = "<sep>"

    def __post_init__(self):
        if not self.separator:
            raise ValueError("separator must be non-empty")


def _score(precision: float, recall: float) -> RougeScore:
    if precision == 0.0 or recall == 0.0:
        f1 = 0.0
    else:
        f1 = 2.0 * precision * recall / (precision + recall)
    return RougeScore(precision=precision, recall=recall, f1=f1)


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: TokenSeq, reference: TokenSeq, n: int) -> RougeScore:
    """N-gram overlap F1 between candidate and reference token sequences.

    Overlap counts use the multiset intersection of n-grams; a zero
    denominator makes the corresponding component zero.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = _ngrams(candidate, n)
    ref = _ngrams(reference, n)
    overlap = sum((cand & ref).values())
    cand_total = sum(cand.values())
    ref_total = sum(ref.values())
    precision = overlap / cand_total if cand_total else 0.0
    recall = overlap / ref_total if ref_total else 0.0
    return _score(precision, recall)


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0] * (len(b) + 1)
        for j, y in enumerate(b, start=1):
            if x == y:
                curr[j] = prev[j - 1] + 1
            else:
                curr[j] = max(prev[j], curr[j - 1])
        prev = curr
    return prev[len(b)]


def rouge_l(candidate: TokenSeq, reference: TokenSeq) -> RougeScore:
    """Sentence-level longest-common-subsequence F1."""
    if not candidate or not reference:
        return RougeScore(0.0, 0.0, 0.0)
    lcs = _lcs_length(candidate, reference)
    return _score(lcs / len(candidate), lcs / len(reference))


#: Named scorer variants usable wherever a `variant` argument is accepted.
VARIANTS = {
    "rouge1": lambda c, r: rouge_n(c, r, 1),
    "rouge2": lambda c, r: rouge_n(c, r, 2),
    "rougeL": rouge_l,
}


def _scorer(variant: str):
    try:
        return VARIANTS[variant]
    except KeyError:
        raise ValueError(f"unknown ROUGE variant {variant!r}; expected one of {sorted(VARIANTS)}")


def rouge_multi(
    candidate: TokenSeq, references: Sequence[TokenSeq], variant: str = "rouge2"
) -> RougeScore:
    """Score against every reference and return the one with maximal F1.

    Ties break to the lowest reference index.
    """
    if not references:
        raise ValueError("references must be non-empty")
    score = _scorer(variant)
    best = score(candidate, references[0])
    for reference in references[1:]:
        current = score(candidate, reference)
        if current.f1 > best.f1:
            best = current
    return best


def harmonic_mean(a: float, b: float) -> float:
    """Harmonic mean, defined as 0 when either operand is 0."""
    if a == 0.0 or b == 0.0:
        return 0.0
    return 2.0 * a * b / (a + b)


def split_prediction(prediction: str, config: QaSplitConfig) -> tuple[str, str] | None:
    """Split at the first separator occurrence; None when the separator is absent."""
    index = prediction.find(config.separator)
    if index < 0:
        return None
    return prediction[:index], prediction[index + len(config.separator) :]


def rouge_qag(
    prediction: str,
    references: Sequence[QAPair],
    variant: str = "rouge2",
    config: QaSplitConfig = QaSplitConfig(),
) -> float:
    """Question-answer ROUGE: harmonic mean of the question and answer F1s.

    The prediction must split into question and answer halves at the
    configured separator; an unsplittable prediction scores 0. The returned
    value is the maximum over references of the per-reference harmonic mean.
    """
    if not references:
        raise ValueError("references must be non-empty")
    parts = split_prediction(prediction, config)
    if parts is None:
        return 0.0
    question, answer = parts
    score = _scorer(variant)
    q_tokens = tokenize(question)
    a_tokens = tokenize(answer)
    best = 0.0
    for reference in references:
        q_f1 = score(q_tokens, tokenize(reference.question)).f1
        a_f1 = score(a_tokens, tokenize(reference.answer)).f1
        best = max(best, harmonic_mean(q_f1, a_f1))
    return best


def combined_reference_text(reference: QAPair, config: QaSplitConfig = QaSplitConfig()) -> str:
    """Render a reference as the combined output sequence the model emits."""
    return f"{reference.question} {config.separator} {reference.answer}"


def evaluate_predictions(
    predictions: Sequence[str],
    references: Sequence[Sequence[QAPair]],
    config: QaSplitConfig = QaSplitConfig(),
) -> dict[str, float]:
    """Corpus-level report with plain and QAG ROUGE plus average length.

    Plain ROUGE treats each reference as its combined question-answer text
    and takes the best F1 per prediction; QAG scores halves separately.
    All figures are means over the prediction list.
    """
    if len(predictions) != len(references):
        raise ValueError("predictions and references must be line-aligned")
    if not predictions:
        raise ValueError("nothing to evaluate")
    totals = {key: 0.0 for key in ("R1-F", "R2-F", "RL-F", "R1-F-QAG", "R2-F-QAG", "RL-F-QAG")}
    total_chars = 0
    for prediction, refs in zip(predictions, references):
        if not refs:
            raise ValueError("every prediction needs at least one reference")
        cand_tokens = tokenize(prediction)
        ref_tokens = [tokenize(combined_reference_text(ref, config)) for ref in refs]
        totals["R1-F"] += rouge_multi(cand_tokens, ref_tokens, "rouge1").f1
        totals["R2-F"] += rouge_multi(cand_tokens, ref_tokens, "rouge2").f1
        totals["RL-F"] += rouge_multi(cand_tokens, ref_tokens, "rougeL").f1
        totals["R1-F-QAG"] += rouge_qag(prediction, refs, "rouge1", config)
        totals["R2-F-QAG"] += rouge_qag(prediction, refs, "rouge2", config)
        totals["RL-F-QAG"] += rouge_qag(prediction, refs, "rougeL", config)
        total_chars += len(prediction)
    report = {key: value / len(predictions) for key, value in totals.items()}
    report["avg_length_chars"] = total_chars / len(predictions)
    return report
