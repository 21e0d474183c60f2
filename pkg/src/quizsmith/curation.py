"""Curation batches: the weekly ten-question review bundle and its rules.

A curator receives exactly ten multiple-choice questions with five
distractor candidates each, picks three questions and three distractors per
picked question, and may only make three kinds of edits: grammar/spelling
fixes, source/date clarifications, and distractor formatting. Accepted
curations are persisted next to their batch and exported as a three-question
quiz with shuffled answer options.
"""

from __future__ import annotations

import json
import random
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .distractors import McQuestion
from .errors import (
    AlreadyCuratedError,
    CurationRejectedError,
    DataFormatError,
    NotCuratedError,
    UnknownBatchError,
)

QUESTIONS_PER_BATCH = 10
CANDIDATES_PER_QUESTION = 5
QUESTION_PICKS = 3
DISTRACTOR_PICKS = 3

EDIT_CATEGORIES = ("GRAMMAR_SPELLING", "CLARIFY_SOURCE_DATE", "DISTRACTOR_FORMATTING")
EDIT_PARTS = ("question", "key", "distractor")

STATUS_OPEN = "open"
STATUS_CURATED = "curated"


@dataclass(frozen=True)
class CurationBatch:
    """Exactly ten candidate questions, each with five distractor candidates."""

    batch_id: str
    seed: int
    candidates: tuple[McQuestion, ...]
    status: str = STATUS_OPEN

    def __post_init__(self):
        if len(self.candidates) != QUESTIONS_PER_BATCH:
            raise ValueError(
                f"a batch holds exactly {QUESTIONS_PER_BATCH} questions, "
                f"got {len(self.candidates)}"
            )
        for mcq in self.candidates:
            if len(mcq.distractors) != CANDIDATES_PER_QUESTION:
                raise ValueError(
                    f"each question carries exactly {CANDIDATES_PER_QUESTION} "
                    f"distractor candidates"
                )
        if self.status not in (STATUS_OPEN, STATUS_CURATED):
            raise ValueError(f"unknown batch status {self.status!r}")


@dataclass(frozen=True)
class EditTarget:
    question_index: int
    part: str
    distractor_index: int | None = None


@dataclass(frozen=True)
class Edit:
    target: EditTarget
    before: str
    after: str
    category: str


@dataclass(frozen=True)
class Selection:
    question_index: int
    distractor_indices: tuple[int, ...]


@dataclass(frozen=True)
class CurationResult:
    batch_id: str
    selections: tuple[Selection, ...]
    edits: tuple[Edit, ...] = field(default_factory=tuple)


def validate_curation(batch: CurationBatch, result: CurationResult) -> list[str]:
    """Check a curation against the batch rules; empty list means accepted.

    Violation codes: BATCH_MISMATCH, PICK_COUNT, DUPLICATE_PICK,
    UNKNOWN_QUESTION, UNKNOWN_DISTRACTOR, EDIT_CATEGORY, EDIT_TARGET,
    EDIT_BEFORE_MISMATCH, EMPTY_EDIT.
    """
    violations: list[str] = []
    if result.batch_id != batch.batch_id:
        violations.append("BATCH_MISMATCH")

    question_picks = [s.question_index for s in result.selections]
    if len(question_picks) != QUESTION_PICKS:
        violations.append("PICK_COUNT")
    if len(set(question_picks)) != len(question_picks):
        violations.append("DUPLICATE_PICK")

    selected: dict[int, set[int]] = {}
    for selection in result.selections:
        qi = selection.question_index
        if not 0 <= qi < len(batch.candidates):
            violations.append("UNKNOWN_QUESTION")
            continue
        if len(selection.distractor_indices) != DISTRACTOR_PICKS:
            violations.append("PICK_COUNT")
        if len(set(selection.distractor_indices)) != len(selection.distractor_indices):
            violations.append("DUPLICATE_PICK")
        picks = set()
        for di in selection.distractor_indices:
            if not 0 <= di < len(batch.candidates[qi].distractors):
                violations.append("UNKNOWN_DISTRACTOR")
            else:
                picks.add(di)
        selected[qi] = picks

    for edit in result.edits:
        if edit.category not in EDIT_CATEGORIES:
            violations.append("EDIT_CATEGORY")
        if not edit.after.strip():
            violations.append("EMPTY_EDIT")
        target = edit.target
        if target.part not in EDIT_PARTS or target.question_index not in selected:
            violations.append("EDIT_TARGET")
            continue
        mcq = batch.candidates[target.question_index]
        if target.part == "distractor":
            if target.distractor_index not in selected[target.question_index]:
                violations.append("EDIT_TARGET")
                continue
            current = mcq.distractors[target.distractor_index]
        else:
            current = mcq.question if target.part == "question" else mcq.key
        if edit.before != current:
            violations.append("EDIT_BEFORE_MISMATCH")

    return violations


def _edited_text(edits: Sequence[Edit], target: EditTarget, original: str) -> str:
    for edit in edits:
        if edit.target == target:
            return edit.after
    return original


def export_quiz(batch: CurationBatch, result: CurationResult) -> dict:
    """Render the curated batch as the final three-question quiz.

    Each question carries four options (the key plus the three selected
    distractors, with edits applied) shuffled by a per-question seed derived
    from the batch seed, and the index of the key within the options.
    """
    questions = []
    for selection in result.selections:
        qi = selection.question_index
        mcq = batch.candidates[qi]
        question = _edited_text(result.edits, EditTarget(qi, "question"), mcq.question)
        key = _edited_text(result.edits, EditTarget(qi, "key"), mcq.key)
        entries = [(key, True)]
        for di in selection.distractor_indices:
            entries.append(
                (_edited_text(result.edits, EditTarget(qi, "distractor", di), mcq.distractors[di]), False)
            )
        random.Random(batch.seed * 1000 + qi).shuffle(entries)
        key_index = next(i for i, (_, is_key) in enumerate(entries) if is_key)
        questions.append(
            {
                "question": question,
                "options": [text for text, _ in entries],
                "key_index": key_index,
            }
        )
    return {"batch_id": batch.batch_id, "questions": questions}


# --- JSON wire/file schema ---------------------------------------------------


def mcq_to_dict(mcq: McQuestion) -> dict:
    return {"question": mcq.question, "key": mcq.key, "distractors": list(mcq.distractors)}


def mcq_from_dict(data: dict) -> McQuestion:
    try:
        return McQuestion(
            question=str(data["question"]),
            key=str(data["key"]),
            distractors=tuple(str(d) for d in data["distractors"]),
        )
    except KeyError as exc:
        raise DataFormatError(f"question entry is missing field {exc}") from exc


def batch_to_dict(batch: CurationBatch, curation: CurationResult | None = None) -> dict:
    payload = {
        "batch_id": batch.batch_id,
        "seed": batch.seed,
        "status": batch.status,
        "candidates": [mcq_to_dict(m) for m in batch.candidates],
    }
    payload["curation"] = result_to_dict(curation) if curation else None
    return payload


def batch_from_dict(data: dict) -> tuple[CurationBatch, CurationResult | None]:
    try:
        batch = CurationBatch(
            batch_id=str(data["batch_id"]),
            seed=int(data["seed"]),
            candidates=tuple(mcq_from_dict(m) for m in data["candidates"]),
            status=str(data["status"]),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise DataFormatError(f"invalid batch document: {exc}") from exc
    curation = data.get("curation")
    return batch, result_from_dict(curation) if curation else None


def result_to_dict(result: CurationResult) -> dict:
    return {
        "batch_id": result.batch_id,
        "selections": [
            {
                "question_index": s.question_index,
                "distractor_indices": list(s.distractor_indices),
            }
            for s in result.selections
        ],
        "edits": [
            {
                "target": {
                    "question_index": e.target.question_index,
                    "part": e.target.part,
                    "distractor_index": e.target.distractor_index,
                },
                "before": e.before,
                "after": e.after,
                "category": e.category,
            }
            for e in result.edits
        ],
    }


def result_from_dict(data: dict) -> CurationResult:
    try:
        selections = tuple(
            Selection(
                question_index=int(s["question_index"]),
                distractor_indices=tuple(int(i) for i in s["distractor_indices"]),
            )
            for s in data["selections"]
        )
        edits = tuple(
            Edit(
                target=EditTarget(
                    question_index=int(e["target"]["question_index"]),
                    part=str(e["target"]["part"]),
                    distractor_index=(
                        None
                        if e["target"].get("distractor_index") is None
                        else int(e["target"]["distractor_index"])
                    ),
                ),
                before=str(e["before"]),
                after=str(e["after"]),
                category=str(e["category"]),
            )
            for e in data.get("edits", [])
        )
        return CurationResult(
            batch_id=str(data["batch_id"]), selections=selections, edits=edits
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise DataFormatError(f"invalid curation document: {exc}") from exc


class BatchStore:
    """File-backed batch storage: one {batch_id}.json per batch.

    Writes go through a per-batch lock and an atomic replace, so concurrent
    curation attempts serialize instead of corrupting the file.
    """

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock(self, batch_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(batch_id, threading.Lock())

    def _path(self, batch_id: str) -> Path:
        if not batch_id or "/" in batch_id or batch_id.startswith("."):
            raise DataFormatError(f"invalid batch id {batch_id!r}")
        return self.data_dir / f"{batch_id}.json"

    def list_batches(self) -> list[dict]:
        out = []
        for path in sorted(self.data_dir.glob("*.json")):
            batch, _ = batch_from_dict(json.loads(path.read_text(encoding="utf-8")))
            out.append({"batch_id": batch.batch_id, "status": batch.status})
        return out

    def load(self, batch_id: str) -> tuple[CurationBatch, CurationResult | None]:
        path = self._path(batch_id)
        if not path.exists():
            raise UnknownBatchError(f"no batch {batch_id!r}")
        return batch_from_dict(json.loads(path.read_text(encoding="utf-8")))

    def save(self, batch: CurationBatch, curation: CurationResult | None = None) -> None:
        path = self._path(batch.batch_id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(batch_to_dict(batch, curation), indent=2), encoding="utf-8")
        tmp.replace(path)

    def submit_curation(self, batch_id: str, result: CurationResult) -> CurationBatch:
        """Validate, persist, and flip the batch to curated; open batches only."""
        with self._lock(batch_id):
            batch, _ = self.load(batch_id)
            if batch.status == STATUS_CURATED:
                raise AlreadyCuratedError(f"batch {batch_id!r} is already curated")
            violations = validate_curation(batch, result)
            if violations:
                raise CurationRejectedError(violations)
            curated = CurationBatch(
                batch_id=batch.batch_id,
                seed=batch.seed,
                candidates=batch.candidates,
                status=STATUS_CURATED,
            )
            self.save(curated, result)
            return curated

    def export(self, batch_id: str) -> dict:
        batch, curation = self.load(batch_id)
        if batch.status != STATUS_CURATED or curation is None:
            raise NotCuratedError(f"batch {batch_id!r} has not been curated yet")
        return export_quiz(batch, curation)
