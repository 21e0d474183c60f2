"""Distractor candidate selection: oversample, deduplicate, spread out.

Candidates come from sampling a closed-book answer predictor on the question
text alone. Selection first removes exact duplicates of the key or of each
other (case-insensitive, trimmed), then greedily picks the candidate whose
minimum distance to the already-chosen options (key included) is largest:
the standard farthest-point rule, with cosine distance over pluggable text
embeddings.
"""

from __future__ import annotations

import json
import subprocess
import zlib
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .decoding import DecodeConfig, Scorer, sample_candidates
from .errors import DataFormatError, InsufficientCandidatesError
from .toy_model import Vocab

#: text -> L2-normalized embedding vector.
Embedder = Callable[[str], np.ndarray]

#: (embedding, embedding) -> non-negative distance.
Distance = Callable[[np.ndarray, np.ndarray], float]


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    """1 - dot product; assumes unit (or zero) vectors."""
    return 1.0 - float(np.dot(a, b))


def embed_char_trigrams(text: str, d: int = 256) -> np.ndarray:
    """Deterministic character-trigram hashing embedding, L2-normalized.

    The lowercased text is padded with boundary markers, each trigram is
    hashed into one of d buckets, and the count vector is normalized.
    Returns the zero vector when the padded text has no trigram.
    """
    padded = "^" + text.lower() + "$"
    vec = np.zeros(d)
    for i in range(len(padded) - 2):
        trigram = padded[i : i + 3]
        vec[zlib.crc32(trigram.encode("utf-8")) % d] += 1.0
    norm = np.linalg.norm(vec)
    if norm > 0:
        vec /= norm
    return vec


class CommandEmbedder:
    """Adapter for an external embedding service: text on stdin, JSON vector
    on stdout. The returned vector is re-normalized defensively."""

    def __init__(self, command: str):
        self.command = command

    def __call__(self, text: str) -> np.ndarray:
        proc = subprocess.run(
            [self.command],
            input=text.encode("utf-8"),
            capture_output=True,
            check=True,
        )
        try:
            vec = np.asarray(json.loads(proc.stdout.decode("utf-8")), dtype=float)
        except (ValueError, json.JSONDecodeError) as exc:
            raise DataFormatError(f"embedder command returned invalid JSON: {exc}") from exc
        norm = np.linalg.norm(vec)
        return vec / norm if norm > 0 else vec


def _normalize_text(text: str) -> str:
    return text.strip().lower()


@dataclass(frozen=True)
class McQuestion:
    """A multiple-choice question: question text, correct key, distractors."""

    question: str
    key: str
    distractors: tuple[str, ...]

    def __post_init__(self):
        seen = {_normalize_text(self.key)}
        for distractor in self.distractors:
            norm = _normalize_text(distractor)
            if norm in seen:
                raise ValueError(f"distractor {distractor!r} duplicates the key or another distractor")
            seen.add(norm)


def select_distractors(
    key: str,
    candidates: Sequence[str],
    k: int,
    embedder: Embedder = embed_char_trigrams,
    distance: Distance = cosine_distance,
) -> list[str]:
    """Greedy farthest-point selection of k distractors from the candidates.

    After the exact-duplicate pre-filter, each iteration picks the candidate
    maximizing the minimum distance to everything already chosen, key
    included; ties break to the lowest surviving-candidate index. Raises
    InsufficientCandidatesError when fewer than k candidates survive.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    seen = {_normalize_text(key)}
    survivors: list[str] = []
    for candidate in candidates:
        norm = _normalize_text(candidate)
        if norm in seen:
            continue
        seen.add(norm)
        survivors.append(candidate)
    if len(survivors) < k:
        raise InsufficientCandidatesError(survivors=len(survivors), required=k)
    if k == 0:
        return []

    embeddings = [embedder(c) for c in survivors]
    key_embedding = embedder(key)
    min_dist = np.array([distance(key_embedding, e) for e in embeddings])
    chosen: list[str] = []
    for _ in range(k):
        pick = int(np.argmax(min_dist))
        chosen.append(survivors[pick])
        picked_embedding = embeddings[pick]
        min_dist[pick] = -np.inf
        for j in range(len(survivors)):
            if min_dist[j] != -np.inf:
                min_dist[j] = min(min_dist[j], distance(embeddings[j], picked_embedding))
    return chosen


def build_mcq(
    question: str,
    key: str,
    scorer: Scorer,
    vocab: Vocab,
    k: int,
    config: DecodeConfig,
    seed: int,
    embedder: Embedder = embed_char_trigrams,
) -> McQuestion:
    """Sample 4k answer candidates from the question text alone and select k.

    The scorer only ever sees the question tokens, never the key or the
    source passage.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    question_ids = vocab.ids(question.split())
    candidate_ids = sample_candidates(
        scorer, question_ids, k, config, seed, eos_id=vocab.eos_id
    )
    candidates = [" ".join(vocab.tokens(ids)) for ids in candidate_ids]
    distractors = select_distractors(key, candidates, k, embedder)
    return McQuestion(question=question, key=key, distractors=tuple(distractors))
