"""Length-normalized beam search and ancestral sampling over a pluggable scorer.

A scorer maps (input token ids, generated prefix ids) to a length-V vector
of next-token log-probabilities; every call is checked to sum to one in
probability space. Beam search ranks completed hypotheses by
logprob / |y|^alpha, where |y| counts emitted tokens including EOS, and a
hypothesis completes at EOS or at max_len. Sampling draws tokens
independently with temperature scaling and is deterministic per seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ScorerError

#: (input_ids, prefix_ids) -> length-V log-probability vector.
Scorer = Callable[[Sequence[int], Sequence[int]], np.ndarray]

_LOGPROB_TOL = 1e-9


@dataclass(frozen=True)
class DecodeConfig:
    """Decoder settings. max_len defaults to 128 for combined question-answer
    outputs; distractor sampling uses 64."""

    beams: int = 8
    alpha: float = 0.9
    max_len: int = 128
    temperature: float = 1.0

    def __post_init__(self):
        if self.beams < 1:
            raise ValueError("beams must be a positive integer")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.max_len < 1:
            raise ValueError("max_len must be a positive integer")
        if self.temperature <= 0:
            raise ValueError("temperature must be > 0")


def _checked_log_probs(
    scorer: Scorer, input_ids: Sequence[int], prefix: Sequence[int]
) -> np.ndarray:
    log_probs = np.asarray(scorer(input_ids, prefix), dtype=float)
    if log_probs.ndim != 1 or log_probs.shape[0] == 0:
        raise ScorerError("scorer must return a 1-D vector over the vocabulary")
    peak = np.max(log_probs)
    if peak == -np.inf:
        raise ScorerError("scorer assigned zero probability to every token")
    lse = peak + math.log(np.exp(log_probs - peak).sum())
    if abs(lse) > _LOGPROB_TOL:
        raise ScorerError(f"scorer log-probabilities sum to exp({lse}), not 1")
    return log_probs


def _normalized(logprob: float, length: int, alpha: float) -> float:
    return logprob / (length**alpha) if length > 0 else logprob


def beam_search(
    scorer: Scorer, input_ids: Sequence[int], config: DecodeConfig, *, eos_id: int
) -> list[int]:
    """Return the best decoded sequence (EOS stripped).

    Keeps `beams` open hypotheses pruned by cumulative log-probability (all
    open hypotheses share a length, so this matches normalized pruning) and
    lets completed hypotheses compete with open ones: the search stops once
    no open hypothesis can still beat the best completed score. Ties in the
    final ranking break to the lexicographically smallest token-id sequence.
    """
    best_score = -np.inf
    best_ids: tuple[int, ...] | None = None

    def consider(logprob: float, ids: tuple[int, ...]) -> None:
        nonlocal best_score, best_ids
        score = _normalized(logprob, len(ids), config.alpha)
        if score > best_score or (score == best_score and (best_ids is None or ids < best_ids)):
            best_score = score
            best_ids = ids

    open_hyps: list[tuple[float, tuple[int, ...]]] = [(0.0, ())]
    for depth in range(config.max_len):
        candidates: list[tuple[float, tuple[int, ...]]] = []
        for logprob, ids in open_hyps:
            log_probs = _checked_log_probs(scorer, input_ids, ids)
            for token, token_lp in enumerate(log_probs):
                if token_lp == -np.inf:
                    continue
                candidates.append((logprob + float(token_lp), ids + (token,)))
        # EOS continuations compete for beam slots like any other token; the
        # ones that win a slot retire into the completed pool. At beams=1
        # this collapses to greedy argmax decoding.
        candidates.sort(key=lambda c: (-c[0], c[1]))
        open_hyps = []
        for logprob, ids in candidates[: config.beams]:
            if ids[-1] == eos_id:
                consider(logprob, ids)
            else:
                open_hyps.append((logprob, ids))
        if not open_hyps:
            break
        if depth + 1 == config.max_len:
            # Hypotheses that reached max_len complete by truncation.
            for logprob, ids in open_hyps:
                consider(logprob, ids)
            break
        # An open hypothesis can only lose log-probability and can normalize
        # by at most max_len^alpha, so this bounds its best reachable score.
        bound = max(
            _normalized(logprob, config.max_len, config.alpha) for logprob, _ in open_hyps
        )
        if bound < best_score:
            break

    if best_ids is None:
        return []
    return [t for t in best_ids if t != eos_id]


def sample(
    scorer: Scorer,
    input_ids: Sequence[int],
    config: DecodeConfig,
    seed: int,
    *,
    eos_id: int,
) -> list[int]:
    """Ancestral sampling with temperature; stops at EOS or max_len."""
    rng = random.Random(seed)
    out: list[int] = []
    for _ in range(config.max_len):
        log_probs = _checked_log_probs(scorer, input_ids, out)
        scaled = log_probs / config.temperature
        scaled = scaled - np.max(scaled)
        probs = np.exp(scaled)
        probs /= probs.sum()
        token = _draw(rng, probs)
        if token == eos_id:
            break
        out.append(token)
    return out


def _draw(rng: random.Random, probs: np.ndarray) -> int:
    r = rng.random()
    acc = 0.0
    last_nonzero = 0
    for i, p in enumerate(probs):
        if p > 0.0:
            last_nonzero = i
            acc += p
            if r < acc:
                return i
    return last_nonzero


def sample_candidates(
    scorer: Scorer,
    input_ids: Sequence[int],
    k: int,
    config: DecodeConfig,
    seed: int,
    *,
    eos_id: int,
) -> list[list[int]]:
    """Oversample 4k independent sequences using derived seeds seed..seed+4k-1.

    Duplicates are allowed at this stage; deduplication happens during
    distractor selection.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return [
        sample(scorer, input_ids, config, seed + i, eos_id=eos_id) for i in range(4 * k)
    ]
