"""Multi-reference training strategies built around the minimum reference loss.

Every training example carries several equally-correct reference outputs.
The minimum-reference strategy computes teacher-forcing losses for all of
them each step, picks the reference with the smallest length-normalized
summed loss, and backpropagates through that reference only. Selection is
recomputed every step, never cached. Baseline strategies flatten the
references instead: DISAGGREGATE shuffles single-reference examples each
epoch, SAMPLE_ONE fixes one reference per example up front.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .toy_model import ModelParams, Vocab, gradients, sgd_step, token_losses


class Strategy(enum.Enum):
    DISAGGREGATE = "DISAGGREGATE"
    SAMPLE_ONE = "SAMPLE_ONE"
    MIN_REF = "MIN_REF"
    MIN_REF_UNNORM = "MIN_REF_UNNORM"


@dataclass(frozen=True)
class LossMatrix:
    """R x T per-token losses with the true token length of each row.

    Positions at or beyond a row's length are padding and must hold exact
    zeros, so row sums equal the true per-reference losses.
    """

    values: np.ndarray
    lengths: tuple[int, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 2:
            raise ValueError("values must be a 2-D matrix")
        r, t = values.shape
        if len(self.lengths) != r:
            raise ValueError("lengths must have one entry per row")
        for length in self.lengths:
            if not 1 <= length <= t:
                raise ValueError("row lengths must satisfy 1 <= l <= T")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("losses must be finite and non-negative")
        for i, length in enumerate(self.lengths):
            if np.any(values[i, length:] != 0.0):
                raise ValueError("padding positions must be exactly zero")

    @property
    def num_references(self) -> int:
        return self.values.shape[0]


def min_ref_loss(matrix: LossMatrix) -> tuple[float, int]:
    """Minimum over references of the length-normalized summed token loss.

    Returns (loss, selected reference index); ties break to the lowest index.
    """
    if matrix.num_references == 0:
        raise ValueError("loss matrix has no references")
    normalized = matrix.values.sum(axis=1) / np.array(matrix.lengths, dtype=float)
    selected = int(np.argmin(normalized))
    return float(normalized[selected]), selected


def min_ref_loss_unnorm(matrix: LossMatrix) -> tuple[float, int]:
    """Minimum of the raw summed token losses, without length normalization."""
    if matrix.num_references == 0:
        raise ValueError("loss matrix has no references")
    sums = matrix.values.sum(axis=1)
    selected = int(np.argmin(sums))
    return float(sums[selected]), selected


@dataclass(frozen=True)
class TrainExample:
    """One input with its reference outputs (token ids, EOS excluded)."""

    example_id: str
    input_ids: tuple[int, ...]
    references: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.references:
            raise ValueError("an example needs at least one reference")


def pack_batches(
    examples: Sequence[TrainExample], batch_size: int, seed: int | None = None
) -> list[list[TrainExample]]:
    """Group whole examples into batches of at most batch_size reference rows.

    All references of an example always land in the same batch. A seed
    shuffles the example order first; None preserves it.
    """
    order = list(examples)
    if seed is not None:
        random.Random(seed).shuffle(order)
    batches: list[list[TrainExample]] = []
    current: list[TrainExample] = []
    rows = 0
    for example in order:
        r = len(example.references)
        if r > batch_size:
            raise ValueError(
                f"example {example.example_id} has {r} references, "
                f"over batch_size {batch_size}"
            )
        if rows + r > batch_size:
            batches.append(current)
            current, rows = [], 0
        current.append(example)
        rows += r
    if current:
        batches.append(current)
    return batches


def loss_matrix_for(
    params: ModelParams, vocab: Vocab, example: TrainExample
) -> LossMatrix:
    """Teacher-forcing loss matrix of an example, one row per reference.

    EOS is appended to each reference, so row lengths count it; shorter rows
    are zero-padded to the longest.
    """
    rows = [
        token_losses(params, vocab, example.input_ids, list(ref) + [vocab.eos_id])
        for ref in example.references
    ]
    lengths = tuple(len(row) for row in rows)
    t = max(lengths)
    values = np.zeros((len(rows), t))
    for i, row in enumerate(rows):
        values[i, : len(row)] = row
    return LossMatrix(values=values, lengths=lengths)


@dataclass(frozen=True)
class StepTrace:
    step: int
    example_id: str
    selected_ref: int
    loss: float


@dataclass(frozen=True)
class TrainResult:
    params: ModelParams
    trace: tuple[StepTrace, ...]


def train(
    strategy: Strategy,
    params: ModelParams,
    vocab: Vocab,
    examples: Sequence[TrainExample],
    steps: int,
    learning_rate: float,
    seed: int,
) -> TrainResult:
    """Run single-example SGD steps under the given multi-reference strategy.

    One step visits one scheduling unit: a whole example for the min-loss
    strategies (all its references scored, gradient through the selected one
    only, weighted 1/l for the normalized variant and 1 otherwise), or one
    (example, reference) pair for the flattened baselines, which use the
    standard 1/l mean-loss weighting. Units are reshuffled every epoch;
    everything is deterministic for a fixed seed.
    """
    if not examples:
        raise ValueError("corpus must be non-empty")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rng = random.Random(seed)

    if strategy in (Strategy.MIN_REF, Strategy.MIN_REF_UNNORM):
        units: list[tuple[TrainExample, int | None]] = [(ex, None) for ex in examples]
    elif strategy is Strategy.DISAGGREGATE:
        units = [(ex, i) for ex in examples for i in range(len(ex.references))]
    elif strategy is Strategy.SAMPLE_ONE:
        units = [(ex, rng.randrange(len(ex.references))) for ex in examples]
    else:
        raise ValueError(f"unknown strategy {strategy}")

    trace: list[StepTrace] = []
    schedule: list[tuple[TrainExample, int | None]] = []
    for step in range(1, steps + 1):
        if not schedule:
            schedule = list(units)
            rng.shuffle(schedule)
        example, fixed_ref = schedule.pop(0)

        if strategy in (Strategy.MIN_REF, Strategy.MIN_REF_UNNORM):
            matrix = loss_matrix_for(params, vocab, example)
            if strategy is Strategy.MIN_REF:
                loss, selected = min_ref_loss(matrix)
                weight = 1.0 / matrix.lengths[selected]
            else:
                loss, selected = min_ref_loss_unnorm(matrix)
                weight = 1.0
        else:
            selected = fixed_ref
            target = list(example.references[selected]) + [vocab.eos_id]
            losses = token_losses(params, vocab, example.input_ids, target)
            loss = float(losses.sum() / len(losses))
            weight = 1.0 / len(losses)

        target = list(example.references[selected]) + [vocab.eos_id]
        grads = gradients(params, vocab, [(example.input_ids, target, weight)])
        params = sgd_step(params, grads, learning_rate)
        trace.append(
            StepTrace(step=step, example_id=example.example_id, selected_ref=selected, loss=loss)
        )

    return TrainResult(params=params, trace=tuple(trace))
