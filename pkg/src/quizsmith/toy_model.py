"""A tiny linear conditional sequence model with hand-derived gradients.

The model predicts the next token from a bag-of-words encoding of the input
plus the previous output token:

    logits = U @ mean_onehot(input) + W @ onehot(prev) + b

It is linear in its parameters, so the teacher-forcing cross-entropy loss is
convex and the analytic gradients can be checked exactly against finite
differences. This stands in for a full encoder-decoder wherever a training
strategy or decoder needs a real differentiable model at desk scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataFormatError, UnknownTokenError

PAD = "<pad>"
BOS = "<bos>"
EOS = "<eos>"
RESERVED = (PAD, BOS, EOS)


@dataclass(frozen=True)
class Vocab:
    """Ordered symbol table; PAD, BOS, and EOS must be present."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("vocab symbols must be unique")
        for token in RESERVED:
            if token not in self.symbols:
                raise ValueError(f"vocab must contain {token}")
        if len(self.symbols) < 4:
            raise ValueError("vocab must have at least 4 symbols")
        object.__setattr__(
            self, "_index", {symbol: i for i, symbol in enumerate(self.symbols)}
        )

    @classmethod
    def build(cls, content_symbols: Sequence[str]) -> "Vocab":
        """Reserved symbols first, then the content symbols in given order."""
        seen = list(RESERVED)
        for symbol in content_symbols:
            if symbol not in seen:
                seen.append(symbol)
        return cls(symbols=tuple(seen))

    @property
    def size(self) -> int:
        return len(self.symbols)

    @property
    def pad_id(self) -> int:
        return self._index[PAD]

    @property
    def bos_id(self) -> int:
        return self._index[BOS]

    @property
    def eos_id(self) -> int:
        return self._index[EOS]

    def id(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise UnknownTokenError(f"token {symbol!r} is not in the vocabulary")

    def ids(self, symbols: Sequence[str]) -> list[int]:
        return [self.id(symbol) for symbol in symbols]

    def tokens(self, ids: Sequence[int]) -> list[str]:
        out = []
        for i in ids:
            if not 0 <= i < len(self.symbols):
                raise UnknownTokenError(f"token id {i} is out of range")
            out.append(self.symbols[i])
        return out


@dataclass(frozen=True)
class ModelParams:
    """Input-context weights U, previous-token weights W, and bias b.

    Also used as the container for gradients, which share the shapes.
    """

    u: np.ndarray
    w: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        v = self.b.shape[0]
        if self.u.shape != (v, v) or self.w.shape != (v, v) or self.b.shape != (v,):
            raise ValueError("parameter shapes must be (V, V), (V, V), (V,)")
        for array in (self.u, self.w, self.b):
            if not np.all(np.isfinite(array)):
                raise ValueError("parameters must be finite")

    @property
    def size(self) -> int:
        return self.b.shape[0]


def zero_params(vocab_size: int) -> ModelParams:
    return ModelParams(
        u=np.zeros((vocab_size, vocab_size)),
        w=np.zeros((vocab_size, vocab_size)),
        b=np.zeros(vocab_size),
    )


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits)
    exp = np.exp(shifted)
    return exp / exp.sum()


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits)
    return shifted - np.log(np.exp(shifted).sum())


def _check_ids(ids: Sequence[int], vocab_size: int) -> None:
    for i in ids:
        if not 0 <= i < vocab_size:
            raise UnknownTokenError(f"token id {i} is out of range for V={vocab_size}")


def mean_onehot(input_ids: Sequence[int], vocab_size: int) -> np.ndarray:
    """Mean of one-hot input vectors; the zero vector for empty input."""
    _check_ids(input_ids, vocab_size)
    x = np.zeros(vocab_size)
    if input_ids:
        for i in input_ids:
            x[i] += 1.0
        x /= len(input_ids)
    return x


def forward_logits(
    params: ModelParams, input_ids: Sequence[int], prev_id: int
) -> np.ndarray:
    """Next-token logits given the input bag and the previous output token."""
    _check_ids([prev_id], params.size)
    x_bar = mean_onehot(input_ids, params.size)
    return params.u @ x_bar + params.w[:, prev_id] + params.b


def token_losses(
    params: ModelParams,
    vocab: Vocab,
    input_ids: Sequence[int],
    target_ids: Sequence[int],
) -> np.ndarray:
    """Per-position teacher-forcing cross-entropy losses.

    The target must end with EOS; position 0 conditions on BOS.
    """
    if not target_ids or target_ids[-1] != vocab.eos_id:
        raise ValueError("target must be non-empty and end with EOS")
    _check_ids(target_ids, params.size)
    losses = np.empty(len(target_ids))
    prev = vocab.bos_id
    for t, target in enumerate(target_ids):
        logp = log_softmax(forward_logits(params, input_ids, prev))
        losses[t] = -logp[target]
        prev = target
    return losses


def gradients(
    params: ModelParams,
    vocab: Vocab,
    batch: Sequence[tuple[Sequence[int], Sequence[int], float]],
) -> ModelParams:
    """Analytic gradient of the weighted summed token loss over a batch.

    Each batch entry is (input_ids, target_ids, weight); the loss being
    differentiated is sum over entries of weight * sum of token losses.
    """
    v = params.size
    du = np.zeros((v, v))
    dw = np.zeros((v, v))
    db = np.zeros(v)
    for input_ids, target_ids, weight in batch:
        if not np.isfinite(weight):
            raise ValueError("batch weights must be finite")
        if weight == 0.0:
            continue
        if not target_ids or target_ids[-1] != vocab.eos_id:
            raise ValueError("target must be non-empty and end with EOS")
        _check_ids(target_ids, v)
        x_bar = mean_onehot(input_ids, v)
        prev = vocab.bos_id
        for target in target_ids:
            probs = softmax(forward_logits(params, input_ids, prev))
            dlogits = probs.copy()
            dlogits[target] -= 1.0
            dlogits *= weight
            du += np.outer(dlogits, x_bar)
            dw[:, prev] += dlogits
            db += dlogits
            prev = target
    return ModelParams(u=du, w=dw, b=db)


def sgd_step(params: ModelParams, grads: ModelParams, learning_rate: float) -> ModelParams:
    if learning_rate <= 0:
        raise ValueError("learning_rate must be positive")
    return ModelParams(
        u=params.u - learning_rate * grads.u,
        w=params.w - learning_rate * grads.w,
        b=params.b - learning_rate * grads.b,
    )


def as_scorer(params: ModelParams, vocab: Vocab):
    """Wrap the model as a next-token log-probability scorer for decoding."""

    def score(input_ids: Sequence[int], prefix_ids: Sequence[int]) -> np.ndarray:
        prev = prefix_ids[-1] if prefix_ids else vocab.bos_id
        return log_softmax(forward_logits(params, input_ids, prev))

    return score


# --- checkpoint serialization ------------------------------------------------


def save_model(vocab: Vocab, params: ModelParams, path: str | Path) -> None:
    """Write vocab and row-major parameter matrices as one flat JSON object."""
    payload = {
        "symbols": list(vocab.symbols),
        "u": params.u.ravel().tolist(),
        "w": params.w.ravel().tolist(),
        "b": params.b.tolist(),
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_model(path: str | Path) -> tuple[Vocab, ModelParams]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        vocab = Vocab(symbols=tuple(payload["symbols"]))
        v = vocab.size
        params = ModelParams(
            u=np.array(payload["u"], dtype=float).reshape(v, v),
            w=np.array(payload["w"], dtype=float).reshape(v, v),
            b=np.array(payload["b"], dtype=float),
        )
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise DataFormatError(f"invalid model checkpoint {path}: {exc}") from exc
    return vocab, params
