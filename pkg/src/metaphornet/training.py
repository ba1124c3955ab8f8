"""Binary cross-entropy objective, Adam, and the mini-batch training loop.

Batching is per-example: each sentence in a batch runs its own forward
pass, the losses are summed into one scalar, and a single backward +
optimizer step follows. Shuffling reseeds every epoch from
``seed + epoch`` so runs are reproducible end to end.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import tensor as T
from .data import Dataset, Example
from .embeddings import EmbeddingSet, validate_coverage
from .errors import ArgumentError, CoverageError, ShapeError
from .model import ModelConfig, ModelParams, init_params, model_forward
from .tensor import Tensor

SCORE_CLAMP = 1e-7  # keeps log() away from 0 and 1


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.00003
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    batch_size: int = 16
    epochs: int = 50
    seed: int = 0
    clip_norm: float | None = None  # off by default

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ArgumentError(f"learning_rate must be positive, got {self.learning_rate}")
        if not (0.0 <= self.beta1 < 1.0) or not (0.0 <= self.beta2 < 1.0):
            raise ArgumentError("beta1/beta2 must lie in [0, 1)")
        if self.batch_size < 1 or self.epochs < 1:
            raise ArgumentError("batch_size and epochs must be at least 1")


def bce_loss(score: Tensor, label: int) -> Tensor:
    """-[y ln s + (1-y) ln(1-s)] with s clamped to [1e-7, 1 - 1e-7]."""
    if label not in (0, 1):
        raise ArgumentError(f"label must be 0 or 1, got {label!r}")
    clamped = T.clamp(score, SCORE_CLAMP, 1.0 - SCORE_CLAMP)
    if label == 1:
        return T.scale(T.log(clamped), -1.0)
    one = Tensor(np.ones_like(clamped.data))
    return T.scale(T.log(T.sub(one, clamped)), -1.0)


@dataclass
class OptimizerState:
    """Adam first/second moment buffers plus the step counter."""

    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    t: int = 0

    @classmethod
    def fresh(cls, params: ModelParams) -> "OptimizerState":
        return cls(
            m={name: np.zeros_like(p.data) for name, p in params.named()},
            v={name: np.zeros_like(p.data) for name, p in params.named()},
        )


def adam_step(params: ModelParams, state: OptimizerState, config: TrainConfig) -> None:
    """One Adam update, in place, from the gradients stored on the parameters."""
    state.t += 1
    b1, b2 = config.beta1, config.beta2
    bias1 = 1.0 - b1 ** state.t
    bias2 = 1.0 - b2 ** state.t
    if config.clip_norm is not None:
        total = np.sqrt(sum(float((p.grad ** 2).sum()) for _, p in params.named()))
        if total > config.clip_norm and total > 0.0:
            factor = config.clip_norm / total
            for _, p in params.named():
                p.grad *= factor
    for name, p in params.named():
        g = p.grad
        if g.shape != state.m[name].shape:
            raise ShapeError(f"gradient for {name} has shape {g.shape}, expected {state.m[name].shape}")
        state.m[name] = b1 * state.m[name] + (1.0 - b1) * g
        state.v[name] = b2 * state.v[name] + (1.0 - b2) * g * g
        m_hat = state.m[name] / bias1
        v_hat = state.v[name] / bias2
        p.data -= config.learning_rate * m_hat / (np.sqrt(v_hat) + config.epsilon)


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    mean_loss: float
    train_accuracy: float
    seconds: float


TrainHistory = list  # of EpochRecord


@dataclass
class TrainResult:
    params: ModelParams
    history: TrainHistory = field(default_factory=list)


def classify(score: float) -> int:
    """Decision rule: metaphor iff score >= 0.5 (boundary inclusive)."""
    return 1 if score >= 0.5 else 0


@dataclass(frozen=True)
class Prediction:
    id: str
    label: int
    score: float


def _embedding_tensor(embeddings: EmbeddingSet, example: Example) -> Tensor:
    mat = embeddings.vectors.get(example.id)
    if mat is None:
        raise CoverageError(f"no embedding for example {example.id!r}")
    return Tensor(mat)


def predict(params: ModelParams, embeddings: EmbeddingSet, example: Example) -> Prediction:
    score = model_forward(_embedding_tensor(embeddings, example), params).score.item()
    return Prediction(example.id, classify(score), score)


def train(
    dataset: Dataset,
    embeddings: EmbeddingSet,
    model_config: ModelConfig,
    train_config: TrainConfig,
    log=None,
) -> TrainResult:
    """Train a fresh model; deterministic for fixed config seeds."""
    coverage = validate_coverage(embeddings, dataset)
    if coverage.missing or coverage.mismatched:
        raise CoverageError(coverage.describe())

    params = init_params(model_config)
    state = OptimizerState.fresh(params)
    history: TrainHistory = []
    examples = dataset.examples
    inputs = {ex.id: Tensor(embeddings.vectors[ex.id]) for ex in examples}

    for epoch in range(1, train_config.epochs + 1):
        started = time.perf_counter()
        order = np.random.default_rng(train_config.seed + epoch).permutation(len(examples))
        loss_sum = 0.0
        correct = 0
        for begin in range(0, len(order), train_config.batch_size):
            batch = [examples[i] for i in order[begin : begin + train_config.batch_size]]
            batch_loss = None
            for ex in batch:
                out = model_forward(inputs[ex.id], params)
                if classify(out.score.item()) == ex.label:
                    correct += 1
                loss = bce_loss(out.score, ex.label)
                batch_loss = loss if batch_loss is None else T.add(batch_loss, loss)
            loss_sum += batch_loss.item()
            T.backward(batch_loss)
            adam_step(params, state, train_config)
            params.zero_grad()
        record = EpochRecord(
            epoch=epoch,
            mean_loss=loss_sum / len(examples),
            train_accuracy=correct / len(examples),
            seconds=time.perf_counter() - started,
        )
        history.append(record)
        if log is not None:
            log(record)
    return TrainResult(params, history)


def write_history_csv(history: TrainHistory, path) -> None:
    from pathlib import Path

    lines = ["epoch,mean_loss,train_accuracy,seconds"]
    for rec in history:
        lines.append(f"{rec.epoch},{rec.mean_loss:.6f},{rec.train_accuracy:.6f},{rec.seconds:.3f}")
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
