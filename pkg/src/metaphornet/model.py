"""BiLSTM encoder, multi-head attention pooling and sigmoid decoder.

The forward path per example: each token's frozen embedding row feeds a
bidirectional LSTM; per attention head, every encoder state is scored by a
learned row vector plus bias, the scores are softmax-normalized over the
token axis and used to weight-sum the states into a per-head context; the
head contexts are concatenated, projected, and decoded by a single affine
+ sigmoid into a metaphoricity score.

Vectors are column matrices throughout ([d, 1]), so scalar parameters have
shape [1, 1] and biases [d, 1].
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import tensor as T
from .errors import ArgumentError, CorruptionError, MaskError, ShapeError
from .tensor import Tensor

EncoderStates = list  # one [2H x 1] tensor per token


@dataclass(frozen=True)
class ModelConfig:
    embed_dim: int = 1024
    lstm_hidden: int = 256
    heads: int = 4
    context_dim: int | None = None  # defaults to 2 * lstm_hidden
    seed: int = 0

    def __post_init__(self):
        if self.context_dim is None:
            object.__setattr__(self, "context_dim", 2 * self.lstm_hidden)
        for name in ("embed_dim", "lstm_hidden", "heads", "context_dim"):
            if getattr(self, name) < 1:
                raise ArgumentError(f"{name} must be positive, got {getattr(self, name)}")


_GATES = ("i", "f", "o", "g")


def param_shapes(config: ModelConfig) -> dict[str, tuple[int, int]]:
    """Named parameter shapes, in checkpoint serialization order."""
    d, h_dim = config.embed_dim, config.lstm_hidden
    shapes: dict[str, tuple[int, int]] = {}
    for direction in ("fwd", "bwd"):
        for gate in _GATES:
            shapes[f"{direction}_w_{gate}"] = (h_dim, d + h_dim)
        for gate in _GATES:
            shapes[f"{direction}_b_{gate}"] = (h_dim, 1)
    for j in range(config.heads):
        shapes[f"attn_w_{j}"] = (1, 2 * h_dim)
        shapes[f"attn_b_{j}"] = (1, 1)
    shapes["out_w"] = (config.context_dim, config.heads * 2 * h_dim)
    shapes["out_b"] = (config.context_dim, 1)
    shapes["dec_w"] = (1, config.context_dim)
    shapes["dec_b"] = (1, 1)
    return shapes


class ModelParams:
    """All trainable weights; iteration order is the checkpoint order."""

    def __init__(self, config: ModelConfig, tensors: dict[str, Tensor]):
        expected = param_shapes(config)
        if set(tensors) != set(expected):
            missing = sorted(set(expected) - set(tensors))
            surplus = sorted(set(tensors) - set(expected))
            raise ArgumentError(f"parameter names mismatch (missing {missing}, surplus {surplus})")
        for name, shape in expected.items():
            if tensors[name].shape != shape:
                raise ShapeError(f"parameter {name}: expected shape {shape}, got {tensors[name].shape}")
        self.config = config
        self._tensors = {name: tensors[name] for name in expected}  # fixed order

    def __getitem__(self, name: str) -> Tensor:
        return self._tensors[name]

    def named(self) -> list[tuple[str, Tensor]]:
        return list(self._tensors.items())

    def zero_grad(self) -> None:
        for t in self._tensors.values():
            t.zero_grad()

    def clone(self) -> "ModelParams":
        return ModelParams(
            self.config,
            {name: Tensor(t.data.copy(), requires_grad=True) for name, t in self._tensors.items()},
        )


def init_params(config: ModelConfig) -> ModelParams:
    """Glorot-uniform weights, zero biases, LSTM forget-gate bias 1.0."""
    rng = np.random.default_rng(config.seed)
    tensors: dict[str, Tensor] = {}
    for name, shape in param_shapes(config).items():
        if "_w" in name:
            rows, cols = shape
            bound = np.sqrt(6.0 / (rows + cols))
            data = rng.uniform(-bound, bound, size=shape)
        elif name.endswith("_b_f"):
            data = np.ones(shape)
        else:
            data = np.zeros(shape)
        tensors[name] = Tensor(data, requires_grad=True)
    return ModelParams(config, tensors)


def _lstm_direction(xs, order, params: ModelParams, prefix: str, h_dim: int):
    """Run one LSTM direction over xs[order]; returns position -> state."""
    w_all = T.concat([params[f"{prefix}_w_{g}"] for g in _GATES], axis=0)
    b_all = T.concat([params[f"{prefix}_b_{g}"] for g in _GATES], axis=0)
    h = Tensor(np.zeros((h_dim, 1)))
    c = Tensor(np.zeros((h_dim, 1)))
    states: dict[int, Tensor] = {}
    for t in order:
        z = T.add(T.matmul(w_all, T.concat([xs[t], h], axis=0)), b_all)
        gate_i = T.sigmoid(T.narrow(z, 0, 0, h_dim))
        gate_f = T.sigmoid(T.narrow(z, 0, h_dim, h_dim))
        gate_o = T.sigmoid(T.narrow(z, 0, 2 * h_dim, h_dim))
        gate_g = T.tanh(T.narrow(z, 0, 3 * h_dim, h_dim))
        c = T.add(T.mul(gate_f, c), T.mul(gate_i, gate_g))
        h = T.mul(gate_o, T.tanh(c))
        states[t] = h
    return states


def bilstm_forward(embeddings: Tensor, params: ModelParams, mask=None) -> EncoderStates:
    """Encode [n x d_in] embeddings into n states of shape [2H x 1].

    A mask marks real tokens; masked positions are skipped by both
    directions (their state is zero and never seen by the recurrences), so
    padding cannot leak into real-token states.
    """
    config = params.config
    if embeddings.data.ndim != 2 or embeddings.shape[1] != config.embed_dim:
        raise ShapeError(
            f"expected embeddings [n x {config.embed_dim}], got shape {embeddings.shape}"
        )
    n = embeddings.shape[0]
    live = list(range(n)) if mask is None else [t for t in range(n) if mask[t]]
    if not live:
        raise MaskError("bilstm_forward: every token is masked")
    h_dim = config.lstm_hidden
    xs = {t: T.transpose(T.narrow(embeddings, 0, t, 1)) for t in live}
    fwd = _lstm_direction(xs, live, params, "fwd", h_dim)
    bwd = _lstm_direction(xs, list(reversed(live)), params, "bwd", h_dim)
    zero = Tensor(np.zeros((2 * h_dim, 1)))
    states: EncoderStates = []
    for t in range(n):
        if t in fwd:
            states.append(T.concat([fwd[t], bwd[t]], axis=0))
        else:
            states.append(zero)
    return states


@dataclass
class AttentionOutput:
    weights: np.ndarray        # [heads x n], detached values for inspection
    head_contexts: list        # per head, [2H x 1] tensors
    context: Tensor            # [d_c x 1]


def attention_pool(states: EncoderStates, params: ModelParams, mask=None) -> AttentionOutput:
    """Multi-head attention pooling of encoder states into one context vector.

    Per head j: logit_i = w_j · x_i + b_j, weights = softmax over unmasked
    i, head context = sum_i weight_i * x_i. Head contexts are concatenated
    and affinely projected to the context vector.
    """
    config = params.config
    n = len(states)
    if n < 1:
        raise ShapeError("attention_pool needs at least one state")
    mask_arr = np.ones(n, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    if not mask_arr.any():
        raise MaskError("attention_pool: every position is masked")
    stacked = T.concat(list(states), axis=1)  # [2H x n]
    weight_rows: list[np.ndarray] = []
    head_contexts = []
    for j in range(config.heads):
        scores = T.matmul(params[f"attn_w_{j}"], stacked)  # [1 x n]
        bias_row = T.concat([params[f"attn_b_{j}"]] * n, axis=1)
        logits = T.reshape(T.add(scores, bias_row), (n,))
        weights = T.softmax_masked(logits, mask_arr)
        head_contexts.append(T.matmul(stacked, T.reshape(weights, (n, 1))))  # [2H x 1]
        weight_rows.append(weights.data.copy())
    merged = T.concat(head_contexts, axis=0)  # [h*2H x 1]
    context = T.add(T.matmul(params["out_w"], merged), params["out_b"])
    return AttentionOutput(np.stack(weight_rows), head_contexts, context)


def decode(context: Tensor, params: ModelParams) -> Tensor:
    """Affine + sigmoid metaphoricity score, shape [1 x 1], strictly in (0, 1)."""
    return T.sigmoid(T.add(T.matmul(params["dec_w"], context), params["dec_b"]))


@dataclass
class ModelOutput:
    score: Tensor              # [1 x 1]
    attention: AttentionOutput


def model_forward(embeddings: Tensor, params: ModelParams, mask=None) -> ModelOutput:
    states = bilstm_forward(embeddings, params, mask=mask)
    attention = attention_pool(states, params, mask=mask)
    return ModelOutput(decode(attention.context, params), attention)


# --- checkpoint I/O ---------------------------------------------------------
#
# Layout: one JSON header line {"config": {...}, "seed": int, "epoch": int},
# then raw little-endian float32 blocks, one per parameter, in the exact
# order of param_shapes(config).

def save_checkpoint(path, params: ModelParams, epoch: int) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {"config": asdict(params.config), "seed": params.config.seed, "epoch": epoch}
    with path.open("wb") as fh:
        fh.write((json.dumps(header) + "\n").encode("utf-8"))
        for _, t in params.named():
            fh.write(t.data.astype("<f4").tobytes(order="C"))


def load_checkpoint(path) -> tuple[ModelParams, int]:
    path = Path(path)
    blob = path.read_bytes()
    nl = blob.find(b"\n")
    if nl < 0:
        raise CorruptionError(f"{path}: missing checkpoint header line")
    try:
        header = json.loads(blob[:nl].decode("utf-8"))
        config = ModelConfig(**header["config"])
        epoch = int(header["epoch"])
    except (ValueError, KeyError, TypeError) as exc:
        raise CorruptionError(f"{path}: invalid checkpoint header ({exc})") from exc
    offset = nl + 1
    tensors: dict[str, Tensor] = {}
    for name, shape in param_shapes(config).items():
        nbytes = 4 * shape[0] * shape[1]
        if offset + nbytes > len(blob):
            raise CorruptionError(f"{path}: truncated block for parameter {name!r} at byte {offset}")
        arr = np.frombuffer(blob[offset : offset + nbytes], dtype="<f4").astype(np.float64)
        tensors[name] = Tensor(arr.reshape(shape), requires_grad=True)
        offset += nbytes
    if offset != len(blob):
        raise CorruptionError(f"{path}: {len(blob) - offset} unexpected trailing bytes")
    return ModelParams(config, tensors), epoch
