"""Dense float64 tensors with reverse-mode automatic differentiation.

The graph is define-by-run: each operation links its output to its inputs
together with a gradient rule, so every forward pass rebuilds the tape and
``backward`` replays it exactly once in reverse topological order.
Gradients accumulate across fan-out and land in the ``.grad`` buffers of
``requires_grad`` leaves. Everything is float64 and there is no implicit
broadcasting apart from scalar ``scale``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ArgumentError, DomainError, GraphError, MaskError, ShapeError

Array = np.ndarray


class Tensor:
    """A dense float64 array plus the bookkeeping needed for backprop.

    ``requires_grad`` marks trainable leaves; their ``.grad`` buffer is
    allocated eagerly and accumulated into by :func:`backward`. Outputs of
    operations instead carry parent links and a gradient rule.
    """

    __slots__ = ("data", "requires_grad", "grad", "_parents", "_rule", "_op")

    def __init__(self, values, requires_grad: bool = False):
        self.data: Array = np.ascontiguousarray(np.asarray(values, dtype=np.float64))
        self.requires_grad = requires_grad
        self.grad: Array | None = np.zeros_like(self.data) if requires_grad else None
        self._parents: tuple[Tensor, ...] = ()
        self._rule: Callable[[Array], Sequence[Array | None]] | None = None
        self._op = "leaf"

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return self.data.size

    def tracked(self) -> bool:
        """True if this tensor participates in differentiation."""
        return self.requires_grad or self._rule is not None

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeError(f"item() needs a single-element tensor, got shape {self.shape}")
        return float(self.data.reshape(-1)[0])

    def zero_grad(self) -> None:
        if self.grad is not None:
            self.grad.fill(0.0)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Tensor(shape={self.shape}, op={self._op!r}, requires_grad={self.requires_grad})"

    # Small operator surface so model code stays readable.
    def __add__(self, other: "Tensor") -> "Tensor":
        return add(self, other)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return sub(self, other)

    def __mul__(self, other):
        if isinstance(other, Tensor):
            return mul(self, other)
        return scale(self, float(other))

    def __rmul__(self, other):
        return scale(self, float(other))

    def __neg__(self) -> "Tensor":
        return scale(self, -1.0)

    def __matmul__(self, other: "Tensor") -> "Tensor":
        return matmul(self, other)


def _result(data: Array, parents: tuple[Tensor, ...], rule, op: str) -> Tensor:
    """Build an op output; constant-folds when no input is tracked."""
    out = Tensor.__new__(Tensor)
    out.data = data
    out.requires_grad = False
    out.grad = None
    if any(p.tracked() for p in parents):
        out._parents = parents
        out._rule = rule
    else:
        out._parents = ()
        out._rule = None
    out._op = op
    return out


def _check_same_shape(op: str, a: Tensor, b: Tensor) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"{op} expects equal shapes, got {a.shape} and {b.shape}")


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Matrix product of two rank-2 tensors; dC flows as dA = g·Bᵀ, dB = Aᵀ·g."""
    if a.data.ndim != 2 or b.data.ndim != 2:
        raise ShapeError(f"matmul expects rank-2 operands, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul inner dimensions disagree: {a.shape} @ {b.shape}")
    want_a, want_b = a.tracked(), b.tracked()
    adata, bdata = a.data, b.data

    def rule(g: Array):
        ga = g @ bdata.T if want_a else None
        gb = adata.T @ g if want_b else None
        return (ga, gb)

    return _result(adata @ bdata, (a, b), rule, "matmul")


def add(a: Tensor, b: Tensor) -> Tensor:
    _check_same_shape("add", a, b)
    return _result(a.data + b.data, (a, b), lambda g: (g, g), "add")


def sub(a: Tensor, b: Tensor) -> Tensor:
    _check_same_shape("sub", a, b)
    return _result(a.data - b.data, (a, b), lambda g: (g, -g), "sub")


def mul(a: Tensor, b: Tensor) -> Tensor:
    _check_same_shape("mul", a, b)
    want_a, want_b = a.tracked(), b.tracked()
    adata, bdata = a.data, b.data

    def rule(g: Array):
        return (g * bdata if want_a else None, g * adata if want_b else None)

    return _result(adata * bdata, (a, b), rule, "mul")


def scale(t: Tensor, c: float) -> Tensor:
    """Multiply by a python scalar; the one sanctioned broadcast."""
    c = float(c)
    return _result(t.data * c, (t,), lambda g: (g * c,), "scale")


def tanh(t: Tensor) -> Tensor:
    out = np.tanh(t.data)
    return _result(out, (t,), lambda g: (g * (1.0 - out * out),), "tanh")


def _stable_sigmoid(x: Array) -> Array:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def sigmoid(t: Tensor) -> Tensor:
    s = _stable_sigmoid(t.data)
    return _result(s, (t,), lambda g: (g * s * (1.0 - s),), "sigmoid")


def exp(t: Tensor) -> Tensor:
    out = np.exp(t.data)
    return _result(out, (t,), lambda g: (g * out,), "exp")


def log(t: Tensor) -> Tensor:
    if np.any(t.data <= 0.0):
        raise DomainError("log requires strictly positive inputs")
    data = t.data
    return _result(np.log(data), (t,), lambda g: (g / data,), "log")


def clamp(t: Tensor, lo: float, hi: float) -> Tensor:
    """Clip to [lo, hi]; gradient passes through wherever the input is inside."""
    data = t.data
    inside = (data >= lo) & (data <= hi)
    return _result(np.clip(data, lo, hi), (t,), lambda g: (g * inside,), "clamp")


def softmax_masked(logits: Tensor, mask) -> Tensor:
    """Softmax over a vector restricted to unmasked positions.

    Masked positions come out exactly zero; unmasked ones are positive and
    sum to one. Stabilized by subtracting the unmasked maximum.
    """
    if logits.data.ndim != 1:
        raise ShapeError(f"softmax_masked expects a vector, got shape {logits.shape}")
    m = np.asarray(mask, dtype=bool)
    if m.shape != logits.shape:
        raise ShapeError(f"mask shape {m.shape} does not match logits shape {logits.shape}")
    if not m.any():
        raise MaskError("softmax_masked: every position is masked")
    z = logits.data
    e = np.zeros_like(z)
    e[m] = np.exp(z[m] - z[m].max())
    s = e / e.sum()

    def rule(g: Array):
        # Masked entries of s are zero, so they drop out of both terms.
        return (s * (g - float(np.dot(g, s))),)

    return _result(s, (logits,), rule, "softmax_masked")


def concat(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    """Concatenate along one axis; backward splits the gradient by extents."""
    if not tensors:
        raise ShapeError("concat needs at least one tensor")
    ndim = tensors[0].data.ndim
    if axis < 0 or axis >= ndim:
        raise ShapeError(f"concat axis {axis} out of range for rank-{ndim} tensors")
    base = list(tensors[0].shape)
    for t in tensors[1:]:
        other = list(t.shape)
        if len(other) != ndim or [d for i, d in enumerate(other) if i != axis] != [
            d for i, d in enumerate(base) if i != axis
        ]:
            raise ShapeError(f"concat shapes incompatible off axis {axis}: {tensors[0].shape} vs {t.shape}")
    sizes = [t.shape[axis] for t in tensors]

    def rule(g: Array):
        pieces = []
        offset = 0
        for size in sizes:
            sl = [slice(None)] * g.ndim
            sl[axis] = slice(offset, offset + size)
            pieces.append(g[tuple(sl)])
            offset += size
        return pieces

    data = np.concatenate([t.data for t in tensors], axis=axis)
    return _result(data, tuple(tensors), rule, "concat")


def transpose(t: Tensor) -> Tensor:
    if t.data.ndim != 2:
        raise ShapeError(f"transpose expects a rank-2 tensor, got shape {t.shape}")
    return _result(np.ascontiguousarray(t.data.T), (t,), lambda g: (g.T,), "transpose")


def reshape(t: Tensor, shape: tuple[int, ...]) -> Tensor:
    if int(np.prod(shape)) != t.size:
        raise ShapeError(f"cannot reshape {t.shape} into {shape}")
    orig = t.shape
    return _result(t.data.reshape(shape), (t,), lambda g: (g.reshape(orig),), "reshape")


def narrow(t: Tensor, axis: int, start: int, length: int) -> Tensor:
    """Contiguous slice along one axis; backward scatters into zeros."""
    if axis < 0 or axis >= t.data.ndim:
        raise ShapeError(f"narrow axis {axis} out of range for shape {t.shape}")
    if start < 0 or length < 1 or start + length > t.shape[axis]:
        raise ShapeError(f"narrow [{start}:{start + length}] out of bounds on axis {axis} of {t.shape}")
    sl = [slice(None)] * t.data.ndim
    sl[axis] = slice(start, start + length)
    sl = tuple(sl)
    shape = t.shape

    def rule(g: Array):
        full = np.zeros(shape, dtype=np.float64)
        full[sl] = g
        return (full,)

    return _result(np.ascontiguousarray(t.data[sl]), (t,), rule, "narrow")


def tsum(t: Tensor) -> Tensor:
    """Sum of all elements, as a 0-d scalar tensor."""
    shape = t.shape
    return _result(
        np.asarray(t.data.sum(), dtype=np.float64),
        (t,),
        lambda g: (np.full(shape, float(g)),),
        "sum",
    )


def backward(loss: Tensor) -> None:
    """Reverse-mode sweep from a scalar seed into all requires_grad leaves.

    Each reachable node is visited exactly once; fan-out contributions are
    summed before a node's own rule fires.
    """
    if loss.data.size != 1:
        raise GraphError(f"backward seed must be a scalar, got shape {loss.shape}")
    seed = np.ones_like(loss.data)
    if loss._rule is None:
        if loss.requires_grad:
            loss.grad += seed
        return

    topo: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(loss, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            topo.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node._parents:
            if p._rule is not None and id(p) not in seen:
                stack.append((p, False))

    grads: dict[int, Array] = {id(loss): seed}
    for node in reversed(topo):
        g = grads.pop(id(node), None)
        if g is None:
            continue
        for parent, gp in zip(node._parents, node._rule(g)):
            if gp is None:
                continue
            if parent._rule is None:
                if parent.requires_grad:
                    parent.grad += gp
            else:
                acc = grads.get(id(parent))
                grads[id(parent)] = gp if acc is None else acc + gp


@dataclass
class GradCheckReport:
    """Outcome of comparing analytic gradients against central differences."""

    step: float
    tolerance: float
    rel_errors: list[Array]          # per input, per element
    max_rel_errors: list[float]      # per input
    max_rel_error: float

    @property
    def passed(self) -> bool:
        return self.max_rel_error < self.tolerance


def grad_check(
    f: Callable[..., Tensor],
    inputs: Sequence[Tensor],
    step: float = 1e-5,
    tolerance: float = 1e-6,
) -> GradCheckReport:
    """Gradient-check a deterministic scalar function of the given tensors.

    Relative error per element is |analytic - numeric| / max(1e-8,
    |analytic| + |numeric|), numeric being the central difference with the
    given step. Report-only: never raises on mismatch.
    """
    for t in inputs:
        if not t.requires_grad:
            raise ArgumentError("grad_check inputs must have requires_grad=True")
        t.zero_grad()
    loss = f(*inputs)
    if loss.size != 1:
        raise GraphError(f"grad_check target must be scalar, got shape {loss.shape}")
    backward(loss)
    analytic = [np.array(t.grad, copy=True) for t in inputs]

    rel_errors: list[Array] = []
    for t, ana in zip(inputs, analytic):
        flat_err = np.zeros(t.size)
        flat = t.data.reshape(-1)
        for j in range(t.size):
            orig = flat[j]
            flat[j] = orig + step
            fp = f(*inputs).item()
            flat[j] = orig - step
            fm = f(*inputs).item()
            flat[j] = orig
            numeric = (fp - fm) / (2.0 * step)
            a = ana.reshape(-1)[j]
            flat_err[j] = abs(a - numeric) / max(1e-8, abs(a) + abs(numeric))
        rel_errors.append(flat_err.reshape(t.shape))

    max_per_input = [float(e.max()) for e in rel_errors]
    return GradCheckReport(
        step=step,
        tolerance=tolerance,
        rel_errors=rel_errors,
        max_rel_errors=max_per_input,
        max_rel_error=max(max_per_input) if max_per_input else 0.0,
    )
