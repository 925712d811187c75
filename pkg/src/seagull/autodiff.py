"""Dense float64 tensors with a reverse-mode tape.

Tensors are immutable values. Differentiation is opt-in: open a ``Tape``,
``watch`` the parameters, run the forward computation with the ops in this
module, then call ``backward`` on the scalar loss. Ops record themselves only
when at least one input is already known to the active tape.

    with Tape() as tape:
        w = tape.watch(w)
        loss = mse_loss(reshape(matmul(x, w), (n,)), y)
    grads = backward(loss)
    grads[w]
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from seagull.activations import ActivationKind


class DimensionError(ValueError):
    pass


class Tensor:
    """Read-only row-major float64 array with a shape."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64, order="C")
        if arr.ndim == 0:
            arr = arr.reshape(())
        arr.setflags(write=False)
        self.data = arr

    @classmethod
    def wrap(cls, arr: np.ndarray) -> Tensor:
        """Adopt ``arr`` without copying. Caller must not mutate it afterwards."""
        t = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.float64)
        arr.setflags(write=False)
        t.data = arr
        return t

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        if self.data.size != 1:
            raise DimensionError(f"item() on tensor of shape {self.shape}")
        return float(self.data.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        return self.data

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, data={self.data!r})"


@dataclass
class Node:
    tensor: Tensor
    inputs: tuple[int, ...]
    # maps the output adjoint to one adjoint per input
    vjp: Callable[[np.ndarray], tuple[np.ndarray, ...]] | None
    op: str


_ACTIVE: list[Tape] = []


@dataclass
class Tape:
    """Append-only record of primitive ops. Single owner, not thread-safe."""

    nodes: list[Node] = field(default_factory=list)
    adjoints: list[np.ndarray | None] = field(default_factory=list)
    _index: dict[int, int] = field(default_factory=dict)

    def __enter__(self) -> Tape:
        _ACTIVE.append(self)
        return self

    def __exit__(self, *exc) -> None:
        _ACTIVE.remove(self)

    def watch(self, t: Tensor) -> Tensor:
        if id(t) not in self._index:
            self._push(t, (), None, "leaf")
        return t

    def node_of(self, t: Tensor) -> int | None:
        return self._index.get(id(t))

    def _push(self, t, inputs, vjp, op) -> None:
        self._index[id(t)] = len(self.nodes)
        self.nodes.append(Node(t, inputs, vjp, op))

    def reset(self) -> None:
        self.nodes.clear()
        self.adjoints.clear()
        self._index.clear()

    def adjoint(self, t: Tensor) -> np.ndarray:
        i = self.node_of(t)
        if i is None:
            raise KeyError("tensor is not recorded on this tape")
        g = self.adjoints[i] if i < len(self.adjoints) else None
        return np.zeros(t.shape) if g is None else g


def active_tape() -> Tape | None:
    return _ACTIVE[-1] if _ACTIVE else None


def _record(out: np.ndarray, inputs: Sequence[Tensor], vjp, op: str) -> Tensor:
    t = Tensor.wrap(out)
    tape = active_tape()
    if tape is None:
        return t
    ids = tuple(tape.node_of(x) for x in inputs)
    if all(i is None for i in ids):
        return t
    # untracked inputs become constant leaves so every node has concrete inputs
    resolved = []
    for x, i in zip(inputs, ids):
        if i is None:
            tape._push(x, (), None, "const")
            i = len(tape.nodes) - 1
        resolved.append(i)
    tape._push(t, tuple(resolved), vjp, op)
    return t


def _as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


# -- primitives ---------------------------------------------------------------


def matmul(a: Tensor, b: Tensor) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    if a.data.ndim != 2 or b.data.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul: cannot multiply {a.shape} by {b.shape}")
    A, B = a.data, b.data
    return _record(A @ B, (a, b), lambda g: (g @ B.T, A.T @ g), "matmul")


def transpose(a: Tensor) -> Tensor:
    a = _as_tensor(a)
    if a.data.ndim != 2:
        raise DimensionError(f"transpose expects a matrix, got {a.shape}")
    return _record(a.data.T.copy(), (a,), lambda g: (g.T,), "transpose")


def add_bias(x: Tensor, b: Tensor) -> Tensor:
    x, b = _as_tensor(x), _as_tensor(b)
    if x.data.ndim != 2 or b.data.ndim != 1 or x.shape[1] != b.shape[0]:
        raise DimensionError(f"add_bias: cannot broadcast bias {b.shape} over {x.shape}")
    return _record(x.data + b.data, (x, b), lambda g: (g, g.sum(axis=0)), "add_bias")


def add(a: Tensor, b: Tensor) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    if a.shape != b.shape:
        raise DimensionError(f"add: shapes {a.shape} and {b.shape} differ")
    return _record(a.data + b.data, (a, b), lambda g: (g, g), "add")


def mul(a: Tensor, b: Tensor) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    if a.shape != b.shape:
        raise DimensionError(f"mul: shapes {a.shape} and {b.shape} differ")
    A, B = a.data, b.data
    return _record(A * B, (a, b), lambda g: (g * B, g * A), "mul")


def scale(a: Tensor, c: float) -> Tensor:
    a = _as_tensor(a)
    c = float(c)
    return _record(a.data * c, (a,), lambda g: (g * c,), "scale")


def reshape(a: Tensor, shape: tuple[int, ...]) -> Tensor:
    a = _as_tensor(a)
    src = a.shape
    try:
        out = a.data.reshape(shape)
    except ValueError as exc:
        raise DimensionError(f"reshape: cannot view {src} as {shape}") from exc
    return _record(out.copy(), (a,), lambda g: (g.reshape(src),), "reshape")


def sum_all(a: Tensor) -> Tensor:
    a = _as_tensor(a)
    src = a.shape
    return _record(np.array(a.data.sum()), (a,), lambda g: (np.broadcast_to(g, src).copy(),), "sum")


def apply_activation(x: Tensor, kind: ActivationKind) -> Tensor:
    x = _as_tensor(x)
    X = x.data
    return _record(kind.eval(X), (x,), lambda g: (g * kind.deriv(X),), kind.name)


def _check_pair(pred: Tensor, target: Tensor, name: str) -> None:
    if pred.data.ndim != 1 or pred.shape != target.shape:
        raise DimensionError(f"{name}: expected equal 1-d shapes, got {pred.shape} and {target.shape}")
    if pred.size == 0:
        raise ValueError(f"{name}: empty input")


def mse_loss(pred: Tensor, target: Tensor) -> Tensor:
    pred, target = _as_tensor(pred), _as_tensor(target)
    _check_pair(pred, target, "mse_loss")
    n = pred.size
    diff = pred.data - target.data
    out = np.array(np.dot(diff, diff) / n)
    return _record(out, (pred, target), lambda g: (g * 2.0 * diff / n, -g * 2.0 * diff / n), "mse")


def mae_loss(pred: Tensor, target: Tensor) -> Tensor:
    """Differentiable MAE (subgradient 0 at ties). Only used for MAE-loss training."""
    pred, target = _as_tensor(pred), _as_tensor(target)
    _check_pair(pred, target, "mae_loss")
    n = pred.size
    diff = pred.data - target.data
    s = np.sign(diff)
    out = np.array(np.abs(diff).sum() / n)
    return _record(out, (pred, target), lambda g: (g * s / n, -g * s / n), "mae")


def mae_metric(pred, target) -> float:
    """Mean absolute error, evaluation only (never recorded)."""
    p = np.asarray(pred.data if isinstance(pred, Tensor) else pred, dtype=np.float64)
    t = np.asarray(target.data if isinstance(target, Tensor) else target, dtype=np.float64)
    if p.shape != t.shape:
        raise DimensionError(f"mae_metric: shapes {p.shape} and {t.shape} differ")
    if p.size == 0:
        raise ValueError("mae_metric: empty input")
    return float(np.abs(p - t).sum() / p.size)


# -- reverse sweep ------------------------------------------------------------


class Gradients:
    """Adjoints keyed by tensor identity."""

    def __init__(self, tape: Tape):
        self._tape = tape

    def __getitem__(self, t: Tensor) -> np.ndarray:
        return self._tape.adjoint(t)

    def __contains__(self, t: Tensor) -> bool:
        return self._tape.node_of(t) is not None


def backward(loss: Tensor, tape: Tape | None = None) -> Gradients:
    tape = tape or active_tape()
    if tape is None or tape.node_of(loss) is None:
        raise ValueError("loss was not produced on an active tape")
    if loss.size != 1:
        raise DimensionError(f"backward needs a scalar loss, got shape {loss.shape}")
    root = tape.node_of(loss)
    adj: list[np.ndarray | None] = [None] * len(tape.nodes)
    adj[root] = np.ones(loss.shape)
    for i in range(root, -1, -1):
        g = adj[i]
        node = tape.nodes[i]
        if g is None or node.vjp is None:
            continue
        for j, gj in zip(node.inputs, node.vjp(g)):
            adj[j] = gj if adj[j] is None else adj[j] + gj
    tape.adjoints = adj
    return Gradients(tape)
