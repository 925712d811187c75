"""Activation functions with exact derivatives and parity metadata.

Even kinds are evaluated through ``x*x`` or ``|x|`` so that
``kind.eval(x) == kind.eval(-x)`` holds bitwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KINDS = ("relu", "elu", "sigmoid", "tanh", "softplus", "seagull", "logpow", "square", "sine", "identity")
EVEN = frozenset({"seagull", "logpow", "square"})
ODD = frozenset({"sine"})
# derivative is discontinuous at 0 for these (logpow only when alpha <= 1 or eps > 0)
KINKED = frozenset({"relu", "elu", "logpow"})

DEFAULT_LOGPOW_EPS = 1e-2


@dataclass(frozen=True)
class ActivationKind:
    name: str
    alpha: float = 1.0
    eps: float = 0.0

    def __post_init__(self):
        if self.name not in KINDS:
            raise ValueError(f"unknown activation {self.name!r}; valid: {', '.join(KINDS)}")
        if self.name == "logpow":
            if not self.alpha > 0:
                raise ValueError(f"logpow needs alpha > 0, got {self.alpha}")
            if self.eps < 0:
                raise ValueError(f"logpow needs eps >= 0, got {self.eps}")
            if self.alpha < 1 and self.eps == 0:
                raise ValueError("logpow with alpha < 1 needs eps > 0 (gradient is unbounded at 0)")

    @property
    def is_even(self) -> bool:
        return self.name in EVEN

    @property
    def is_odd(self) -> bool:
        return self.name in ODD

    @property
    def label(self) -> str:
        """Canonical string form, accepted back by ``parse_activation``."""
        if self.name == "logpow":
            return f"logpow:{self.alpha!r}:{self.eps!r}"
        if self.name == "elu" and self.alpha != 1.0:
            return f"elu:{self.alpha!r}"
        return self.name

    def __str__(self) -> str:
        return self.label

    def eval(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = _EVAL[self.name](self, x)
        return float(out) if out.ndim == 0 else out

    def deriv(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = _DERIV[self.name](self, x)
        return float(out) if out.ndim == 0 else out


def _sigmoid(x):
    e = np.exp(-np.abs(x))
    return np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def _elu(k, x):
    return np.where(x >= 0, x, k.alpha * np.expm1(np.minimum(x, 0.0)))


def _logpow_base(k, x):
    return (np.abs(x) + k.eps) ** k.alpha


def _logpow_deriv(k, x):
    a = np.abs(x) + k.eps
    with np.errstate(divide="ignore", invalid="ignore"):
        d = k.alpha * a ** (k.alpha - 1.0) / (1.0 + a**k.alpha)
    return np.sign(x) * np.where(x == 0, 0.0, d)


_EVAL = {
    "relu": lambda k, x: np.maximum(x, 0.0),
    "elu": _elu,
    "sigmoid": lambda k, x: _sigmoid(x),
    "tanh": lambda k, x: np.tanh(x),
    "softplus": lambda k, x: np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x))),
    "seagull": lambda k, x: np.log1p(x * x),
    "logpow": lambda k, x: np.log1p(_logpow_base(k, x)),
    "square": lambda k, x: x * x,
    "sine": lambda k, x: np.sin(x),
    "identity": lambda k, x: x.copy(),
}

_DERIV = {
    "relu": lambda k, x: (x > 0).astype(np.float64),
    "elu": lambda k, x: np.where(x >= 0, 1.0, k.alpha * np.exp(np.minimum(x, 0.0))),
    "sigmoid": lambda k, x: _sigmoid(x) * _sigmoid(-x),
    "tanh": lambda k, x: 1.0 - np.tanh(x) ** 2,
    "softplus": lambda k, x: _sigmoid(x),
    "seagull": lambda k, x: 2.0 * x / (1.0 + x * x),
    "logpow": _logpow_deriv,
    "square": lambda k, x: 2.0 * x,
    "sine": lambda k, x: np.cos(x),
    "identity": lambda k, x: np.ones_like(x),
}

RELU = ActivationKind("relu")
ELU = ActivationKind("elu")
SIGMOID = ActivationKind("sigmoid")
TANH = ActivationKind("tanh")
SOFTPLUS = ActivationKind("softplus")
SEAGULL = ActivationKind("seagull")
SQUARE = ActivationKind("square")
SINE = ActivationKind("sine")
IDENTITY = ActivationKind("identity")


def logpow(alpha: float, eps: float | None = None) -> ActivationKind:
    """``log(1 + (|x| + eps)**alpha)``; eps defaults to 1e-2 when alpha < 1."""
    if eps is None:
        eps = DEFAULT_LOGPOW_EPS if alpha < 1 else 0.0
    return ActivationKind("logpow", alpha=float(alpha), eps=float(eps))


def parse_activation(text: str) -> ActivationKind:
    """Parse CLI/config names such as ``relu``, ``elu:0.5`` or ``logpow:1.5:0``."""
    parts = text.strip().lower().split(":")
    name, args = parts[0], parts[1:]
    try:
        if name == "logpow":
            if not 1 <= len(args) <= 2:
                raise ValueError("logpow takes logpow:<alpha>[:<eps>]")
            return logpow(float(args[0]), float(args[1]) if len(args) == 2 else None)
        if name == "elu" and args:
            return ActivationKind("elu", alpha=float(args[0]))
        if args:
            raise ValueError(f"{name} takes no parameters")
        return ActivationKind(name)
    except ValueError as exc:
        raise ValueError(f"invalid activation {text!r}: {exc}") from None


def is_even(kind: ActivationKind) -> bool:
    return kind.is_even
