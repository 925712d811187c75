"""Symmetry diagnostics for 9-input models and the exact sin(xy) network."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable, Union

import numpy as np

from seagull import autodiff as ad
from seagull.activations import RELU, SEAGULL, SINE, SQUARE, ActivationKind
from seagull.datagen import sample_domain, split_points, join_points
from seagull.network import (
    BENCHMARK_DIMS,
    LayerSpec,
    Network,
    NetworkSpec,
    build,
    mlp_spec,
    predict,
)

Model = Union[Network, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class SymmetryReport:
    n_samples: int
    exchange_gap: tuple[float, float]
    trivial_gap: tuple[float, float]
    evenness_gap: tuple[float, float]
    seed: int
    domain: str

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> SymmetryReport:
        d = dict(d)
        for k in ("exchange_gap", "trivial_gap", "evenness_gap"):
            d[k] = tuple(d[k])
        return cls(**d)


def _as_callable(model: Model) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(model, Network):
        if model.spec.in_dim != 9:
            raise ValueError(f"symmetry diagnostics need a 9-input model, got {model.spec.in_dim}")
        return lambda x: predict(model, x)
    return model


def _stats(gap: np.ndarray) -> tuple[float, float]:
    return float(gap.mean()), float(gap.max())


def measure_symmetry(model: Model, n: int = 1000, seed: int = 0, domain: str = "cube") -> SymmetryReport:
    """Mean/max of |f(u,v,w) - f(v,u,w)|, |f(u,v,w) - f(m,m,w)| with m = (u+v)/2, and |f(x) - f(-x)|."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    f = _as_callable(model)
    x = sample_domain(domain, n, seed)
    u, v, w = split_points(x)
    m = 0.5 * (u + v)
    base = np.asarray(f(x), dtype=np.float64)
    swapped = np.asarray(f(join_points(v, u, w)), dtype=np.float64)
    trivial = np.asarray(f(join_points(m, m, w)), dtype=np.float64)
    mirrored = np.asarray(f(-x), dtype=np.float64)
    return SymmetryReport(
        n_samples=n,
        exchange_gap=_stats(np.abs(base - swapped)),
        trivial_gap=_stats(np.abs(base - trivial)),
        evenness_gap=_stats(np.abs(base - mirrored)),
        seed=seed,
        domain=domain,
    )


def make_sinxy_network() -> Network:
    """(x, y) -> (x+y, x-y) -> squares -> (sq1 - sq2)/4 = xy -> sin."""
    spec = NetworkSpec(
        (
            LayerSpec(2, 2, SQUARE, has_bias=False),
            LayerSpec(2, 1, SINE, has_bias=False),
        )
    )
    w1 = ad.Tensor([[1.0, 1.0], [1.0, -1.0]])
    w2 = ad.Tensor([[0.25, -0.25]])
    return Network(spec, (w1, w2), (None, None))


def even_first_layer_network(seed: int, first: ActivationKind = SEAGULL, hidden: ActivationKind = RELU) -> Network:
    """Benchmark-shaped network whose first layer has no bias and the given activation."""
    return build(mlp_spec(BENCHMARK_DIMS, hidden=hidden, first=first, first_bias=False), seed)


def tie_exchange_columns(net: Network) -> Network:
    """Copy the first-layer weights acting on u onto those acting on v.

    The first layer then sees u and v only through u + v, so the whole
    network is exactly invariant under swapping them.
    """
    w = net.weights[0].data.copy()
    w[:, 3:6] = w[:, 0:3]
    return Network(net.spec, (ad.Tensor.wrap(w),) + net.weights[1:], net.biases)
