"""RMSProp training with a halving step schedule."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from seagull import autodiff as ad
from seagull.datagen import Dataset
from seagull.network import Network, forward, predict


class TrainingDiverged(RuntimeError):
    def __init__(self, epoch: int, batch: int, value: float):
        super().__init__(f"non-finite loss {value!r} at epoch {epoch}, batch {batch}")
        self.epoch, self.batch, self.value = epoch, batch, value


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 500
    batch_size: int = 100
    lr0: float = 0.003
    halve_every: int = 100
    rmsprop_rho: float = 0.9
    rmsprop_eps: float = 1e-8
    loss: str = "mse"
    shuffle_seed: int = 0

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.batch_size < 1 or self.halve_every < 1:
            raise ValueError("batch_size and halve_every must be >= 1")
        if not self.lr0 > 0:
            raise ValueError("lr0 must be > 0")
        if not 0 < self.rmsprop_rho < 1:
            raise ValueError("rmsprop_rho must lie in (0, 1)")
        if not self.rmsprop_eps > 0:
            raise ValueError("rmsprop_eps must be > 0")
        if self.loss not in ("mse", "mae"):
            raise ValueError(f"loss must be 'mse' or 'mae', got {self.loss!r}")


@dataclass
class TrainReport:
    per_epoch: list[tuple[float, float]]
    final_test_mae: float | None
    best_test_mae: float | None
    config: dict
    seed: int
    wall_time: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["per_epoch"] = [list(p) for p in self.per_epoch]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> TrainReport:
        d = dict(d)
        d["per_epoch"] = [tuple(p) for p in d["per_epoch"]]
        return cls(**d)


def lr_at(config: TrainConfig, epoch: int) -> float:
    if not 0 <= epoch < config.epochs:
        raise ValueError(f"epoch {epoch} outside [0, {config.epochs})")
    return config.lr0 / 2 ** (epoch // config.halve_every)


def rmsprop_step(
    params: Sequence[np.ndarray],
    grads: Sequence[np.ndarray],
    state: Sequence[np.ndarray],
    lr: float,
    rho: float = 0.9,
    eps: float = 1e-8,
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """One RMSProp update; returns new (params, state) without touching the inputs."""
    if not len(params) == len(grads) == len(state):
        raise ValueError("params, grads and state must have the same length")
    new_p, new_v = [], []
    for p, g, v in zip(params, grads, state):
        if not p.shape == g.shape == v.shape:
            raise ValueError(f"shape mismatch: param {p.shape}, grad {g.shape}, state {v.shape}")
        v = rho * v + (1.0 - rho) * g * g
        new_v.append(v)
        new_p.append(p - lr * g / (np.sqrt(v) + eps))
    return new_p, new_v


def epoch_batches(n: int, batch_size: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Shuffled index batches covering ``range(n)`` once; the last may be short."""
    order = rng.permutation(n)
    return [order[lo : lo + batch_size] for lo in range(0, n, batch_size)]


def evaluate(net: Network, data: Dataset) -> float:
    """Test MAE over the whole dataset in one pass."""
    if len(data) < 1:
        raise ValueError("cannot evaluate on an empty dataset")
    return ad.mae_metric(predict(net, data.features), data.labels)


def batch_loss(net: Network, x: np.ndarray, y: np.ndarray, loss: str = "mse"):
    """Record forward + loss on a fresh tape; return (loss value, grads per parameter)."""
    with ad.Tape() as tape:
        params = [tape.watch(p) for p in net.parameters()]
        pred = ad.reshape(forward(net, ad.Tensor.wrap(x)), (len(y),))
        fn = ad.mse_loss if loss == "mse" else ad.mae_loss
        value = fn(pred, ad.Tensor.wrap(y))
        grads = ad.backward(value)
        return value.item(), [grads[p] for p in params]


def train(net: Network, train_set: Dataset, test_set: Dataset, config: TrainConfig) -> tuple[Network, TrainReport]:
    if train_set.features.shape[1] != net.spec.in_dim or test_set.features.shape[1] != net.spec.in_dim:
        raise ValueError(f"datasets must have {net.spec.in_dim} feature columns")
    start = time.perf_counter()
    rng = np.random.default_rng(config.shuffle_seed)
    params = [p.data for p in net.parameters()]
    state = [np.zeros_like(p) for p in params]
    n = len(train_set)
    history: list[tuple[float, float]] = []
    for epoch in range(config.epochs):
        lr = lr_at(config, epoch)
        total = 0.0
        for b, idx in enumerate(epoch_batches(n, config.batch_size, rng)):
            value, grads = batch_loss(net, train_set.features[idx], train_set.labels[idx], config.loss)
            if not math.isfinite(value):
                raise TrainingDiverged(epoch, b, value)
            total += value * len(idx)
            params, state = rmsprop_step(params, grads, state, lr, config.rmsprop_rho, config.rmsprop_eps)
            net = net.with_parameters([ad.Tensor.wrap(p) for p in params])
        history.append((total / n, evaluate(net, test_set)))
    maes = [m for _, m in history]
    report = TrainReport(
        per_epoch=history,
        final_test_mae=maes[-1] if maes else None,
        best_test_mae=min(maes) if maes else None,
        config=asdict(config),
        seed=config.shuffle_seed,
        wall_time=time.perf_counter() - start,
    )
    return net, report
