"""Experiment grids, presets and seed derivation."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

from seagull.activations import ELU, RELU, SIGMOID, SOFTPLUS, TANH, ActivationKind
from seagull.datagen import NoiseSpec, TargetKind, TransformKind
from seagull.optim import TrainConfig


def derive_seed(*parts) -> int:
    """Stable 63-bit seed: first 8 bytes of BLAKE2b over the ':'-joined parts.

    Does not depend on Python's hash randomization or on numpy's version, so
    archives stay comparable across releases.
    """
    digest = hashlib.blake2b(":".join(str(p) for p in parts).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") & (2**63 - 1)


@dataclass(frozen=True)
class RunSpec:
    """Everything needed to reproduce one training run."""

    target: TargetKind = TargetKind.TRIANGLE_AREA
    transform: TransformKind = TransformKind.IDENTITY
    activation: ActivationKind = RELU
    seagull_first: bool = False
    train_n: int = 10_000
    test_n: int = 2_000
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    train: TrainConfig = field(default_factory=TrainConfig)
    seed: int = 0
    symmetry_n: int = 1_000
    cell_index: int = 0
    run_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "target", TargetKind(self.target))
        object.__setattr__(self, "transform", TransformKind(self.transform))
        if self.train_n < 1 or self.test_n < 1 or self.symmetry_n < 1:
            raise ValueError("train_n, test_n and symmetry_n must be >= 1")

    @property
    def key(self) -> str:
        return f"{self.cell_index}:{self.run_index}:{int(self.seagull_first)}"


@dataclass(frozen=True)
class Cell:
    index: int
    target: TargetKind
    transform: TransformKind
    activation: ActivationKind
    train_n: int


@dataclass(frozen=True)
class ExperimentPlan:
    name: str = "custom"
    targets: tuple[tuple[TargetKind, TransformKind], ...] = ((TargetKind.TRIANGLE_AREA, TransformKind.IDENTITY),)
    activations: tuple[ActivationKind, ...] = (RELU,)
    seagull_replace: tuple[bool, ...] = (False, True)
    runs_per_cell: int = 5
    train_sizes: tuple[int, ...] = (10_000,)
    test_n: int = 2_000
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    train: TrainConfig = field(default_factory=TrainConfig)
    base_seed: int = 0
    symmetry_n: int = 1_000

    def __post_init__(self):
        object.__setattr__(
            self, "targets", tuple((TargetKind(t), TransformKind(f)) for t, f in self.targets)
        )
        for name in ("activations", "seagull_replace", "train_sizes"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.runs_per_cell < 1:
            raise ValueError("runs_per_cell must be >= 1")
        if not self.targets or not self.activations or not self.seagull_replace or not self.train_sizes:
            raise ValueError("plan grid has an empty axis")
        if any(n < 1 for n in self.train_sizes) or self.test_n < 1:
            raise ValueError("dataset sizes must be >= 1")

    def cells(self) -> list[Cell]:
        out = []
        for n in self.train_sizes:
            for target, transform in self.targets:
                for act in self.activations:
                    out.append(Cell(len(out), target, transform, act, n))
        return out

    def run_specs(self) -> list[RunSpec]:
        """One spec per (cell, run, seagull flag).

        The seed depends on (base_seed, cell, run) only, so the baseline and
        its Seagull partner share data, initial weights and shuffling.
        """
        specs = []
        for cell in self.cells():
            for run in range(self.runs_per_cell):
                seed = derive_seed(self.base_seed, cell.index, run)
                for flag in self.seagull_replace:
                    specs.append(
                        RunSpec(
                            target=cell.target,
                            transform=cell.transform,
                            activation=cell.activation,
                            seagull_first=flag,
                            train_n=cell.train_n,
                            test_n=self.test_n,
                            noise=self.noise,
                            train=self.train,
                            seed=seed,
                            symmetry_n=self.symmetry_n,
                            cell_index=cell.index,
                            run_index=run,
                        )
                    )
        return specs


ALL_TRANSFORMS = tuple(TransformKind)
TABLE_ACTIVATIONS = (RELU, ELU, SIGMOID, TANH, SOFTPLUS)
MINI_TRAIN = TrainConfig(epochs=150, halve_every=30)
NOISY = NoiseSpec(enabled=True, relative_sigma=0.05)


def _area(transforms):
    return tuple((TargetKind.TRIANGLE_AREA, t) for t in transforms)


PRESETS: dict[str, ExperimentPlan] = {
    "table1": ExperimentPlan(name="table1", targets=_area(ALL_TRANSFORMS), activations=TABLE_ACTIVATIONS),
    "table2": ExperimentPlan(
        name="table2", targets=_area(ALL_TRANSFORMS), activations=TABLE_ACTIVATIONS, noise=NOISY
    ),
    "solid-angle": ExperimentPlan(
        name="solid-angle",
        targets=((TargetKind.SOLID_ANGLE_PIECEWISE, TransformKind.IDENTITY),),
        activations=(RELU,),
        train_sizes=(10_000, 50_000),
    ),
    "table1-mini": ExperimentPlan(
        name="table1-mini",
        targets=_area((TransformKind.IDENTITY, TransformKind.LOG1P)),
        activations=(RELU, TANH, SOFTPLUS),
        runs_per_cell=3,
        train=MINI_TRAIN,
    ),
    "table2-mini": ExperimentPlan(
        name="table2-mini",
        targets=_area((TransformKind.IDENTITY, TransformKind.LOG1P)),
        activations=(RELU, TANH, SOFTPLUS),
        runs_per_cell=3,
        train=MINI_TRAIN,
        noise=NOISY,
    ),
    "solid-angle-mini": ExperimentPlan(
        name="solid-angle-mini",
        targets=((TargetKind.SOLID_ANGLE_PIECEWISE, TransformKind.IDENTITY),),
        activations=(RELU,),
        runs_per_cell=3,
        train=MINI_TRAIN,
    ),
}


def preset(name: str, **overrides) -> ExperimentPlan:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; valid: {', '.join(PRESETS)}")
    return replace(PRESETS[name], **overrides)
