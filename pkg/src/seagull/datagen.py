"""Synthetic 9-d regression data: three points u, v, w in R^3 per row.

Columns 0-2 are u, 3-5 are v, 6-8 are w. Targets are symmetric under
swapping u and v, and are not functions of the midpoint (u+v)/2 alone.
"""

from __future__ import annotations

import csv
import enum
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

CUBE_HALF_WIDTH = 2.0
UNIT_TOL = 1e-9


class TargetKind(str, enum.Enum):
    TRIANGLE_AREA = "triangle-area"
    SOLID_ANGLE_PIECEWISE = "solid-angle"
    SOLID_ANGLE_STANDARD = "solid-angle-standard"

    @property
    def domain(self) -> str:
        return "cube" if self is TargetKind.TRIANGLE_AREA else "sphere"


class TransformKind(str, enum.Enum):
    IDENTITY = "identity"
    LOG1P = "log1p"
    EXP_DIV100 = "exp-div100"
    SIN = "sin"
    SQRT_RATIO = "sqrt-ratio"

    @property
    def formula(self) -> str:
        return _FORMULAS[self]


_FORMULAS = {
    TransformKind.IDENTITY: "f(x)",
    TransformKind.LOG1P: "log(1+f(x))",
    TransformKind.EXP_DIV100: "e^f(x)/100",
    TransformKind.SIN: "sin(f(x))",
    TransformKind.SQRT_RATIO: "sqrt((f^2+3)/(f+1))",
}


class NoiseMode(str, enum.Enum):
    DATASET_STD = "dataset-std"
    PER_LABEL = "per-label"


@dataclass(frozen=True)
class NoiseSpec:
    enabled: bool = False
    relative_sigma: float = 0.05
    mode: NoiseMode = NoiseMode.DATASET_STD
    seed: int = 0

    def __post_init__(self):
        if self.relative_sigma < 0:
            raise ValueError(f"relative_sigma must be >= 0, got {self.relative_sigma}")
        object.__setattr__(self, "mode", NoiseMode(self.mode))


@dataclass
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.features.ndim != 2 or self.labels.ndim != 1:
            raise ValueError("features must be (n, d) and labels (n,)")
        if len(self.features) != len(self.labels) or len(self.labels) < 1:
            raise ValueError(f"{len(self.features)} feature rows vs {len(self.labels)} labels")

    def __len__(self) -> int:
        return len(self.labels)


# -- sampling -----------------------------------------------------------------


def sample_cube(n: int, seed: int) -> np.ndarray:
    """``n`` points uniform on [-2, 2]^9."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    return rng.uniform(-CUBE_HALF_WIDTH, CUBE_HALF_WIDTH, size=(n, 9))


def sample_sphere_triple(n: int, seed: int) -> np.ndarray:
    """``n`` rows of three independent uniform points on the unit sphere."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal(size=(n, 3, 3))
    norms = np.linalg.norm(g, axis=2)
    bad = norms < 1e-12
    while bad.any():
        g[bad] = rng.standard_normal(size=(int(bad.sum()), 3))
        norms = np.linalg.norm(g, axis=2)
        bad = norms < 1e-12
    return (g / norms[..., None]).reshape(n, 9)


def split_points(points: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    p = np.asarray(points, dtype=np.float64)
    return p[..., 0:3], p[..., 3:6], p[..., 6:9]


def join_points(u, v, w) -> np.ndarray:
    return np.concatenate([u, v, w], axis=-1)


# -- targets ------------------------------------------------------------------


def triangle_area(points) -> np.ndarray | float:
    """Half the norm of the (A, B, C) minor vector of the three vertices."""
    p = np.asarray(points, dtype=np.float64)
    x1, x2, x3, x4, x5, x6, x7, x8, x9 = (p[..., i] for i in range(9))
    a = (x4 - x1) * (x8 - x2) - (x7 - x1) * (x5 - x2)
    b = (x4 - x1) * (x9 - x3) - (x7 - x1) * (x6 - x3)
    c = (x5 - x2) * (x9 - x3) - (x8 - x2) * (x6 - x3)
    out = 0.5 * np.sqrt(a * a + b * b + c * c)
    return float(out) if out.ndim == 0 else out


def _solid_angle_parts(points):
    u, v, w = split_points(points)
    if np.any(np.abs(np.linalg.norm(np.stack([u, v, w]), axis=-1) - 1.0) > UNIT_TOL):
        raise ValueError("solid angle needs unit vectors u, v, w")
    num = np.abs(np.einsum("...i,...i->...", np.cross(u, v), w))
    den = 1.0 + np.einsum("...i,...i->...", u, v) + np.einsum("...i,...i->...", v, w) + np.einsum("...i,...i->...", w, u)
    return num, den


def solid_angle(points, variant: TargetKind | str = TargetKind.SOLID_ANGLE_PIECEWISE):
    """Solid angle of the spherical triangle (u, v, w).

    ``solid-angle`` follows the piecewise 2*atan(z) / pi + 2*atan(z) rule with
    z = num/den; ``solid-angle-standard`` is 2*atan2(num, den) in [0, 2*pi).
    Both go through atan2 so den == 0 needs no special casing.
    """
    variant = TargetKind(variant)
    if variant is TargetKind.TRIANGLE_AREA:
        raise ValueError(f"{variant.value} is not a solid-angle target")
    num, den = _solid_angle_parts(points)
    theta = np.arctan2(num, den)
    if variant is TargetKind.SOLID_ANGLE_STANDARD:
        out = 2.0 * theta
    else:
        # den < 0 means z < 0; 2*atan(z) = 2*theta - 2*pi, so pi + 2*atan(z) = 2*theta - pi
        out = np.where(den < 0, 2.0 * theta - np.pi, 2.0 * theta)
    return float(out) if out.ndim == 0 else out


def target_values(target: TargetKind | str, points) -> np.ndarray:
    target = TargetKind(target)
    if target is TargetKind.TRIANGLE_AREA:
        return triangle_area(points)
    return solid_angle(points, target)


def apply_transform(kind: TransformKind | str, f):
    kind = TransformKind(kind)
    f = np.asarray(f, dtype=np.float64)
    if kind in (TransformKind.LOG1P, TransformKind.SQRT_RATIO) and np.any(f <= -1):
        raise ValueError(f"transform {kind.value} needs f > -1")
    if kind is TransformKind.IDENTITY:
        out = f.copy()
    elif kind is TransformKind.LOG1P:
        out = np.log1p(f)
    elif kind is TransformKind.EXP_DIV100:
        out = np.exp(f) / 100.0
    elif kind is TransformKind.SIN:
        out = np.sin(f)
    else:
        out = np.sqrt((f * f + 3.0) / (f + 1.0))
    return float(out) if out.ndim == 0 else out


def add_noise(labels, spec: NoiseSpec) -> np.ndarray:
    y = np.asarray(labels, dtype=np.float64)
    if y.size < 1:
        raise ValueError("add_noise needs at least one label")
    if not spec.enabled or spec.relative_sigma == 0:
        return y.copy()
    rng = np.random.default_rng(spec.seed)
    z = rng.standard_normal(size=y.shape)
    if spec.mode is NoiseMode.DATASET_STD:
        return y + spec.relative_sigma * float(np.std(y)) * z
    return y + spec.relative_sigma * np.abs(y) * z


def make_dataset(
    target: TargetKind | str,
    transform: TransformKind | str = TransformKind.IDENTITY,
    noise: NoiseSpec | None = None,
    n: int = 10_000,
    seed: int = 0,
    domain: str | None = None,
) -> Dataset:
    target, transform = TargetKind(target), TransformKind(transform)
    noise = noise or NoiseSpec()
    domain = domain or target.domain
    if domain not in ("cube", "sphere"):
        raise ValueError(f"unknown domain {domain!r}")
    if domain != target.domain:
        raise ValueError(f"target {target.value} needs the {target.domain} domain, not {domain}")
    x = sample_cube(n, seed) if domain == "cube" else sample_sphere_triple(n, seed)
    y = add_noise(apply_transform(transform, target_values(target, x)), noise)
    prov = {
        "target": target.value,
        "transform": transform.value,
        "noise": {**asdict(noise), "mode": noise.mode.value},
        "seed": seed,
        "domain": domain,
        "n": n,
    }
    return Dataset(x, y, prov)


def sample_domain(domain: str, n: int, seed: int) -> np.ndarray:
    if domain == "cube":
        return sample_cube(n, seed)
    if domain == "sphere":
        return sample_sphere_triple(n, seed)
    raise ValueError(f"unknown domain {domain!r}")


# -- CSV exchange -------------------------------------------------------------

FEATURE_COLUMNS = [f"x{i}" for i in range(1, 10)]


def save_csv(ds: Dataset, path) -> None:
    """First line is ``# provenance: <json>``; floats are written with repr (lossless)."""
    with open(path, "w", newline="") as fh:
        fh.write("# provenance: " + json.dumps(ds.provenance, sort_keys=True) + "\n")
        writer = csv.writer(fh)
        writer.writerow(FEATURE_COLUMNS[: ds.features.shape[1]] + ["y"])
        for row, label in zip(ds.features, ds.labels):
            writer.writerow([repr(float(v)) for v in row] + [repr(float(label))])


def load_csv(path) -> Dataset:
    text = Path(path).read_text().splitlines()
    prov = {}
    if text and text[0].startswith("# provenance: "):
        prov = json.loads(text[0][len("# provenance: ") :])
        text = text[1:]
    rows = list(csv.reader(text))
    header, body = rows[0], rows[1:]
    if header[-1] != "y":
        raise ValueError(f"{path}: last column must be 'y'")
    arr = np.array([[float(v) for v in r] for r in body], dtype=np.float64).reshape(len(body), len(header))
    return Dataset(arr[:, :-1], arr[:, -1], prov)
