"""Fully connected networks: spec, seeded init, forward pass, checkpoints."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from seagull import autodiff as ad
from seagull.activations import IDENTITY, RELU, ActivationKind, parse_activation

CHECKPOINT_MAGIC = "seagull-checkpoint"
CHECKPOINT_VERSION = 1


class SpecError(ValueError):
    pass


class CheckpointError(ValueError):
    pass


@dataclass(frozen=True)
class LayerSpec:
    in_dim: int
    out_dim: int
    activation: ActivationKind
    has_bias: bool = True

    def __post_init__(self):
        if self.in_dim < 1 or self.out_dim < 1:
            raise SpecError(f"layer dims must be >= 1, got {self.in_dim}->{self.out_dim}")


@dataclass(frozen=True)
class NetworkSpec:
    layers: tuple[LayerSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise SpecError("network needs at least one layer")
        for i, (a, b) in enumerate(zip(self.layers, self.layers[1:])):
            if a.out_dim != b.in_dim:
                raise SpecError(f"layer {i} outputs {a.out_dim} but layer {i + 1} expects {b.in_dim}")

    @property
    def in_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def out_dim(self) -> int:
        return self.layers[-1].out_dim

    @property
    def n_params(self) -> int:
        return sum(l.in_dim * l.out_dim + (l.out_dim if l.has_bias else 0) for l in self.layers)


def mlp_spec(
    dims: Sequence[int],
    hidden: ActivationKind = RELU,
    first: ActivationKind | None = None,
    first_bias: bool = True,
) -> NetworkSpec:
    """Hidden layers use ``hidden`` (layer 0 may override), output is Identity with bias."""
    layers = []
    n = len(dims) - 1
    for i in range(n):
        if i == n - 1:
            act = IDENTITY
        elif i == 0 and first is not None:
            act = first
        else:
            act = hidden
        layers.append(LayerSpec(dims[i], dims[i + 1], act, has_bias=first_bias if i == 0 else True))
    return NetworkSpec(tuple(layers))


BENCHMARK_DIMS = (9, 100, 100, 100, 100, 1)


def benchmark_spec(hidden: ActivationKind = RELU, first: ActivationKind | None = None) -> NetworkSpec:
    return mlp_spec(BENCHMARK_DIMS, hidden=hidden, first=first)


@dataclass(frozen=True, eq=False)
class Network:
    spec: NetworkSpec
    weights: tuple[ad.Tensor, ...]
    biases: tuple[ad.Tensor | None, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "biases", tuple(self.biases) or (None,) * len(self.weights))
        if len(self.weights) != len(self.spec.layers) or len(self.biases) != len(self.spec.layers):
            raise SpecError("one weight matrix and one bias slot per layer required")
        for i, (layer, w, b) in enumerate(zip(self.spec.layers, self.weights, self.biases)):
            if w.shape != (layer.out_dim, layer.in_dim):
                raise SpecError(f"layer {i}: weight shape {w.shape} != {(layer.out_dim, layer.in_dim)}")
            if layer.has_bias != (b is not None):
                raise SpecError(f"layer {i}: bias presence does not match spec")
            if b is not None and b.shape != (layer.out_dim,):
                raise SpecError(f"layer {i}: bias shape {b.shape} != {(layer.out_dim,)}")

    def parameters(self) -> list[ad.Tensor]:
        """Weights and biases in checkpoint order (layer-major, weight then bias)."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            if b is not None:
                out.append(b)
        return out

    def with_parameters(self, params: Sequence[ad.Tensor]) -> Network:
        return assemble(self.spec, params)

    def flat_parameters(self) -> np.ndarray:
        return np.concatenate([p.data.reshape(-1) for p in self.parameters()])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return self.spec == other.spec and all(
            a.shape == b.shape and a.data.tobytes() == b.data.tobytes()
            for a, b in zip(self.parameters(), other.parameters())
        )

    __hash__ = None


def assemble(spec: NetworkSpec, params: Sequence[ad.Tensor]) -> Network:
    """Inverse of ``Network.parameters``."""
    it = iter(params)
    ws, bs = [], []
    for layer in spec.layers:
        ws.append(next(it))
        bs.append(next(it) if layer.has_bias else None)
    return Network(spec, tuple(ws), tuple(bs))


def build(spec: NetworkSpec, seed: int) -> Network:
    """Glorot-uniform weights, zero biases, fully determined by ``seed``."""
    rng = np.random.default_rng(seed)
    ws, bs = [], []
    for layer in spec.layers:
        limit = np.sqrt(6.0 / (layer.in_dim + layer.out_dim))
        ws.append(ad.Tensor.wrap(rng.uniform(-limit, limit, size=(layer.out_dim, layer.in_dim))))
        bs.append(ad.Tensor.wrap(np.zeros(layer.out_dim)) if layer.has_bias else None)
    return Network(spec, tuple(ws), tuple(bs))


def forward(net: Network, batch) -> ad.Tensor:
    x = batch if isinstance(batch, ad.Tensor) else ad.Tensor(batch)
    if x.data.ndim != 2 or x.shape[1] != net.spec.in_dim:
        raise ad.DimensionError(f"network expects (n, {net.spec.in_dim}) input, got {x.shape}")
    for layer, w, b in zip(net.spec.layers, net.weights, net.biases):
        x = ad.matmul(x, ad.transpose(w))
        if b is not None:
            x = ad.add_bias(x, b)
        if layer.activation != IDENTITY:
            x = ad.apply_activation(x, layer.activation)
    return x


def predict(net: Network, batch) -> np.ndarray:
    """Untracked forward pass returning a flat array for single-output networks."""
    x = np.asarray(batch, dtype=np.float64)
    for layer, w, b in zip(net.spec.layers, net.weights, net.biases):
        x = x @ w.data.T
        if b is not None:
            x = x + b.data
        if layer.activation != IDENTITY:
            x = layer.activation.eval(x)
    return x[:, 0] if x.shape[1] == 1 else x


def replace_activation(net: Network, layer_index: int, kind: ActivationKind) -> Network:
    n = len(net.spec.layers)
    if not 0 <= layer_index < n:
        raise IndexError(f"layer index {layer_index} out of range for {n} layers")
    layers = list(net.spec.layers)
    layers[layer_index] = replace(layers[layer_index], activation=kind)
    return Network(NetworkSpec(tuple(layers)), net.weights, net.biases)


# -- checkpoints --------------------------------------------------------------
#
# Text format, one token group per line:
#   seagull-checkpoint 1
#   layers <L>
#   layer <in> <out> <activation-label> <bias 0|1>      (L lines)
#   params <N>
#   <16 hex digits, big-endian IEEE-754 float64>        (N lines)
#   sha256 <hex digest of the parameter lines>
#   end


def _encode(values: np.ndarray) -> list[str]:
    raw = values.astype(">f8").tobytes()
    return [raw[i : i + 8].hex() for i in range(0, len(raw), 8)]


def save_checkpoint(net: Network, path) -> None:
    flat = net.flat_parameters()
    hexes = _encode(flat)
    lines = [f"{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION}", f"layers {len(net.spec.layers)}"]
    for l in net.spec.layers:
        lines.append(f"layer {l.in_dim} {l.out_dim} {l.activation.label} {int(l.has_bias)}")
    lines.append(f"params {len(hexes)}")
    lines.extend(hexes)
    lines.append("sha256 " + hashlib.sha256("\n".join(hexes).encode()).hexdigest())
    lines.append("end")
    Path(path).write_text("\n".join(lines) + "\n")


def load_checkpoint(path) -> Network:
    try:
        lines = Path(path).read_text().splitlines()
    except UnicodeDecodeError as exc:
        raise CheckpointError(f"{path}: not a text checkpoint") from exc
    try:
        return _parse_checkpoint(lines)
    except CheckpointError:
        raise
    except (ValueError, IndexError) as exc:
        raise CheckpointError(f"{path}: malformed checkpoint ({exc})") from exc


def _parse_checkpoint(lines: list[str]) -> Network:
    if not lines or not lines[0].startswith(CHECKPOINT_MAGIC + " "):
        raise CheckpointError("missing checkpoint header")
    version = int(lines[0].split()[1])
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version} (expected {CHECKPOINT_VERSION})")
    if lines[-1] != "end":
        raise CheckpointError("checkpoint is truncated (no end marker)")
    key, n_layers = lines[1].split()
    if key != "layers":
        raise CheckpointError("expected 'layers' line")
    layers = []
    for line in lines[2 : 2 + int(n_layers)]:
        tag, i, o, act, bias = line.split()
        if tag != "layer":
            raise CheckpointError(f"expected layer line, got {line!r}")
        layers.append(LayerSpec(int(i), int(o), parse_activation(act), bias == "1"))
    spec = NetworkSpec(tuple(layers))
    pos = 2 + int(n_layers)
    key, n_params = lines[pos].split()
    n_params = int(n_params)
    if key != "params":
        raise CheckpointError("expected 'params' line")
    if n_params != spec.n_params:
        raise CheckpointError(f"spec needs {spec.n_params} parameters, file declares {n_params}")
    hexes = lines[pos + 1 : pos + 1 + n_params]
    footer = lines[pos + 1 + n_params :]
    if len(hexes) != n_params or len(footer) != 2 or not footer[0].startswith("sha256 "):
        raise CheckpointError("parameter payload length does not match declaration")
    if hashlib.sha256("\n".join(hexes).encode()).hexdigest() != footer[0].split()[1]:
        raise CheckpointError("parameter payload checksum mismatch")
    flat = np.frombuffer(bytes.fromhex("".join(hexes)), dtype=">f8").astype(np.float64)
    params, pos = [], 0
    for l in spec.layers:
        k = l.in_dim * l.out_dim
        params.append(ad.Tensor(flat[pos : pos + k].reshape(l.out_dim, l.in_dim)))
        pos += k
        if l.has_bias:
            params.append(ad.Tensor(flat[pos : pos + l.out_dim]))
            pos += l.out_dim
    return assemble(spec, params)
