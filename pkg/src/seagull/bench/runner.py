"""Execute seeded runs and whole plans."""

from __future__ import annotations

import hashlib
import logging
import platform
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, replace
from pathlib import Path
from typing import Callable

import numpy as np
from threadpoolctl import threadpool_limits

import seagull
from seagull.activations import SEAGULL
from seagull.bench.plan import ExperimentPlan, RunSpec, derive_seed
from seagull.bench.records import RECORDS_FILE, RunRecord, append_record, load_records
from seagull.datagen import Dataset, NoiseSpec, make_dataset
from seagull.network import Network, benchmark_spec, build, replace_activation, save_checkpoint
from seagull.optim import TrainingDiverged, train
from seagull.symmetry import measure_symmetry

log = logging.getLogger(__name__)


def run_seeds(seed: int) -> dict[str, int]:
    return {k: derive_seed(seed, k) for k in ("train", "test", "noise", "init", "shuffle", "symmetry")}


def prepare(spec: RunSpec) -> tuple[Dataset, Dataset, Network]:
    """Datasets and initial network for a run; identical for a baseline and its Seagull partner."""
    seeds = run_seeds(spec.seed)
    noise = replace(spec.noise, seed=seeds["noise"])
    train_set = make_dataset(spec.target, spec.transform, noise, spec.train_n, seeds["train"])
    test_set = make_dataset(spec.target, spec.transform, NoiseSpec(), spec.test_n, seeds["test"])
    net = build(benchmark_spec(spec.activation), seeds["init"])
    if spec.seagull_first:
        net = replace_activation(net, 0, SEAGULL)
    return train_set, test_set, net


def _digest(*arrays: np.ndarray) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a, dtype=np.float64).tobytes())
    return h.hexdigest()


def versions() -> dict:
    return {"seagull": seagull.__version__, "numpy": np.__version__, "python": platform.python_version()}


def execute_run(spec: RunSpec, checkpoint_dir: str | Path | None = None) -> RunRecord:
    """Train one configuration single-threaded; divergence yields a failed record."""
    with threadpool_limits(limits=1):
        train_set, test_set, net = prepare(spec)
        record = RunRecord(
            key=spec.key,
            cell_index=spec.cell_index,
            run_index=spec.run_index,
            target=spec.target.value,
            transform=spec.transform.value,
            activation=spec.activation.label,
            seagull_first=spec.seagull_first,
            train_n=spec.train_n,
            seed=spec.seed,
            status="ok",
            layer_activations=[l.activation.label for l in net.spec.layers],
            init_digest=_digest(net.flat_parameters()),
            data_digest=_digest(train_set.features, train_set.labels, test_set.features, test_set.labels),
            noise={"enabled": spec.noise.enabled, "relative_sigma": spec.noise.relative_sigma, "mode": spec.noise.mode.value},
            versions=versions(),
        )
        config = replace(spec.train, shuffle_seed=run_seeds(spec.seed)["shuffle"])
        try:
            trained, report = train(net, train_set, test_set, config)
        except TrainingDiverged as exc:
            record.status, record.error = "failed", str(exc)
            record.timestamp = time.time()
            return record
        record.train_report = report
        record.symmetry = measure_symmetry(trained, spec.symmetry_n, run_seeds(spec.seed)["symmetry"], spec.target.domain)
        if checkpoint_dir is not None:
            Path(checkpoint_dir).mkdir(parents=True, exist_ok=True)
            save_checkpoint(trained, Path(checkpoint_dir) / (spec.key.replace(":", "-") + ".ckpt"))
        record.timestamp = time.time()
        return record


def _matches(record: RunRecord, spec: RunSpec) -> bool:
    """True when an archived record was produced by ``spec`` (shuffle seed aside)."""
    if (record.seed, record.target, record.transform, record.activation, record.seagull_first, record.train_n) != (
        spec.seed, spec.target.value, spec.transform.value, spec.activation.label, spec.seagull_first, spec.train_n,
    ):
        return False
    if record.noise.get("enabled", False) != spec.noise.enabled:
        return False
    if record.ok:
        archived = {k: v for k, v in record.train_report.config.items() if k != "shuffle_seed"}
        wanted = {k: v for k, v in asdict(spec.train).items() if k != "shuffle_seed"}
        return archived == wanted
    return True


def run_plan(
    plan: ExperimentPlan,
    out_dir: str | Path | None = None,
    workers: int = 1,
    save_checkpoints: bool = False,
    on_record: Callable[[RunRecord], None] | None = None,
) -> list[RunRecord]:
    """Run every (cell, run, seagull flag) not already archived in ``out_dir``.

    Records are appended to ``out_dir/records.jsonl`` by this process only, as
    runs finish. Results do not depend on ``workers`` since every seed comes
    from the plan indices.
    """
    specs = plan.run_specs()
    done: dict[str, RunRecord] = {}
    path = ckpt_dir = None
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = out / RECORDS_FILE
        ckpt_dir = out / "checkpoints" if save_checkpoints else None
        existing, _ = load_records(path)
        by_key = {s.key: s for s in specs}
        done = {r.key: r for r in existing if r.key in by_key and _matches(r, by_key[r.key])}
    todo = [s for s in specs if s.key not in done]
    log.info("plan %s: %d runs, %d already archived", plan.name, len(specs), len(specs) - len(todo))

    def collect(rec: RunRecord) -> None:
        done[rec.key] = rec
        if path is not None:
            append_record(path, rec)
        if on_record is not None:
            on_record(rec)

    if workers <= 1:
        for s in todo:
            collect(execute_run(s, ckpt_dir))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(execute_run, s, ckpt_dir) for s in todo]
            for fut in as_completed(futures):
                collect(fut.result())
    return [done[s.key] for s in specs]
