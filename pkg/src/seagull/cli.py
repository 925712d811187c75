"""Command line entry point: ``seagull <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from seagull.activations import KINDS, SEAGULL, parse_activation
from seagull.bench import report as rep
from seagull.bench.plan import PRESETS, RunSpec, preset
from seagull.bench.records import RECORDS_FILE, append_record, load_records
from seagull.bench.runner import execute_run, run_plan
from seagull.datagen import NoiseMode, NoiseSpec, TargetKind, TransformKind, make_dataset, save_csv
from seagull.network import load_checkpoint, predict
from seagull.optim import TrainConfig
from seagull.symmetry import even_first_layer_network, make_sinxy_network, measure_symmetry

log = logging.getLogger("seagull")


def _activation(text: str):
    try:
        return parse_activation(text)
    except ValueError as exc:
        msg = str(exc)
        if "valid:" not in msg:
            msg += f"; valid: {', '.join(KINDS)}"
        raise argparse.ArgumentTypeError(msg + " (parameterised forms: elu:<alpha>, logpow:<alpha>:<eps>)")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive count, got {v}")
    return v


def _choices(enum_cls):
    return [e.value for e in enum_cls]


def _add_training(p: argparse.ArgumentParser, defaults: bool) -> None:
    # grid keeps preset values unless a flag is given, so its defaults are None
    d = TrainConfig()
    g = p.add_argument_group("training")
    g.add_argument("--epochs", type=_positive, default=d.epochs if defaults else None)
    g.add_argument("--halve-every", type=_positive, default=d.halve_every if defaults else None)
    g.add_argument("--batch-size", type=_positive, default=d.batch_size if defaults else None)
    g.add_argument("--lr", type=float, default=d.lr0 if defaults else None)
    g.add_argument("--loss", choices=["mse", "mae"], default=d.loss if defaults else None)


def _add_noise(p: argparse.ArgumentParser) -> None:
    p.add_argument("--noise", type=float, default=None, metavar="SIGMA", help="relative label noise, e.g. 0.05")
    p.add_argument("--noise-mode", choices=_choices(NoiseMode), default=NoiseMode.DATASET_STD.value)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parser = argparse.ArgumentParser(prog="seagull", description="Even-activation regression benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="train a single configuration")
    p.add_argument("--target", choices=_choices(TargetKind), default=TargetKind.TRIANGLE_AREA.value)
    p.add_argument("--transform", choices=_choices(TransformKind), default=TransformKind.IDENTITY.value)
    p.add_argument("--domain", choices=["cube", "sphere"])
    p.add_argument("--activation", type=_activation, default=parse_activation("relu"))
    p.add_argument("--seagull-first", action="store_true", help="Seagull in the first hidden layer")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-n", type=_positive, default=10_000)
    p.add_argument("--test-n", type=_positive, default=2_000)
    p.add_argument("--out", type=Path, help="append the record here and save the trained checkpoint")
    _add_training(p, defaults=True)
    _add_noise(p)

    p = sub.add_parser("grid", parents=[common], help="run a preset experiment grid")
    p.add_argument("--preset", choices=list(PRESETS), required=True)
    p.add_argument("--runs", type=_positive)
    p.add_argument("--base-seed", type=int)
    p.add_argument("--train-n", type=_positive, nargs="+")
    p.add_argument("--test-n", type=_positive)
    p.add_argument("--out", type=Path, default=Path("results"))
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--checkpoints", action="store_true", help="save trained networks under OUT/checkpoints")
    p.add_argument("--format", choices=["csv", "md", "json"], default="md")
    p.add_argument("--compare-paper", action="store_true", help="print published MAE beside each cell")
    _add_training(p, defaults=False)

    p = sub.add_parser("report", parents=[common], help="tabulate an archive of run records")
    p.add_argument("--out", type=Path, default=Path("results"), help="directory holding records.jsonl")
    p.add_argument("--format", choices=["csv", "md", "json"], default="md")
    p.add_argument("--metric", choices=["best", "final"], default="best")
    p.add_argument("--compare-paper", action="store_true", help="print published MAE beside each cell")

    p = sub.add_parser("symmetry", parents=[common], help="exchange/trivial/evenness gaps of a network")
    p.add_argument("--checkpoint", type=Path, help="defaults to a fresh no-bias even-first-layer network")
    p.add_argument("--activation", type=_activation, default=SEAGULL, help="first-layer activation without --checkpoint")
    p.add_argument("--domain", choices=["cube", "sphere"], default="cube")
    p.add_argument("--n", type=_positive, default=1_000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("demo-sinxy", parents=[common], help="check the exact sin(xy) network")
    p.add_argument("--n", type=_positive, default=10_000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("export-dataset", parents=[common], help="write a dataset as CSV")
    p.add_argument("--target", choices=_choices(TargetKind), default=TargetKind.TRIANGLE_AREA.value)
    p.add_argument("--transform", choices=_choices(TransformKind), default=TransformKind.IDENTITY.value)
    p.add_argument("--domain", choices=["cube", "sphere"])
    p.add_argument("--n", type=_positive, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    _add_noise(p)
    return parser


def _noise(args) -> NoiseSpec:
    if args.noise is None:
        return NoiseSpec()
    if args.noise < 0:
        raise ValueError("--noise must be >= 0")
    return NoiseSpec(enabled=True, relative_sigma=args.noise, mode=args.noise_mode)


def _check_domain(parser, args) -> None:
    if args.domain and args.domain != TargetKind(args.target).domain:
        parser.error(f"target {args.target} is sampled on the {TargetKind(args.target).domain}, not the {args.domain}")


def parse_cli(argv=None) -> argparse.Namespace:
    """Parse and validate; ``args.config`` holds a RunSpec or ExperimentPlan where relevant."""
    parser = build_parser()
    args = parser.parse_args(argv)
    args.config = None
    try:
        if args.command == "run":
            _check_domain(parser, args)
            train = TrainConfig(
                epochs=args.epochs, batch_size=args.batch_size, lr0=args.lr,
                halve_every=args.halve_every, loss=args.loss,
            )
            args.config = RunSpec(
                target=args.target, transform=args.transform, activation=args.activation,
                seagull_first=args.seagull_first, train_n=args.train_n, test_n=args.test_n,
                noise=_noise(args), train=train, seed=args.seed,
            )
        elif args.command == "grid":
            plan = preset(args.preset)
            over = {}
            if args.runs is not None:
                over["runs_per_cell"] = args.runs
            if args.base_seed is not None:
                over["base_seed"] = args.base_seed
            if args.train_n is not None:
                over["train_sizes"] = tuple(args.train_n)
            if args.test_n is not None:
                over["test_n"] = args.test_n
            tover = {
                k: v
                for k, v in {
                    "epochs": args.epochs, "halve_every": args.halve_every, "batch_size": args.batch_size,
                    "lr0": args.lr, "loss": args.loss,
                }.items()
                if v is not None
            }
            if tover:
                over["train"] = replace(plan.train, **tover)
            args.config = replace(plan, **over)
        elif args.command == "export-dataset":
            _check_domain(parser, args)
    except ValueError as exc:
        parser.error(str(exc))
    return args


def _cmd_run(args) -> int:
    spec: RunSpec = args.config
    ckpt = None
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        ckpt = args.out / "checkpoints"
    record = execute_run(spec, ckpt)
    if args.out:
        append_record(args.out / RECORDS_FILE, record)
    print(record.to_json())
    if not record.ok:
        log.error("run failed: %s", record.error)
        return 1
    tr = record.train_report
    log.info("best test MAE %.4f, final %.4f, exchange gap %.3g", tr.best_test_mae, tr.final_test_mae, record.symmetry.exchange_gap[0])
    return 0


def _cmd_grid(args) -> int:
    plan = args.config

    def progress(r):
        mae = r.metric("best")
        log.info("%s %s/%s/%s seagull=%s -> %s", r.key, r.transform, r.activation, r.train_n, r.seagull_first,
                 "FAILED" if mae is None else f"{mae:.4f}")

    records = run_plan(plan, args.out, workers=args.workers, save_checkpoints=args.checkpoints, on_record=progress)
    table = rep.build_table(records, compare_published=args.compare_paper)
    text = rep.render(table, args.format)
    (args.out / f"table.{args.format}").write_text(text)
    print(text, end="")
    return 0


def _cmd_report(args) -> int:
    records, warnings = load_records(args.out / RECORDS_FILE)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if not records:
        print(f"no records in {args.out / RECORDS_FILE}", file=sys.stderr)
        return 1
    table = rep.build_table(records, metric=args.metric, compare_published=args.compare_paper)
    print(rep.render(table, args.format), end="")
    return 0


def _cmd_symmetry(args) -> int:
    net = load_checkpoint(args.checkpoint) if args.checkpoint else even_first_layer_network(args.seed, args.activation)
    print(json.dumps(measure_symmetry(net, args.n, args.seed, args.domain).to_dict(), indent=2))
    return 0


def _cmd_demo_sinxy(args) -> int:
    net = make_sinxy_network()
    xy = np.random.default_rng(args.seed).uniform(-2, 2, size=(args.n, 2))
    err = np.abs(predict(net, xy) - np.sin(xy[:, 0] * xy[:, 1]))
    print(f"layers: {' -> '.join(f'{l.in_dim}x{l.out_dim} {l.activation}' for l in net.spec.layers)}")
    print(f"max |net(x,y) - sin(xy)| over {args.n} points in [-2,2]^2: {err.max():.3e}")
    return 0


def _cmd_export(args) -> int:
    noise = _noise(args)
    if noise.enabled:
        noise = replace(noise, seed=args.seed + 1)
    ds = make_dataset(args.target, args.transform, noise, args.n, args.seed, args.domain)
    save_csv(ds, args.out)
    print(f"wrote {len(ds)} rows to {args.out}")
    return 0


COMMANDS = {
    "run": _cmd_run,
    "grid": _cmd_grid,
    "report": _cmd_report,
    "symmetry": _cmd_symmetry,
    "demo-sinxy": _cmd_demo_sinxy,
    "export-dataset": _cmd_export,
}


def main(argv=None) -> int:
    args = parse_cli(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
