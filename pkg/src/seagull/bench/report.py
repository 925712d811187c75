"""Aggregate run records into baseline-vs-Seagull tables."""

from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import asdict, dataclass, field

from seagull.bench import reference
from seagull.bench.records import RunRecord
from seagull.datagen import TransformKind


@dataclass
class Summary:
    mean: float | None
    std: float | None
    runs: int

    @classmethod
    def of(cls, values: list[float]) -> Summary:
        if not values:
            return cls(None, None, 0)
        # sample std; a single run reports 0
        std = statistics.stdev(values) if len(values) > 1 else 0.0
        return cls(statistics.fmean(values), std, len(values))


@dataclass
class TableCell:
    target: str
    transform: str
    train_n: int
    activation: str
    baseline: Summary
    seagull: Summary
    published: tuple[float, float] | None = None


@dataclass
class ReportTable:
    cells: list[TableCell]
    rows: list[tuple[str, str, int]]
    columns: list[str]
    metric: str = "best"
    failed: list[str] = field(default_factory=list)

    def cell(self, target: str, transform: str, train_n: int, activation: str) -> TableCell | None:
        for c in self.cells:
            if (c.target, c.transform, c.train_n, c.activation) == (target, transform, train_n, activation):
                return c
        return None

    def improvements(self) -> list[bool]:
        """Seagull mean < baseline mean, for every cell that has both."""
        return [
            c.seagull.mean < c.baseline.mean
            for c in self.cells
            if c.seagull.mean is not None and c.baseline.mean is not None
        ]


def _ordered_unique(items):
    seen = {}
    for it in items:
        seen.setdefault(it, None)
    return list(seen)


def build_table(records: list[RunRecord], metric: str = "best", compare_published: bool = False) -> ReportTable:
    if metric not in ("best", "final"):
        raise ValueError("metric must be 'best' or 'final'")
    recs = sorted(records, key=lambda r: (r.cell_index, r.run_index, r.seagull_first))
    rows = _ordered_unique((r.target, r.transform, r.train_n) for r in recs)
    cols = _ordered_unique(r.activation for r in recs)
    noisy = any(r.noise.get("enabled") and r.noise.get("relative_sigma", 0) > 0 for r in recs)
    groups: dict[tuple, dict[bool, list[float]]] = {}
    failed = []
    for r in recs:
        slot = groups.setdefault((r.target, r.transform, r.train_n, r.activation), {False: [], True: []})
        if r.ok:
            slot[r.seagull_first].append(r.metric(metric))
        else:
            failed.append(f"{r.key} ({r.activation}, seagull={r.seagull_first}): {r.error}")
    cells = []
    for target, transform, n in rows:
        for act in cols:
            vals = groups.get((target, transform, n, act))
            if vals is None:
                continue
            pub = reference.lookup(target, transform, act, n, noisy) if compare_published else None
            cells.append(TableCell(target, transform, n, act, Summary.of(vals[False]), Summary.of(vals[True]), pub))
    return ReportTable(cells, rows, cols, metric, failed)


# -- rendering ----------------------------------------------------------------

CSV_FIELDS = [
    "target", "transform", "train_n", "activation",
    "baseline_mean", "baseline_std", "baseline_runs",
    "seagull_mean", "seagull_std", "seagull_runs",
]


def to_csv(table: ReportTable) -> str:
    buf = io.StringIO()
    fields = CSV_FIELDS + (["published_baseline", "published_seagull"] if _has_published(table) else [])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for c in table.cells:
        row = [
            c.target, c.transform, c.train_n, c.activation,
            _num(c.baseline.mean), _num(c.baseline.std), c.baseline.runs,
            _num(c.seagull.mean), _num(c.seagull.std), c.seagull.runs,
        ]
        if len(fields) > len(CSV_FIELDS):
            row += list(c.published) if c.published else ["", ""]
        w.writerow(row)
    return buf.getvalue()


def to_json(table: ReportTable) -> str:
    return json.dumps(asdict(table), indent=2)


def _num(x) -> str:
    return "" if x is None else repr(x)


def _fmt(x) -> str:
    return "n/a" if x is None else f"{x:.3f}"


def _has_published(table: ReportTable) -> bool:
    return any(c.published for c in table.cells)


def _row_label(target: str, transform: str, n: int, many_targets: bool, many_sizes: bool) -> str:
    try:
        label = TransformKind(transform).formula
    except ValueError:
        label = transform
    if many_targets:
        label = f"{target}: {label}"
    if many_sizes:
        label += f" (n={n})"
    return label


def to_markdown(table: ReportTable) -> str:
    """Cells read ``baseline (seagull)``; published values follow in brackets when present."""
    many_targets = len({t for t, _, _ in table.rows}) > 1
    many_sizes = len({n for _, _, n in table.rows}) > 1
    lines = [
        "| | " + " | ".join(table.columns) + " |",
        "|---|" + "---|" * len(table.columns),
    ]
    for target, transform, n in table.rows:
        parts = []
        for act in table.columns:
            c = table.cell(target, transform, n, act)
            if c is None:
                parts.append("-")
                continue
            text = f"{_fmt(c.baseline.mean)} (**{_fmt(c.seagull.mean)}**)"
            if c.published:
                text += f" [published {c.published[0]:.3f} ({c.published[1]:.3f})]"
            parts.append(text)
        lines.append(f"| {_row_label(target, transform, n, many_targets, many_sizes)} | " + " | ".join(parts) + " |")
    runs = sorted({c.baseline.runs for c in table.cells} | {c.seagull.runs for c in table.cells})
    lines.append("")
    lines.append(
        f"MAE on the test set ({table.metric} epoch), mean over {'/'.join(map(str, runs))} runs. "
        "Outside parentheses: original network; inside: first hidden activation replaced by Seagull."
    )
    if table.failed:
        lines.append("")
        lines.append(f"Excluded {len(table.failed)} diverged run(s):")
        lines.extend(f"- {f}" for f in table.failed)
    return "\n".join(lines) + "\n"


def render(table: ReportTable, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(table)
    if fmt == "md":
        return to_markdown(table)
    if fmt == "json":
        return to_json(table)
    raise ValueError(f"unknown format {fmt!r}")
