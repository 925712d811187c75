#!/usr/bin/env python3
"""Run the triangle-area grids and print baseline (Seagull) tables.

    python3 scripts/run_tables.py --mini            # ~30 min on one core
    python3 scripts/run_tables.py --workers 8       # full 500-epoch grids
"""

import argparse
import logging
from pathlib import Path

from seagull.bench.plan import preset
from seagull.bench.report import build_table, to_markdown
from seagull.bench.runner import run_plan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mini", action="store_true", help="150 epochs, 3 runs, 2 transforms, 3 activations")
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--metric", choices=["best", "final"], default="best")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    suffix = "-mini" if args.mini else ""
    for name, title in (("table1", "clean labels"), ("table2", "5% label noise")):
        plan = preset(name + suffix)
        records = run_plan(plan, args.out / plan.name, workers=args.workers)
        table = build_table(records, metric=args.metric, compare_published=True)
        text = to_markdown(table)
        (args.out / plan.name / "table.md").write_text(text)
        print(f"\n## {plan.name} ({title})\n")
        print(text)
        wins = table.improvements()
        print(f"Seagull improves {sum(wins)}/{len(wins)} cells")


if __name__ == "__main__":
    main()
