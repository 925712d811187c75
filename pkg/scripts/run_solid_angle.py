#!/usr/bin/env python3
"""ReLU vs Seagull-first on the solid-angle target at 10k and 50k training points."""

import argparse
import logging
from dataclasses import replace
from pathlib import Path

from seagull.bench.plan import preset
from seagull.bench.report import build_table, to_markdown
from seagull.bench.runner import run_plan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mini", action="store_true", help="10k points only, 150 epochs, 3 runs")
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--standard", action="store_true",
                    help="use the plain 2*atan2 solid angle instead of the piecewise variant")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    plan = preset("solid-angle-mini" if args.mini else "solid-angle")
    if args.standard:
        plan = replace(plan, targets=(("solid-angle-standard", "identity"),), name=plan.name + "-standard")
    records = run_plan(plan, args.out / plan.name, workers=args.workers)
    print(to_markdown(build_table(records, compare_published=True)))


if __name__ == "__main__":
    main()
