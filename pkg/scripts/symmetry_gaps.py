#!/usr/bin/env python3
"""Train one ReLU network and its Seagull-first twin, then compare symmetry gaps.

Both share training data, initial weights and batch order, so any difference
comes from the first-layer activation alone.
"""

import argparse
from dataclasses import replace

from seagull.bench.plan import RunSpec
from seagull.bench.runner import execute_run
from seagull.optim import TrainConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--epochs", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--train-n", type=int, default=10_000)
    args = ap.parse_args()

    spec = RunSpec(train=TrainConfig(epochs=args.epochs, halve_every=max(1, args.epochs // 5)),
                   seed=args.seed, train_n=args.train_n)
    print(f"{'first layer':<12} {'best MAE':>9} {'exchange':>9} {'trivial':>9} {'evenness':>9}")
    for flag in (False, True):
        rec = execute_run(replace(spec, seagull_first=flag))
        s = rec.symmetry
        print(f"{rec.layer_activations[0]:<12} {rec.metric():9.4f} {s.exchange_gap[0]:9.4f} "
              f"{s.trivial_gap[0]:9.4f} {s.evenness_gap[0]:9.2e}")


if __name__ == "__main__":
    main()
