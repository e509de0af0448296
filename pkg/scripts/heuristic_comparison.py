#!/usr/bin/env python3
"""Heuristic comparison: mean F1 of the base algorithm under each beam-scoring
heuristic on the same contexts."""

import argparse
import os

from causebeam.metrics import ExperimentGrid, run_experiment, write_summary


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=int, default=2)
    parser.add_argument("--contexts", type=int, default=30)
    parser.add_argument("--beam", type=int, default=12)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--heuristics",
        nargs="+",
        default=["positive", "occam", "negative", "constant", "random"],
    )
    parser.add_argument("-o", "--output", default="results/heuristics")
    args = parser.parse_args()

    os.makedirs(args.output, exist_ok=True)
    for name in args.heuristics:
        grid = ExperimentGrid(
            ks=(args.k,),
            beams=(args.beam,),
            algorithms=("base",),
            contexts_per_cell=args.contexts,
            seed=args.seed,
            heuristic=name,
        )
        rows, summary = run_experiment(
            grid, os.path.join(args.output, f"rows_{name}.csv")
        )
        write_summary(summary, os.path.join(args.output, f"summary_{name}.csv"))
        mean = next(e for e in summary if e["stat"] == "mean")
        print(f"heuristic {name:>9}: mean F1 {mean['f1']:.3f}")


if __name__ == "__main__":
    main()
