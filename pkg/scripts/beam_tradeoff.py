#!/usr/bin/env python3
"""Beam-size tradeoff: F1 and runtime of the base algorithm across beam widths."""

import argparse
import os

from causebeam.metrics import ExperimentGrid, run_experiment, write_summary


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=int, default=2)
    parser.add_argument("--contexts", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--beams", type=int, nargs="+", default=[1, 12, 25, 37, 50]
    )
    parser.add_argument("-o", "--output", default="results/beam_tradeoff")
    args = parser.parse_args()

    grid = ExperimentGrid(
        ks=(args.k,),
        beams=tuple(args.beams),
        algorithms=("base",),
        contexts_per_cell=args.contexts,
        seed=args.seed,
    )
    os.makedirs(args.output, exist_ok=True)
    rows, summary = run_experiment(grid, os.path.join(args.output, "rows.csv"))
    write_summary(summary, os.path.join(args.output, "summary.csv"))
    for entry in summary:
        if entry["stat"] == "mean":
            print(
                f"beam {entry['beam']:>3}: mean F1 {entry['f1']:.3f}, "
                f"mean runtime {entry['runtime_s']:.3f}s"
            )


if __name__ == "__main__":
    main()
