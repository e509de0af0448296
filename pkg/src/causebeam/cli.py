"""Command-line interface: identify, exact, gen, bench."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import benchmarks, exact, metrics
from .beam import BeamConfig, identify_causes, minimize_causes
from .errors import BudgetExceeded, CandidateTooLarge, CausebeamError
from .isi import identify_causes_isi_scm
from .oracles import HEURISTIC_NAMES, ScmOracle, heuristic_for_scm
from .scm import actual_values, context_from_values, scm_from_json, scm_to_json

EXIT_BAD_INPUT = 2
EXIT_BUDGET = 3


def _load_scm(args):
    if args.builtin:
        return benchmarks.make_builtin(args.builtin)
    with open(args.scm) as fh:
        return scm_from_json(fh.read())


def _load_context(scm, args):
    if args.context:
        with open(args.context) as fh:
            return context_from_values(scm, json.load(fh))
    if args.builtin:
        return benchmarks.demo_context(scm)
    raise CausebeamError("--context is required for --scm files")


def _json_value(v):
    if isinstance(v, frozenset):
        return sorted(v)
    return v


def _named_pairs(scm, pairs):
    return [
        {
            "variable": scm.endo_names[var],
            "value": _json_value(scm.endo_domains[var].values[val]),
        }
        for var, val in pairs
    ]


def run_report(scm, context, causes, stats, args, seed, runtime=None):
    report = {
        "scm": scm.name,
        "algorithm": args.algorithm,
        "config": {
            "beam": args.beam,
            "max_steps": args.max_steps,
            "early_stop": args.early_stop,
            "heuristic": args.heuristic,
            "epsilon": args.epsilon,
            "stochastic": args.stochastic,
            "samples": args.samples,
            "batch": args.batch,
            "minimize": args.minimize,
        },
        "seed": seed,
        "context": {
            n: _json_value(d.values[i])
            for n, d, i in zip(scm.exo_names, scm.exo_domains, context)
        },
        "causes": [
            {
                "cause": _named_pairs(scm, c.cause),
                "contingency": _named_pairs(scm, c.contingency),
                "depth": c.depth_found,
            }
            for c in causes
        ],
        "stats": {
            "nodes_evaluated_per_depth": stats.nodes_evaluated_per_depth,
            "causes_per_depth": stats.causes_per_depth,
            "oracle_calls": stats.oracle_calls,
        },
    }
    if runtime is not None:
        report["runtime_s"] = runtime
    return report


def _emit(doc, out):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_seed(args):
    if args.seed is not None:
        return args.seed
    seed = int(np.random.SeedSequence().generate_state(1)[0])
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def cmd_identify(args):
    scm = _load_scm(args)
    context = _load_context(scm, args)
    seed = _resolve_seed(args)
    config = BeamConfig(
        beam_size=args.beam,
        max_steps=args.max_steps,
        early_stop=args.early_stop,
        epsilon=args.epsilon,
        stochastic_mode=args.stochastic,
        n_samples=args.samples,
        batch_size=args.batch,
        t_c=args.tc,
        t_nc=args.tnc,
        t_b=args.tb,
        n_max=args.nmax,
    )
    rng = np.random.default_rng(seed) if scm.stochastic else None
    oracle = ScmOracle(scm, context, rng=rng)
    h_rng = np.random.default_rng(seed) if args.heuristic == "random" else None
    heuristic = heuristic_for_scm(args.heuristic, scm, context, rng=h_rng)
    v_star = actual_values(scm, context)
    start = time.perf_counter()
    if args.algorithm == "base":
        causes, stats = identify_causes(
            scm.search_variables, scm.endo_domains, v_star, oracle, heuristic, config
        )
    else:
        causes, stats = identify_causes_isi_scm(scm, context, oracle, heuristic, config)
    if args.minimize:
        causes = minimize_causes(causes, oracle, v_star, scm.endo_domains)
        stats.oracle_calls = oracle.calls
    runtime = time.perf_counter() - start
    report = run_report(
        scm, context, causes, stats, args, seed, runtime if args.timing else None
    )
    _emit(report, args.output)
    return 0


def cmd_exact(args):
    scm = _load_scm(args)
    context = _load_context(scm, args)
    oracle = ScmOracle(scm, context)
    causes = exact.enumerate_causes_scm(
        scm, context, oracle, max_size=args.max_size, budget=args.budget
    )
    doc = {
        "scm": scm.name,
        "max_size": args.max_size,
        "causes": [
            {
                "cause": _named_pairs(scm, c.cause),
                "contingency": _named_pairs(scm, c.contingency),
                "size": len(c.cause),
            }
            for c in causes
        ],
    }
    _emit(doc, args.output)
    return 0


def cmd_gen(args):
    scm = benchmarks.make_builtin(args.builtin)
    text = scm_to_json(scm) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench(args):
    with open(args.grid) as fh:
        grid = metrics.ExperimentGrid.from_dict(json.load(fh))
    os.makedirs(args.output, exist_ok=True)
    rows_path = os.path.join(args.output, "rows.csv")
    rows, summary = metrics.run_experiment(grid, rows_path)
    metrics.write_summary(summary, os.path.join(args.output, "summary.csv"))
    print(f"wrote {len(rows)} rows to {rows_path}", file=sys.stderr)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="causebeam",
        description="Identify actual causes in discrete structural causal models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_args(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--builtin", help="builtin model, e.g. rock-throwing or smk:3")
        g.add_argument("--scm", help="SCM JSON file")
        p.add_argument("--context", help="context JSON file (exogenous name -> value)")

    p = sub.add_parser("identify", help="run an identification algorithm")
    add_model_args(p)
    p.add_argument("--algorithm", choices=("base", "isi"), default="base")
    p.add_argument("--beam", type=int, default=10)
    p.add_argument("--max-steps", type=int, default=0)
    p.add_argument("--early-stop", action="store_true")
    p.add_argument("--heuristic", choices=HEURISTIC_NAMES, default="positive")
    p.add_argument("--epsilon", type=float, default=0.3)
    p.add_argument("--stochastic", choices=("off", "naive", "lucb"), default="off")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--batch", type=int, default=10)
    p.add_argument("--tc", type=float, default=0.01)
    p.add_argument("--tnc", type=float, default=0.01)
    p.add_argument("--tb", type=float, default=0.1)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--minimize", action="store_true")
    p.add_argument("--timing", action="store_true")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("exact", help="enumerate all causes exhaustively")
    add_model_args(p)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--budget", type=int, default=exact.DEFAULT_BUDGET)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("gen", help="write a builtin model as SCM JSON")
    p.add_argument("--builtin", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run an experiment grid to CSV")
    p.add_argument("grid", help="grid JSON file")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="reserved; runs are sequential")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceeded, CandidateTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CausebeamError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
