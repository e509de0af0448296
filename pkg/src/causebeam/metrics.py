"""Evaluation metrics and the multi-context experiment grid runner."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from math import sqrt

import numpy as np

from . import exact
from .beam import BeamConfig, identify_causes, minimize_causes
from .benchmarks import make_smk_base, make_smk_noisy, sample_contexts
from .errors import BudgetExceeded, ContextInconsistent, InvalidConfig
from .isi import identify_causes_isi_scm
from .oracles import ScmOracle, heuristic_for_scm
from .scm import actual_values


@dataclass
class IdentificationMetrics:
    precision: float
    recall: float
    f1: float
    missed: float
    overshoot: float
    runtime_seconds: float = 0.0
    oracle_calls: int = 0


def cause_sets(causes):
    """Distinct cause variable sets of a CauseResult list."""
    out = []
    for c in causes:
        s = c.cause_vars if hasattr(c, "cause_vars") else frozenset(c)
        if s not in out:
            out.append(s)
    return out


def precision_recall_f1(identified, reference, f1_mode="harmonic"):
    """(precision, recall, f1) over cause variable sets; witnesses ignored.

    Empty identified: precision 1 by convention, recall 0 (or 1 when the
    reference is empty too).
    """
    ident = cause_sets(identified)
    ref = cause_sets(reference)
    matched = sum(1 for s in ident if s in ref)
    precision = matched / len(ident) if ident else 1.0
    recall = matched / len(ref) if ref else 1.0
    if precision + recall == 0:
        f1 = 0.0
    elif f1_mode == "harmonic":
        f1 = 2 * precision * recall / (precision + recall)
    elif f1_mode == "geometric":
        f1 = sqrt(precision * recall)
    else:
        raise InvalidConfig(f"unknown f1 mode {f1_mode!r}")
    return precision, recall, f1


def missed_overshoot(identified, reference):
    """Fractions of reference causes never covered / covered only by strict supersets."""
    ident = cause_sets(identified)
    ref = cause_sets(reference)
    if not ref:
        return 0.0, 0.0
    missed = sum(1 for r in ref if not any(i >= r for i in ident)) / len(ref)
    overshoot = sum(1 for r in ref if any(i > r for i in ident)) / len(ref)
    return missed, overshoot


def compute_metrics(identified, reference, f1_mode="harmonic"):
    p, r, f1 = precision_recall_f1(identified, reference, f1_mode)
    m, o = missed_overshoot(identified, reference)
    return IdentificationMetrics(precision=p, recall=r, f1=f1, missed=m, overshoot=o)


def context_facts(scm, context):
    """Truth of the SD and DK aggregates under the actual assignment."""
    a = actual_values(scm, context)
    return {"SD": scm.value_of(a, "SD") == 1, "DK": scm.value_of(a, "DK") == 1}


def smallest_cause_accuracy(cause, facts):
    """1 iff the cause has the expected smallest size for these context facts.

    Exactly one of SD/DK true: a singleton cancels the target.  Both true:
    both must be flipped, so the smallest cause has size 2.
    """
    sd, dk = bool(facts["SD"]), bool(facts["DK"])
    if not sd and not dk:
        raise ContextInconsistent("target true but neither SD nor DK holds")
    expected = 2 if (sd and dk) else 1
    return int(len(cause.cause_vars) == expected)


# ---------------------------------------------------------------------------
# Experiment grids
# ---------------------------------------------------------------------------

CSV_COLUMNS = [
    "scm",
    "k",
    "algorithm",
    "beam",
    "stochastic_mode",
    "samples",
    "batch",
    "seed",
    "context_id",
    "precision",
    "recall",
    "f1",
    "missed",
    "overshoot",
    "runtime_s",
    "oracle_calls",
    "n_causes",
]

SUMMARY_STATS = ("mean", "median", "min", "max", "q1", "q3")


@dataclass
class ExperimentGrid:
    """Declarative description of one experiment: the cross product of cells."""

    scm: str = "smk"
    ks: tuple = (2,)
    beams: tuple = (25,)
    algorithms: tuple = ("base",)
    stochastic_modes: tuple = ("off",)
    contexts_per_cell: int = 20
    seed: int = 0
    heuristic: str = "positive"
    max_steps: int = 4
    early_stop: bool = False
    n_samples: int = 20
    batch_size: int = 10
    epsilon: float = 0.3
    noise_level: float = 0.01
    reference_max_size: int = 4
    reference_budget: int = exact.DEFAULT_BUDGET
    f1_mode: str = "harmonic"

    def cells(self):
        out = []
        for k in self.ks:
            for algorithm in self.algorithms:
                for beam in self.beams:
                    for mode in self.stochastic_modes:
                        out.append((k, algorithm, beam, mode))
        return out

    @classmethod
    def from_dict(cls, doc):
        known = {f for f in cls.__dataclass_fields__}
        extra = set(doc) - known
        if extra:
            raise InvalidConfig(f"unknown grid fields {sorted(extra)}")
        doc = dict(doc)
        for key in ("ks", "beams", "algorithms", "stochastic_modes"):
            if key in doc:
                doc[key] = tuple(doc[key])
        return cls(**doc)


def derive_seed(seed, cell_index, context_index):
    """Stable per-run seed independent of scheduling order."""
    return int(
        np.random.SeedSequence([seed, cell_index, context_index]).generate_state(1)[0]
    )


def run_identification(scm, context, algorithm, config, heuristic_name, seed=None):
    """One identification run; returns (causes, stats, runtime_seconds)."""
    rng = np.random.default_rng(seed) if scm.stochastic else None
    oracle = ScmOracle(scm, context, rng=rng)
    h_rng = np.random.default_rng(seed) if heuristic_name == "random" else None
    heuristic = heuristic_for_scm(heuristic_name, scm, context, rng=h_rng)
    start = time.perf_counter()
    if algorithm == "base":
        causes, stats = identify_causes(
            scm.search_variables,
            scm.endo_domains,
            actual_values(scm, context),
            oracle,
            heuristic,
            config,
        )
    elif algorithm == "isi":
        causes, stats = identify_causes_isi_scm(scm, context, oracle, heuristic, config)
    else:
        raise InvalidConfig(f"unknown algorithm {algorithm!r}")
    runtime = time.perf_counter() - start
    return causes, stats, runtime


def _grid_scm(grid, k):
    if grid.scm == "smk":
        return make_smk_base(k)
    if grid.scm == "smk-noisy":
        return make_smk_noisy(k, grid.noise_level)
    raise InvalidConfig(f"grid scm {grid.scm!r} not supported")


@dataclass
class _RunRecord:
    cell: tuple
    cell_index: int
    context_index: int
    seed: int
    causes: list
    stats: object
    runtime: float


def run_experiment(grid, out_path):
    """Run every (cell, context) pair; write data and summary CSVs.

    References come from exhaustive enumeration when within budget; cells
    whose instance is too large fall back to the union of all identified
    causes for the context, reduced to minimal sets.
    """
    cells = grid.cells()
    contexts = {}
    base_scms = {}
    noisy_scms = {}
    for k in grid.ks:
        base_scms[k] = make_smk_base(k)
        contexts[k] = sample_contexts(base_scms[k], grid.contexts_per_cell, grid.seed)
        if grid.scm == "smk-noisy":
            noisy_scms[k] = make_smk_noisy(k, grid.noise_level)

    records = []
    for cell_index, cell in enumerate(cells):
        k, algorithm, beam, mode = cell
        scm = noisy_scms[k] if mode != "off" else base_scms[k]
        for context_index, context in enumerate(contexts[k]):
            seed = derive_seed(grid.seed, cell_index, context_index)
            config = BeamConfig(
                beam_size=beam,
                max_steps=grid.max_steps,
                early_stop=grid.early_stop,
                epsilon=grid.epsilon,
                stochastic_mode=mode,
                n_samples=grid.n_samples,
                batch_size=grid.batch_size,
            )
            causes, stats, runtime = run_identification(
                scm, context, algorithm, config, grid.heuristic, seed=seed
            )
            records.append(
                _RunRecord(cell, cell_index, context_index, seed, causes, stats, runtime)
            )

    references = _build_references(grid, base_scms, contexts, records)

    rows = []
    for rec in records:
        k, algorithm, beam, mode = rec.cell
        reference = references[(k, rec.context_index)]
        m = compute_metrics(rec.causes, reference, grid.f1_mode)
        rows.append(
            {
                "scm": grid.scm,
                "k": k,
                "algorithm": algorithm,
                "beam": beam,
                "stochastic_mode": mode,
                "samples": grid.n_samples,
                "batch": grid.batch_size,
                "seed": rec.seed,
                "context_id": rec.context_index,
                "precision": round(m.precision, 6),
                "recall": round(m.recall, 6),
                "f1": round(m.f1, 6),
                "missed": round(m.missed, 6),
                "overshoot": round(m.overshoot, 6),
                "runtime_s": round(rec.runtime, 6),
                "oracle_calls": rec.stats.oracle_calls,
                "n_causes": len(cause_sets(rec.causes)),
            }
        )
    write_rows(rows, out_path)
    summary = summarize(rows)
    return rows, summary


def _build_references(grid, base_scms, contexts, records):
    references = {}
    by_context = {}
    for rec in records:
        k = rec.cell[0]
        by_context.setdefault((k, rec.context_index), []).extend(rec.causes)
    for k in grid.ks:
        for context_index, context in enumerate(contexts[k]):
            key = (k, context_index)
            scm = base_scms[k]
            oracle = ScmOracle(scm, context)
            try:
                references[key] = exact.enumerate_causes_scm(
                    scm,
                    context,
                    oracle,
                    max_size=grid.reference_max_size,
                    budget=grid.reference_budget,
                )
            except BudgetExceeded:
                v_star = actual_values(scm, context)
                pool = by_context.get(key, [])
                references[key] = minimize_causes(
                    pool, oracle, v_star, scm.endo_domains
                )
    return references


def write_rows(rows, out_path):
    with open(out_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def summarize(rows):
    """Per-cell distribution summary over the metric columns."""
    cells = {}
    for row in rows:
        key = (row["scm"], row["k"], row["algorithm"], row["beam"], row["stochastic_mode"])
        cells.setdefault(key, []).append(row)
    out = []
    for key, cell_rows in cells.items():
        for stat in SUMMARY_STATS:
            entry = {
                "scm": key[0],
                "k": key[1],
                "algorithm": key[2],
                "beam": key[3],
                "stochastic_mode": key[4],
                "stat": stat,
            }
            for col in ("precision", "recall", "f1", "missed", "overshoot", "runtime_s", "oracle_calls", "n_causes"):
                values = np.array([float(r[col]) for r in cell_rows])
                entry[col] = round(_stat(values, stat), 6)
            out.append(entry)
    return out


def _stat(values, stat):
    if stat == "mean":
        return float(np.mean(values))
    if stat == "median":
        return float(np.median(values))
    if stat == "min":
        return float(np.min(values))
    if stat == "max":
        return float(np.max(values))
    if stat == "q1":
        return float(np.quantile(values, 0.25))
    if stat == "q3":
        return float(np.quantile(values, 0.75))
    raise InvalidConfig(f"unknown stat {stat!r}")


def write_summary(summary, out_path):
    columns = ["scm", "k", "algorithm", "beam", "stochastic_mode", "stat",
               "precision", "recall", "f1", "missed", "overshoot",
               "runtime_s", "oracle_calls", "n_causes"]
    with open(out_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        writer.writerows(summary)
