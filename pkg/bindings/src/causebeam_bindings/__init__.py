"""Thin scripting layer over the causebeam public interfaces.

Exposes dict-based model construction, both identifiers, exhaustive
enumeration, and user-defined oracle callables.  Interventions cross the
callable boundary as lists of (variable-name, value-index) pairs; reports
returned by :func:`identify` follow the causebeam CLI JSON schema exactly.
"""

from __future__ import annotations

import numpy as np

import causebeam as cb
from causebeam import Scm, benchmarks

__all__ = [
    "Scm",
    "benchmarks",
    "build_scm",
    "to_spec",
    "identify",
    "identify_isi",
    "identify_oracle",
    "enumerate_exact",
]

__version__ = "0.1.0"


def build_scm(spec):
    """Native Scm handle from a dict matching the SCM JSON schema."""
    return cb.scm_from_dict(spec)


def to_spec(handle):
    """Canonical dict form of a handle; inverse of :func:`build_scm`."""
    return cb.scm_to_dict(handle)


_DEFAULTS = {
    "algorithm": "base",
    "beam": 10,
    "max_steps": 0,
    "early_stop": False,
    "heuristic": "positive",
    "epsilon": 0.3,
    "stochastic": "off",
    "samples": 20,
    "batch": 10,
    "tc": 0.01,
    "tnc": 0.01,
    "tb": 0.1,
    "nmax": None,
    "seed": None,
    "minimize": False,
    "timing": False,
}


def _options(overrides):
    unknown = set(overrides) - set(_DEFAULTS)
    if unknown:
        raise cb.InvalidConfig(f"unknown options {sorted(unknown)}")
    return {**_DEFAULTS, **overrides}


def _config(opt):
    return cb.BeamConfig(
        beam_size=opt["beam"],
        max_steps=opt["max_steps"],
        early_stop=opt["early_stop"],
        epsilon=opt["epsilon"],
        stochastic_mode=opt["stochastic"],
        n_samples=opt["samples"],
        batch_size=opt["batch"],
        t_c=opt["tc"],
        t_nc=opt["tnc"],
        t_b=opt["tb"],
        n_max=opt["nmax"],
    )


def _resolve_seed(opt):
    if opt["seed"] is not None:
        return opt["seed"]
    return int(np.random.SeedSequence().generate_state(1)[0])


def _json_value(v):
    if isinstance(v, frozenset):
        return sorted(v)
    return v


def _named_pairs(names, domains, pairs):
    return [
        {"variable": names[var], "value": _json_value(domains[var].values[val])}
        for var, val in pairs
    ]


def _report(scm, context, causes, stats, opt, seed, runtime):
    report = {
        "scm": scm.name,
        "algorithm": opt["algorithm"],
        "config": {
            "beam": opt["beam"],
            "max_steps": opt["max_steps"],
            "early_stop": opt["early_stop"],
            "heuristic": opt["heuristic"],
            "epsilon": opt["epsilon"],
            "stochastic": opt["stochastic"],
            "samples": opt["samples"],
            "batch": opt["batch"],
            "minimize": opt["minimize"],
        },
        "seed": seed,
        "context": {
            n: _json_value(d.values[i])
            for n, d, i in zip(scm.exo_names, scm.exo_domains, context)
        },
        "causes": [
            {
                "cause": _named_pairs(scm.endo_names, scm.endo_domains, c.cause),
                "contingency": _named_pairs(
                    scm.endo_names, scm.endo_domains, c.contingency
                ),
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


def identify(scm, context, **options):
    """Run an identifier on an Scm handle; returns the CLI-schema report dict."""
    import time

    opt = _options(options)
    seed = _resolve_seed(opt)
    config = _config(opt)
    rng = np.random.default_rng(seed) if scm.stochastic else None
    oracle = cb.ScmOracle(scm, context, rng=rng)
    h_rng = np.random.default_rng(seed) if opt["heuristic"] == "random" else None
    heuristic = cb.heuristic_for_scm(opt["heuristic"], scm, context, rng=h_rng)
    v_star = cb.actual_values(scm, context)
    start = time.perf_counter()
    if opt["algorithm"] == "base":
        causes, stats = cb.identify_causes(
            scm.search_variables, scm.endo_domains, v_star, oracle, heuristic, config
        )
    elif opt["algorithm"] == "isi":
        causes, stats = cb.identify_causes_isi_scm(
            scm, context, oracle, heuristic, config
        )
    else:
        raise cb.InvalidConfig(f"unknown algorithm {opt['algorithm']!r}")
    if opt["minimize"]:
        causes = cb.minimize_causes(causes, oracle, v_star, scm.endo_domains)
        stats.oracle_calls = oracle.calls
    runtime = time.perf_counter() - start
    return _report(
        scm, context, causes, stats, opt, seed, runtime if opt["timing"] else None
    )


def identify_isi(scm, context, **options):
    """ISI identifier on an Scm handle; same report schema as :func:`identify`."""
    return identify(scm, context, algorithm="isi", **options)


class _UserOracle(cb.Oracle):
    """Adapts a user callable taking (variable-name, value-index) pair lists.

    The callable is never invoked concurrently.  ``post_state`` is the shallow
    actual state with the intervention overlaid, matching what an external
    observer of a black box could see.
    """

    def __init__(self, fn, names, v_star, stochastic=False):
        super().__init__()
        self.fn = fn
        self.names = tuple(names)
        self.v_star = tuple(v_star)
        self.stochastic = stochastic
        self.reentrant = False

    def _query(self, e):
        named = [(self.names[var], val) for var, val in e]
        try:
            return int(self.fn(named))
        except Exception as exc:
            raise type(exc)(
                f"oracle callable failed on intervention {named}: {exc}"
            ) from exc

    def post_state(self, e):
        state = list(self.v_star)
        for var, val in e:
            state[var] = val
        return tuple(state)


def identify_oracle(fn, variables, domains, v_star, **options):
    """Base identifier over a user oracle callable.

    ``variables`` are names, ``domains`` sequences of raw values, ``v_star``
    actual value indices.  The callable receives a (variable-name,
    value-index) pair list and returns 0/1.  Returns a list of cause records
    with the same name/index encoding.
    """
    opt = _options(options)
    if opt["algorithm"] != "base":
        raise cb.InvalidConfig("user oracle callables support the base algorithm only")
    seed = _resolve_seed(opt)
    config = _config(opt)
    names = tuple(variables)
    doms = tuple(cb.Domain(tuple(d)) for d in domains)
    v_star = tuple(v_star)
    oracle = _UserOracle(fn, names, v_star, stochastic=opt["stochastic"] != "off")
    h_rng = np.random.default_rng(seed) if opt["heuristic"] == "random" else None
    heuristic = cb.make_heuristic(
        opt["heuristic"],
        domains=doms,
        v_star=v_star,
        n_vars=len(names),
        rng=h_rng,
        names=names,
    )
    causes, stats = cb.identify_causes(
        tuple(range(len(names))), doms, v_star, oracle, heuristic, config
    )
    return [
        {
            "cause": [(names[var], val) for var, val in c.cause],
            "contingency": [(names[var], val) for var, val in c.contingency],
            "depth": c.depth_found,
        }
        for c in causes
    ]


def enumerate_exact(scm, context, max_size=None, budget=None):
    """Exhaustive cause enumeration; returns the CLI 'exact' JSON document."""
    oracle = cb.ScmOracle(scm, context)
    kwargs = {"max_size": max_size}
    if budget is not None:
        kwargs["budget"] = budget
    causes = cb.enumerate_causes_scm(scm, context, oracle, **kwargs)
    return {
        "scm": scm.name,
        "max_size": max_size,
        "causes": [
            {
                "cause": _named_pairs(scm.endo_names, scm.endo_domains, c.cause),
                "contingency": _named_pairs(
                    scm.endo_names, scm.endo_domains, c.contingency
                ),
                "size": len(c.cause),
            }
            for c in causes
        ],
    }
