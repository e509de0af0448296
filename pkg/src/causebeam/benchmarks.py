"""Benchmark SCM generators and the experiment context sampler.

The "steal master key" (SMK) family models k attackers trying to obtain a
master key, either by decrypting it (key + passphrase) or by stealing it
from the key management service; only the first successful attacker counts.
Four variants: base Boolean, non-Boolean (set-valued condensed variables),
black-box (leaves only, hidden equations), and noisy (per-assignment value
flips).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig, KTooLargeForSetDomains, SamplingExhausted
from .oracles import BlackBoxOracle
from .scm import BOOL_DOMAIN, Domain, Scm, evaluate

BOOL = Domain(BOOL_DOMAIN)

LEAF_ACTIONS = ("FS", "FN", "FF", "FDB", "A", "AD")


def _v(name):
    return {"var": name}


def _u(name):
    return {"exo": name}


def _and(*args):
    return {"op": "and", "args": list(args)}


def _or(*args):
    return {"op": "or", "args": list(args)}


def _not(arg):
    return {"op": "not", "args": [arg]}


def make_rock_throwing():
    """Two throwers, one bottle; the first rock to hit shatters it."""
    equations = {
        "BT": {"op": "identity", "args": [_u("bt")]},
        "ST": {"op": "identity", "args": [_u("st")]},
        "BH": _and(_v("BT"), _not(_v("SH"))),
        "SH": {"op": "identity", "args": [_v("ST")]},
        "BS": _or(_v("BH"), _v("SH")),
    }
    names = ("BT", "ST", "BH", "SH", "BS")
    return Scm(
        endo_names=names,
        endo_domains=(BOOL,) * 5,
        exo_names=("st", "bt"),
        exo_domains=(BOOL, BOOL),
        equations=tuple(equations[n] for n in names),
        target="BS",
        name="rock-throwing",
    )


def smk_exo_names(k):
    out = []
    for i in range(1, k + 1):
        out.extend(f"{a.lower()}_{i}" for a in LEAF_ACTIONS)
    return tuple(out)


def make_smk_base(k):
    """Boolean SMK with k attackers; target SMK = DK or SD."""
    if k < 1:
        raise InvalidConfig("k must be >= 1")
    names = ["SMK", "DK", "SD"]
    for i in range(1, k + 1):
        names.extend(
            [f"DK_{i}", f"SD_{i}", f"GP_{i}", f"GK_{i}", f"KMS_{i}"]
            + [f"{a}_{i}" for a in LEAF_ACTIONS]
        )
    eqs = {
        "SMK": _or(_v("DK"), _v("SD")),
        "DK": _or(*(_v(f"DK_{i}") for i in range(1, k + 1))),
        "SD": _or(*(_v(f"SD_{i}") for i in range(1, k + 1))),
    }
    for i in range(1, k + 1):
        eqs[f"DK_{i}"] = _and(
            _v(f"GP_{i}"),
            _v(f"GK_{i}"),
            *(_not(_v(f"DK_{j}")) for j in range(1, i)),
        )
        eqs[f"SD_{i}"] = _and(
            _v(f"KMS_{i}"), *(_not(_v(f"SD_{j}")) for j in range(1, i))
        )
        eqs[f"GP_{i}"] = _or(_v(f"FS_{i}"), _v(f"FN_{i}"))
        eqs[f"GK_{i}"] = _or(_v(f"FF_{i}"), _v(f"FDB_{i}"))
        eqs[f"KMS_{i}"] = _and(_v(f"A_{i}"), _v(f"AD_{i}"))
        for a in LEAF_ACTIONS:
            eqs[f"{a}_{i}"] = {"op": "identity", "args": [_u(f"{a.lower()}_{i}")]}
    exo = smk_exo_names(k)
    return Scm(
        endo_names=tuple(names),
        endo_domains=(BOOL,) * len(names),
        exo_names=exo,
        exo_domains=(BOOL,) * len(exo),
        equations=tuple(eqs[n] for n in names),
        target="SMK",
        name=f"smk:{k}",
    )


MAX_SET_DOMAIN_K = 12


def set_domain(k):
    """All subsets of attacker indices 0..k-1, binary-counting order."""
    values = []
    for code in range(2**k):
        values.append(frozenset(i for i in range(k) if code >> i & 1))
    return Domain(tuple(values))


def make_smk_nonboolean(k):
    """Set-valued SMK: one condensed variable per action listing the attackers.

    Attacker indices are 0-based; SD and DK carry the first (minimum)
    successful attacker index, -1 when none.
    """
    if k < 1:
        raise InvalidConfig("k must be >= 1")
    if k > MAX_SET_DOMAIN_K:
        raise KTooLargeForSetDomains(
            f"2^{k} set values exceed the domain budget (k <= {MAX_SET_DOMAIN_K})"
        )
    sets = set_domain(k)
    rank = Domain(tuple(range(-1, k)))
    names = ("SMK", "DK", "SD", "GP", "GK", "KMS") + LEAF_ACTIONS
    domains = {
        "SMK": BOOL,
        "DK": rank,
        "SD": rank,
        "GP": sets,
        "GK": sets,
        "KMS": sets,
    }
    for a in LEAF_ACTIONS:
        domains[a] = sets
    eqs = {
        "SMK": _or(
            {"op": "threshold", "args": [_v("DK")], "gt": -1},
            {"op": "threshold", "args": [_v("SD")], "gt": -1},
        ),
        "DK": {
            "op": "min-else",
            "args": [{"op": "set-intersection", "args": [_v("GP"), _v("GK")]}],
            "default": -1,
        },
        "SD": {"op": "min-else", "args": [_v("KMS")], "default": -1},
        "GP": {"op": "set-union", "args": [_v("FS"), _v("FN")]},
        "GK": {"op": "set-union", "args": [_v("FF"), _v("FDB")]},
        "KMS": {"op": "set-intersection", "args": [_v("A"), _v("AD")]},
    }
    for a in LEAF_ACTIONS:
        eqs[a] = {
            "op": "index-set",
            "args": [_u(f"{a.lower()}_{i}") for i in range(1, k + 1)],
        }
    exo = smk_exo_names(k)
    return Scm(
        endo_names=names,
        endo_domains=tuple(domains[n] for n in names),
        exo_names=exo,
        exo_domains=(BOOL,) * len(exo),
        equations=tuple(eqs[n] for n in names),
        target="SMK",
        name=f"smk-nonboolean:{k}",
    )


@dataclass
class BlackBoxSystem:
    """Leaf-variable view of an SMK instance with hidden equations.

    Only the 6k per-attacker action variables are visible; the target answer
    comes from an oracle, so no causal graph is available.
    """

    variable_names: tuple
    domains: tuple
    exo_names: tuple
    hidden: Scm

    def oracle(self, context, rng=None):
        return BlackBoxOracle(self.hidden, context, self.variable_names, rng=rng)


def make_smk_blackbox(k):
    hidden = make_smk_base(k)
    leaves = tuple(
        f"{a}_{i}" for i in range(1, k + 1) for a in LEAF_ACTIONS
    )
    return BlackBoxSystem(
        variable_names=leaves,
        domains=(BOOL,) * len(leaves),
        exo_names=hidden.exo_names,
        hidden=hidden,
    )


def make_smk_noisy(k, noise_level=0.01, exempt_leaves=False):
    """Base SMK where every assignment flips with the given probability."""
    if not 0 <= noise_level < 0.5:
        raise InvalidConfig("noise_level must lie in [0, 0.5)")
    scm = make_smk_base(k)
    exempt = frozenset()
    if exempt_leaves:
        exempt = frozenset(
            scm.endo_index[f"{a}_{i}"]
            for i in range(1, k + 1)
            for a in LEAF_ACTIONS
        )
    scm.noise_level = noise_level
    scm.noise_exempt = exempt
    scm.name = f"smk-noisy:{k}"
    return scm


def sample_contexts(scm, n, seed, max_attempts=None):
    """n distinct balanced contexts under which the target is true.

    Balanced: the number of true exogenous values is m//2 (or m//2 + 1 for
    odd m, chosen at random).  Rejection sampling from the given seed.
    """
    if n < 0:
        raise InvalidConfig("n must be >= 0")
    rng = np.random.default_rng(seed)
    m = len(scm.exo_names)
    if max_attempts is None:
        max_attempts = max(10_000, 2_000 * n)
    found = []
    seen = set()
    attempts = 0
    while len(found) < n:
        if attempts >= max_attempts:
            raise SamplingExhausted(
                f"found {len(found)}/{n} contexts in {max_attempts} attempts"
            )
        attempts += 1
        n_true = m // 2 + (int(rng.integers(2)) if m % 2 else 0)
        trues = rng.choice(m, size=n_true, replace=False)
        context = tuple(1 if i in set(trues.tolist()) else 0 for i in range(m))
        if context in seen:
            continue
        seen.add(context)
        assignment = evaluate(scm, context, (), noiseless=True)
        if scm.value_of(assignment, scm.target) == 1:
            found.append(context)
    return found


def demo_context(scm):
    """Deterministic default context per builtin (target true by construction).

    For SMK instances, attacker 2 decrypts the key; a few other actions
    partially succeed so the instance has non-trivial causes.
    """
    if scm.name == "rock-throwing":
        return tuple(1 for _ in scm.exo_names)
    trues = set()
    k = len(scm.exo_names) // 6
    if k == 1:
        trues = {"a_1", "fs_1", "ff_1"}
    else:
        trues = {"a_1", "fs_2", "fn_2", "ff_2", "fdb_2", "ad_2"}
        if k >= 3:
            trues |= {"fs_3", "ff_3", "a_3"}
    return tuple(1 if n in trues else 0 for n in scm.exo_names)


def make_builtin(spec):
    """Builtin SCM from a CLI-style name: rock-throwing, smk:K, smk-nonboolean:K, smk-noisy:K."""
    if spec == "rock-throwing":
        return make_rock_throwing()
    if ":" in spec:
        kind, _, arg = spec.partition(":")
        try:
            k = int(arg)
        except ValueError:
            raise InvalidConfig(f"bad attacker count {arg!r}") from None
        if kind == "smk":
            return make_smk_base(k)
        if kind == "smk-nonboolean":
            return make_smk_nonboolean(k)
        if kind == "smk-noisy":
            return make_smk_noisy(k)
    raise InvalidConfig(f"unknown builtin {spec!r}")
