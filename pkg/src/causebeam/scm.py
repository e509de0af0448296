"""Discrete structural causal models: representation, evaluation, HP-cause checking.

Variables are referred to by dense integer indices; the value of a variable is
always an index into its (ordered, finite) domain.  Structural assignments are
expression trees over a small vocabulary of builtin forms, which keeps models
serializable and picklable.
"""

from __future__ import annotations

import heapq
import itertools
import json
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import (
    CandidateTooLarge,
    CycleDetected,
    UnknownVariable,
    ValueOutsideDomain,
)

BOOL_DOMAIN = (0, 1)


@dataclass(frozen=True)
class Domain:
    """Ordered list of distinct discrete values (ints, bools-as-ints, frozensets)."""

    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueOutsideDomain("domain must be non-empty")
        if len(set(self.values)) != len(self.values):
            raise ValueOutsideDomain("domain values must be distinct")

    def index_of(self, value):
        try:
            return self.values.index(value)
        except ValueError:
            raise ValueOutsideDomain(f"value {value!r} not in domain") from None

    def __len__(self):
        return len(self.values)

    @property
    def is_boolean(self):
        return self.values == BOOL_DOMAIN


# ---------------------------------------------------------------------------
# Expression trees
#
# Builtin forms:
#   {"var": name}                      endogenous reference
#   {"exo": name}                      exogenous reference
#   {"const": value}                   literal (lists denote sets)
#   {"op": "and"|"or", "args": [...]}
#   {"op": "not", "args": [x]}
#   {"op": "identity", "args": [x]}
#   {"op": "set-union"|"set-intersection", "args": [...]}
#   {"op": "min-else", "args": [x], "default": d}   min over a set value, d if empty
#   {"op": "threshold", "args": [x], "gt": c}       1 iff x > c
#   {"op": "index-set", "args": [...]}              set of indices of truthy args
# ---------------------------------------------------------------------------


def _const_value(raw):
    if isinstance(raw, list):
        return frozenset(raw)
    return raw


def compile_expr(expr, endo_index, exo_index):
    """Compile an expression tree to fn(endo_values, exo_values) -> raw value."""
    if "var" in expr:
        name = expr["var"]
        if name not in endo_index:
            raise UnknownVariable(name)
        i = endo_index[name]
        return lambda v, u: v[i]
    if "exo" in expr:
        name = expr["exo"]
        if name not in exo_index:
            raise UnknownVariable(name)
        i = exo_index[name]
        return lambda v, u: u[i]
    if "const" in expr:
        c = _const_value(expr["const"])
        return lambda v, u: c
    op = expr["op"]
    args = [compile_expr(a, endo_index, exo_index) for a in expr.get("args", [])]
    if op == "and":
        return lambda v, u: int(all(f(v, u) for f in args))
    if op == "or":
        return lambda v, u: int(any(f(v, u) for f in args))
    if op == "not":
        (f,) = args
        return lambda v, u: int(not f(v, u))
    if op == "identity":
        (f,) = args
        return lambda v, u: f(v, u)
    if op == "set-union":
        return lambda v, u: frozenset().union(*(f(v, u) for f in args))
    if op == "set-intersection":
        first, rest = args[0], args[1:]
        return lambda v, u: frozenset(first(v, u)).intersection(*(f(v, u) for f in rest))
    if op == "min-else":
        (f,) = args
        default = expr.get("default", -1)
        return lambda v, u: (min(f(v, u)) if f(v, u) else default)
    if op == "threshold":
        (f,) = args
        cutoff = expr["gt"]
        return lambda v, u: int(f(v, u) > cutoff)
    if op == "index-set":
        return lambda v, u: frozenset(i for i, f in enumerate(args) if f(v, u))
    raise UnknownVariable(f"unknown expression op {op!r}")


_VECTOR_OPS = {"and", "or", "not", "identity", "threshold"}


def compile_expr_vec(expr, endo_index, exo_index):
    """Vectorized compilation for fully boolean/threshold models.

    Returns fn(cols, u) where cols is a list of bool arrays (one per endogenous
    variable, filled in topological order) and u is the scalar exogenous tuple.
    Returns None when the expression uses a non-vectorizable form.
    """
    if "var" in expr:
        i = endo_index[expr["var"]]
        return lambda cols, u, n: cols[i]
    if "exo" in expr:
        i = exo_index[expr["exo"]]
        return lambda cols, u, n: np.full(n, bool(u[i]))
    if "const" in expr:
        c = _const_value(expr["const"])
        if isinstance(c, frozenset):
            return None
        return lambda cols, u, n: np.full(n, bool(c))
    op = expr["op"]
    if op not in _VECTOR_OPS:
        return None
    args = [compile_expr_vec(a, endo_index, exo_index) for a in expr.get("args", [])]
    if any(a is None for a in args):
        return None
    if op == "and":
        return lambda cols, u, n: np.logical_and.reduce([f(cols, u, n) for f in args])
    if op == "or":
        return lambda cols, u, n: np.logical_or.reduce([f(cols, u, n) for f in args])
    if op == "not":
        (f,) = args
        return lambda cols, u, n: ~f(cols, u, n)
    if op == "identity":
        (f,) = args
        return lambda cols, u, n: f(cols, u, n)
    if op == "threshold":
        (f,) = args
        cutoff = expr["gt"]
        return lambda cols, u, n: f(cols, u, n).astype(np.int8) > cutoff


def expr_references(expr):
    """(endogenous names, exogenous names) referenced by an expression tree."""
    endo, exo = set(), set()
    stack = [expr]
    while stack:
        e = stack.pop()
        if "var" in e:
            endo.add(e["var"])
        elif "exo" in e:
            exo.add(e["exo"])
        else:
            stack.extend(e.get("args", []))
    return endo, exo


# ---------------------------------------------------------------------------
# The model
# ---------------------------------------------------------------------------


@dataclass
class Scm:
    """A discrete SCM.

    ``equations[i]`` computes the raw value of endogenous variable ``i`` from
    raw endogenous values and raw exogenous values.  ``parents[i]`` lists the
    endogenous parents (derived from the equations when omitted).  ``target``
    names the endogenous variable whose truth (raw value == 1) is the target
    predicate.  ``noise_level`` > 0 makes the model stochastic: every computed
    boolean assignment flips with that probability (variables listed in
    ``noise_exempt`` never flip).
    """

    endo_names: tuple
    endo_domains: tuple
    exo_names: tuple
    exo_domains: tuple
    equations: tuple
    target: str
    parents: tuple = None
    noise_level: float = 0.0
    noise_exempt: frozenset = frozenset()
    name: str = "scm"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.endo_names = tuple(self.endo_names)
        self.endo_domains = tuple(self.endo_domains)
        self.exo_names = tuple(self.exo_names)
        self.exo_domains = tuple(self.exo_domains)
        self.equations = tuple(self.equations)
        if len(set(self.endo_names)) != len(self.endo_names):
            raise UnknownVariable("duplicate endogenous variable names")
        if len(set(self.exo_names)) != len(self.exo_names):
            raise UnknownVariable("duplicate exogenous variable names")
        if self.target not in self.endo_names:
            raise UnknownVariable(f"target {self.target!r} is not endogenous")
        if self.parents is None:
            self.parents = tuple(
                tuple(sorted(self.endo_index[n] for n in expr_references(eq)[0]))
                for eq in self.equations
            )
        else:
            self.parents = tuple(tuple(p) for p in self.parents)

    # -- derived structure, computed lazily and cached on the instance --

    @property
    def endo_index(self):
        if "endo_index" not in self._cache:
            self._cache["endo_index"] = {n: i for i, n in enumerate(self.endo_names)}
        return self._cache["endo_index"]

    @property
    def exo_index(self):
        if "exo_index" not in self._cache:
            self._cache["exo_index"] = {n: i for i, n in enumerate(self.exo_names)}
        return self._cache["exo_index"]

    @property
    def target_index(self):
        return self.endo_index[self.target]

    @property
    def n_endo(self):
        return len(self.endo_names)

    @property
    def topo_order(self):
        if "topo" not in self._cache:
            self._cache["topo"] = topological_order(self)
        return self._cache["topo"]

    @property
    def compiled(self):
        if "compiled" not in self._cache:
            self._cache["compiled"] = tuple(
                compile_expr(eq, self.endo_index, self.exo_index) for eq in self.equations
            )
        return self._cache["compiled"]

    @property
    def value_index(self):
        """Per-variable dict mapping raw value -> domain index."""
        if "value_index" not in self._cache:
            self._cache["value_index"] = tuple(
                {v: i for i, v in enumerate(d.values)} for d in self.endo_domains
            )
        return self._cache["value_index"]

    @property
    def is_boolean(self):
        return all(d.is_boolean for d in self.endo_domains)

    @property
    def search_variables(self):
        """All endogenous variables except the target, in declaration order."""
        t = self.target_index
        return tuple(i for i in range(self.n_endo) if i != t)

    @property
    def stochastic(self):
        return self.noise_level > 0.0

    def variable_id(self, name):
        try:
            return self.endo_index[name]
        except KeyError:
            raise UnknownVariable(name) from None

    def raw_values(self, assignment):
        """Map an index assignment to raw domain values."""
        return tuple(d.values[i] for d, i in zip(self.endo_domains, assignment))

    def value_of(self, assignment, name):
        i = self.endo_index[name]
        return self.endo_domains[i].values[assignment[i]]


def topological_order(scm):
    """Parent-before-child order over endogenous variables, ties by index."""
    n = scm.n_endo
    indegree = [len(p) for p in scm.parents]
    children = [[] for _ in range(n)]
    for x, ps in enumerate(scm.parents):
        for p in ps:
            children[p].append(x)
    ready = [i for i in range(n) if indegree[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        x = heapq.heappop(ready)
        order.append(x)
        for c in children[x]:
            indegree[c] -= 1
            if indegree[c] == 0:
                heapq.heappush(ready, c)
    if len(order) != n:
        stuck = min(i for i in range(n) if indegree[i] > 0)
        raise CycleDetected(scm.endo_names[stuck])
    return tuple(order)


# ---------------------------------------------------------------------------
# Contexts, interventions, evaluation
# ---------------------------------------------------------------------------


def context_from_values(scm, mapping):
    """Build a context (tuple of exogenous value indices) from {name: raw value}."""
    got = set(mapping)
    expected = set(scm.exo_names)
    if got != expected:
        missing = expected - got
        extra = got - expected
        raise UnknownVariable(f"context mismatch (missing={sorted(missing)}, extra={sorted(extra)})")
    return tuple(
        d.index_of(mapping[n]) for n, d in zip(scm.exo_names, scm.exo_domains)
    )


def context_raw(scm, context):
    return tuple(d.values[i] for d, i in zip(scm.exo_domains, context))


def intervention(pairs):
    """Canonical intervention: sorted tuple of (variable index, value index)."""
    pairs = tuple(sorted(pairs))
    seen = {v for v, _ in pairs}
    if len(seen) != len(pairs):
        raise ValueOutsideDomain("duplicate variable in intervention")
    return pairs


def intervention_from_names(scm, pairs):
    """Intervention from (name, raw value) pairs."""
    out = []
    for name, value in pairs:
        i = scm.variable_id(name)
        out.append((i, scm.endo_domains[i].index_of(value)))
    return intervention(out)


def validate_intervention(scm, e):
    seen = set()
    for var, val in e:
        if not (0 <= var < scm.n_endo):
            raise UnknownVariable(f"variable index {var}")
        if var in seen:
            raise ValueOutsideDomain("duplicate variable in intervention")
        seen.add(var)
        if not (0 <= val < len(scm.endo_domains[var])):
            raise ValueOutsideDomain(
                f"value index {val} outside domain of {scm.endo_names[var]}"
            )


def evaluate(scm, context, e=(), rng=None, noiseless=False):
    """Assignment (value index per endogenous variable) under context and intervention.

    Intervened variables take exactly their forced values; the rest follow
    their structural assignment in topological order.  A stochastic model
    needs ``rng`` unless ``noiseless`` is set.
    """
    validate_intervention(scm, e)
    return _evaluate(scm, context, e, rng, noiseless)


def _evaluate(scm, context, e, rng=None, noiseless=False):
    noisy = scm.stochastic and not noiseless
    if noisy and rng is None:
        raise ValueOutsideDomain("stochastic model requires an rng (or noiseless=True)")
    forced = dict(e)
    u = context_raw(scm, context)
    raw = [None] * scm.n_endo
    idx = [0] * scm.n_endo
    compiled = scm.compiled
    domains = scm.endo_domains
    vindex = scm.value_index
    flip = scm.noise_level
    exempt = scm.noise_exempt
    for x in scm.topo_order:
        if x in forced:
            i = forced[x]
            idx[x] = i
            raw[x] = domains[x].values[i]
            continue
        value = compiled[x](raw, u)
        if noisy and x not in exempt and rng.random() < flip:
            value = 1 - value
        try:
            i = vindex[x][value]
        except (KeyError, TypeError):
            raise ValueOutsideDomain(
                f"equation for {scm.endo_names[x]} produced {value!r} outside its domain"
            ) from None
        idx[x] = i
        raw[x] = value
    return tuple(idx)


def actual_values(scm, context):
    """Assignment under the empty intervention."""
    return evaluate(scm, context, (), noiseless=True)


def split_sets(e, v_star):
    """Partition an intervention's variables into (counterfactual, contingency).

    A pair lands on the counterfactual side iff its value differs from the
    actual one.
    """
    cause, contingency = set(), set()
    for var, val in e:
        (cause if val != v_star[var] else contingency).add(var)
    return frozenset(cause), frozenset(contingency)


def cf_part(e, v_star):
    """Counterfactual variable set of an intervention (frozen)."""
    return frozenset(var for var, val in e if val != v_star[var])


# ---------------------------------------------------------------------------
# Batch evaluation (boolean deterministic models)
# ---------------------------------------------------------------------------


class BatchEvaluator:
    """Vectorized evaluation of many interventions on a boolean deterministic SCM."""

    def __init__(self, scm, context):
        if scm.stochastic:
            raise ValueOutsideDomain("batch evaluation needs a deterministic model")
        self.scm = scm
        self.u = context_raw(scm, context)
        fns = []
        for eq in scm.equations:
            f = compile_expr_vec(eq, scm.endo_index, scm.exo_index)
            if f is None or not scm.is_boolean:
                raise ValueOutsideDomain("batch evaluation needs boolean equations")
            fns.append(f)
        self.fns = fns

    def run(self, mask, vals):
        """Evaluate; ``mask``/``vals`` are (n, |V|) bool arrays (forced?, forced value).

        Returns an (n, |V|) bool matrix of post-intervention values.
        """
        n = mask.shape[0]
        cols = [None] * self.scm.n_endo
        for x in self.scm.topo_order:
            col = self.fns[x](cols, self.u, n)
            m = mask[:, x]
            if m.any():
                col = np.where(m, vals[:, x], col)
            cols[x] = col
        return np.column_stack(cols)

    def target_values(self, mask, vals):
        return self.run(mask, vals)[:, self.scm.target_index]


def pack_interventions(n_endo, elements):
    """Pack canonical interventions into (mask, vals) boolean matrices."""
    n = len(elements)
    mask = np.zeros((n, n_endo), dtype=bool)
    vals = np.zeros((n, n_endo), dtype=bool)
    for r, e in enumerate(elements):
        for var, val in e:
            mask[r, var] = True
            vals[r, var] = bool(val)
    return mask, vals


# ---------------------------------------------------------------------------
# HP-cause verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HpVerdict:
    ac1_ok: bool
    ac2_ok: bool
    ac3_ok: bool

    @property
    def all_ok(self):
        return self.ac1_ok and self.ac2_ok and self.ac3_ok


def _target_true(scm, assignment):
    return scm.value_of(assignment, scm.target) == 1


def check_hp_cause(
    scm,
    context,
    candidate_cause,
    contingency,
    variables=None,
    budget=10**6,
    max_contingency=None,
):
    """Verify the three HP conditions for a candidate.

    ``candidate_cause`` is an intervention carrying the counterfactual values;
    ``contingency`` is a set of variable indices pinned to actual values.  The
    minimality condition is checked by exhaustive enumeration over proper
    subsets of the cause, each paired with every counterfactual value
    combination and every contingency set of size up to ``max_contingency``
    (unbounded when None).  Enumeration larger than ``budget`` evaluations
    raises CandidateTooLarge.
    """
    candidate_cause = intervention(candidate_cause)
    contingency = frozenset(contingency)
    cause_vars = frozenset(v for v, _ in candidate_cause)
    if cause_vars & contingency:
        raise ValueOutsideDomain("cause and contingency overlap")
    if variables is None:
        variables = scm.search_variables
    v_star = actual_values(scm, context)

    ac1 = _target_true(scm, v_star)

    witness = intervention(
        tuple(candidate_cause) + tuple((w, v_star[w]) for w in contingency)
    )
    ac2 = bool(candidate_cause) and not _target_true(
        scm, evaluate(scm, context, witness, noiseless=True)
    )

    # AC3: no proper subset of the cause cancels the target under any
    # counterfactual values and any (bounded) contingency.
    others = [v for v in variables if v not in cause_vars]
    cause_list = sorted(cause_vars)
    total = 0
    for r in range(1, len(cause_list)):
        for combo in itertools.combinations(cause_list, r):
            n_vals = 1
            for v in combo:
                n_vals *= len(scm.endo_domains[v]) - 1
            n_free = len(others) + len(cause_list) - r
            max_w = n_free if max_contingency is None else min(max_contingency, n_free)
            n_w = sum(comb(n_free, w) for w in range(max_w + 1))
            total += n_vals * n_w
    if total > budget:
        raise CandidateTooLarge(
            f"AC3 enumeration needs {total} evaluations (budget {budget})"
        )

    ac3 = True
    for r in range(1, len(cause_list)):
        for combo in itertools.combinations(cause_list, r):
            value_ranges = [
                [i for i in range(len(scm.endo_domains[v])) if i != v_star[v]]
                for v in combo
            ]
            free = [v for v in others] + [v for v in cause_list if v not in combo]
            free.sort()
            max_w = len(free) if max_contingency is None else min(max_contingency, len(free))
            found = False
            for values in itertools.product(*value_ranges):
                base = tuple(zip(combo, values))
                for w in range(max_w + 1):
                    for pins in itertools.combinations(free, w):
                        e = intervention(base + tuple((p, v_star[p]) for p in pins))
                        if not _target_true(
                            scm, evaluate(scm, context, e, noiseless=True)
                        ):
                            found = True
                            break
                    if found:
                        break
                if found:
                    break
            if found:
                ac3 = False
                break
        if not ac3:
            break

    return HpVerdict(ac1, ac2, ac3)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _value_to_json(v):
    if isinstance(v, frozenset):
        return sorted(v)
    return v


def _value_from_json(v):
    if isinstance(v, list):
        return frozenset(v)
    return v


def scm_to_dict(scm):
    return {
        "name": scm.name,
        "variables": [
            {"name": n, "domain": [_value_to_json(v) for v in d.values]}
            for n, d in zip(scm.endo_names, scm.endo_domains)
        ],
        "exogenous": [
            {"name": n, "domain": [_value_to_json(v) for v in d.values]}
            for n, d in zip(scm.exo_names, scm.exo_domains)
        ],
        "edges": {
            n: [scm.endo_names[p] for p in ps]
            for n, ps in zip(scm.endo_names, scm.parents)
        },
        "equations": {n: eq for n, eq in zip(scm.endo_names, scm.equations)},
        "target": scm.target,
        "noise_level": scm.noise_level,
        "noise_exempt": sorted(scm.endo_names[i] for i in scm.noise_exempt),
    }


def scm_from_dict(doc):
    variables = doc["variables"]
    if not variables:
        raise UnknownVariable("SCM needs at least one endogenous variable")
    endo_names = tuple(v["name"] for v in variables)
    endo_domains = tuple(
        Domain(tuple(_value_from_json(x) for x in v["domain"])) for v in variables
    )
    exo = doc.get("exogenous", [])
    exo_names = tuple(v["name"] for v in exo)
    exo_domains = tuple(
        Domain(tuple(_value_from_json(x) for x in v["domain"])) for v in exo
    )
    equations = tuple(doc["equations"][n] for n in endo_names)
    edges = doc.get("edges")
    parents = None
    if edges is not None:
        index = {n: i for i, n in enumerate(endo_names)}
        parents = tuple(tuple(sorted(index[p] for p in edges[n])) for n in endo_names)
    exempt_names = doc.get("noise_exempt", [])
    index = {n: i for i, n in enumerate(endo_names)}
    return Scm(
        endo_names=endo_names,
        endo_domains=endo_domains,
        exo_names=exo_names,
        exo_domains=exo_domains,
        equations=equations,
        target=doc["target"],
        parents=parents,
        noise_level=doc.get("noise_level", 0.0),
        noise_exempt=frozenset(index[n] for n in exempt_names),
        name=doc.get("name", "scm"),
    )


def scm_to_json(scm, **kwargs):
    kwargs.setdefault("sort_keys", True)
    kwargs.setdefault("indent", 2)
    return json.dumps(scm_to_dict(scm), **kwargs)


def scm_from_json(text):
    return scm_from_dict(json.loads(text))
