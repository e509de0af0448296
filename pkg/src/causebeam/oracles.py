"""Oracle and heuristic contracts used by every identifier.

An oracle answers whether the target predicate survives an intervention
(1 = still holds, 0 = cancelled); stochastic oracles return Bernoulli samples.
Heuristic scores are always minimized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import scm as scm_mod
from .errors import IncompatibleHeuristic, TargetNotActual, ValueOutsideDomain


class Oracle:
    """Query contract shared by all identifiers.

    Subclasses implement :meth:`_query`.  ``query``/``query_batch`` maintain
    the per-run call counter.  ``post_state`` returns the post-intervention
    assignment when the oracle can observe it (None otherwise); black-box
    oracles only expose a shallow state.
    """

    stochastic = False
    reentrant = True

    def __init__(self):
        self.calls = 0

    def _query(self, e):
        raise NotImplementedError

    def query(self, e):
        self.calls += 1
        return self._query(e)

    def query_batch(self, elements):
        return np.array([self.query(e) for e in elements], dtype=np.int8)

    def post_state(self, e):
        return None

    def pinned(self, pins):
        """Oracle that appends the given (var, value) pins to every query."""
        pins = tuple(pins)
        return PinnedOracle(self, pins) if pins else self


class PinnedOracle(Oracle):
    """Wraps an oracle with a base contingency appended to every query.

    Pins for variables already present in the query are dropped.  The call
    counter is shared with the wrapped oracle.
    """

    def __init__(self, base, pins):
        super().__init__()
        self.base = base
        self.pins = tuple(pins)
        self.stochastic = base.stochastic
        self.reentrant = base.reentrant

    def _merge(self, e):
        present = {v for v, _ in e}
        extra = tuple(p for p in self.pins if p[0] not in present)
        return scm_mod.intervention(tuple(e) + extra)

    @property
    def calls(self):
        return self.base.calls

    @calls.setter
    def calls(self, value):  # counter lives on the wrapped oracle
        pass

    def query(self, e):
        return self.base.query(self._merge(e))

    def query_batch(self, elements):
        return self.base.query_batch([self._merge(e) for e in elements])

    def post_state(self, e):
        return self.base.post_state(self._merge(e))

    def pinned(self, pins):
        return Oracle.pinned(self, pins)


class ScmOracle(Oracle):
    """Oracle backed by a full SCM: query(e) = 1 iff the target holds after e."""

    def __init__(self, scm, context, rng=None, require_actual=True):
        super().__init__()
        self.scm = scm
        self.context = context
        self.rng = rng
        self.stochastic = scm.stochastic
        if self.stochastic and rng is None:
            raise ValueOutsideDomain("stochastic oracle needs an rng")
        self._batch = None
        if require_actual:
            base = scm_mod.evaluate(scm, context, (), noiseless=True)
            if scm.value_of(base, scm.target) != 1:
                raise TargetNotActual(
                    f"target {scm.target!r} is false under the empty intervention"
                )

    def _assignment(self, e):
        return scm_mod._evaluate(self.scm, self.context, e, rng=self.rng)

    def _query(self, e):
        a = self._assignment(e)
        return int(self.scm.value_of(a, self.scm.target) == 1)

    def post_state(self, e):
        return self._assignment(e)

    def query_batch(self, elements):
        if self.stochastic:
            return super().query_batch(elements)
        if self._batch is None:
            try:
                self._batch = scm_mod.BatchEvaluator(self.scm, self.context)
            except ValueOutsideDomain:
                self._batch = False
        if self._batch is False:
            return super().query_batch(elements)
        self.calls += len(elements)
        mask, vals = scm_mod.pack_interventions(self.scm.n_endo, elements)
        return self._batch.target_values(mask, vals).astype(np.int8)


class BlackBoxOracle(Oracle):
    """Hides an SCM behind a leaf-variable interface.

    Only ``variables``/``domains`` (the visible leaves) and the target answer
    are exposed; no causal graph is available.  ``post_state`` is the shallow
    actual state with the intervention overlaid, which is all an external
    observer could see.
    """

    def __init__(self, hidden_scm, context, visible_names, rng=None):
        super().__init__()
        self._scm = hidden_scm
        self._context = context
        self._rng = rng
        self.stochastic = hidden_scm.stochastic
        self.variable_names = tuple(visible_names)
        self._map = tuple(hidden_scm.variable_id(n) for n in visible_names)
        self.domains = tuple(hidden_scm.endo_domains[i] for i in self._map)
        base = scm_mod.evaluate(hidden_scm, context, (), noiseless=True)
        self.v_star = tuple(base[i] for i in self._map)
        if hidden_scm.value_of(base, hidden_scm.target) != 1:
            raise TargetNotActual("target is false under the empty intervention")

    def _translate(self, e):
        return scm_mod.intervention((self._map[v], val) for v, val in e)

    def _query(self, e):
        a = scm_mod._evaluate(self._scm, self._context, self._translate(e), rng=self._rng)
        return int(self._scm.value_of(a, self._scm.target) == 1)

    def post_state(self, e):
        state = list(self.v_star)
        for v, val in e:
            state[v] = val
        return tuple(state)


class CallableOracle(Oracle):
    """Adapts a user callable (intervention -> 0/1).  Never queried concurrently."""

    def __init__(self, fn, stochastic=False):
        super().__init__()
        self.fn = fn
        self.stochastic = stochastic
        self.reentrant = False

    def _query(self, e):
        try:
            return int(self.fn(e))
        except Exception as exc:
            raise type(exc)(f"oracle callable failed on intervention {tuple(e)}: {exc}") from exc


# ---------------------------------------------------------------------------
# Heuristics
# ---------------------------------------------------------------------------

HEURISTIC_NAMES = (
    "positive",
    "changed",
    "negative",
    "occam",
    "random",
    "constant",
    "nonboolean-smk",
)

_SMK_SET_VARS = ("A", "AD", "KMS", "FF", "FDB", "GP", "GK", "FS", "FN")


@dataclass
class Heuristic:
    """A score over interventions, minimized by the beam."""

    name: str
    fn: callable
    needs_post_state: bool = False

    def score(self, e, post_state):
        if self.needs_post_state and post_state is None:
            raise IncompatibleHeuristic(
                f"heuristic {self.name!r} needs the post-intervention state"
            )
        return self.fn(e, post_state)


def positive_count(domains, post_state):
    """Number of variables valued 1 in a post-intervention assignment."""
    return sum(1 for d, i in zip(domains, post_state) if d.values[i] == 1)


def make_heuristic(name, *, domains, v_star, n_vars, rng=None, names=None):
    """Build one of the benchmark heuristics.

    ``domains``/``v_star`` describe the variables appearing in post-states
    (for SCM oracles, all endogenous variables; for black boxes, the visible
    leaves).  ``n_vars`` is the search-variable count used by the random and
    constant heuristics.
    """
    if name == "positive":
        return Heuristic(name, lambda e, s: positive_count(domains, s), True)
    if name == "negative":
        return Heuristic(
            name,
            lambda e, s: sum(1 for d, i in zip(domains, s) if d.values[i] == 0),
            True,
        )
    if name == "changed":
        return Heuristic(
            name, lambda e, s: sum(1 for a, b in zip(s, v_star) if a != b), True
        )
    if name == "occam":
        # counts variables keeping their actual value; minimizing it favors
        # counterfactual worlds that are cheap to describe
        return Heuristic(
            name, lambda e, s: sum(1 for a, b in zip(s, v_star) if a == b), True
        )
    if name == "random":
        if rng is None:
            raise IncompatibleHeuristic("random heuristic needs an rng")
        return Heuristic(name, lambda e, s: rng.uniform(1, n_vars), False)
    if name == "constant":
        return Heuristic(name, lambda e, s: n_vars / 2, False)
    if name == "nonboolean-smk":
        if names is None:
            raise IncompatibleHeuristic("nonboolean-smk heuristic needs variable names")
        idx = {n: i for i, n in enumerate(names)}
        set_ids = [idx[n] for n in _SMK_SET_VARS if n in idx]
        int_ids = [idx[n] for n in ("SD", "DK") if n in idx]

        def smk_score(e, s):
            total = sum(len(domains[i].values[s[i]]) for i in set_ids)
            total += sum(domains[i].values[s[i]] for i in int_ids)
            return total

        return Heuristic(name, smk_score, True)
    raise IncompatibleHeuristic(f"unknown heuristic {name!r}")


def heuristic_for_scm(name, scm, context, rng=None):
    v_star = scm_mod.actual_values(scm, context)
    return make_heuristic(
        name,
        domains=scm.endo_domains,
        v_star=v_star,
        n_vars=len(scm.search_variables),
        rng=rng,
        names=scm.endo_names,
    )
