"""Level-wise beam search for minimal cancelling interventions.

Candidates are interventions; a candidate whose oracle answer is 0 (or whose
estimated cancellation probability falls below the threshold, for stochastic
oracles) is a cause once its counterfactual variable set is minimal.  The
beam keeps the best-scoring surviving candidates for expansion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import stochastic as stoch
from .errors import InvalidConfig
from .scm import cf_part, intervention, split_sets


@dataclass
class BeamConfig:
    """Knobs of one identification run.

    ``beam_size`` −1 disables truncation; ``max_steps`` 0 means one step per
    search variable.  ``stochastic_mode`` selects how a stochastic oracle is
    evaluated ("off" queries it directly); in stochastic runs the estimated
    cancellation probability replaces the heuristic as beam score unless
    ``score_with_heuristic`` is set.
    """

    beam_size: int = 10
    max_steps: int = 0
    early_stop: bool = False
    epsilon: float = 0.3
    stochastic_mode: str = "off"
    n_samples: int = 20
    batch_size: int = 10
    t_c: float = 0.01
    t_nc: float = 0.01
    t_b: float = 0.1
    n_max: int = None
    score_with_heuristic: bool = False

    def __post_init__(self):
        if self.beam_size < 1 and self.beam_size != -1:
            raise InvalidConfig("beam_size must be >= 1 or -1")
        if self.max_steps < 0:
            raise InvalidConfig("max_steps must be >= 0")
        if not 0 < self.epsilon < 1:
            raise InvalidConfig("epsilon must lie in (0,1)")
        if self.stochastic_mode not in ("off", "naive", "lucb"):
            raise InvalidConfig(f"unknown stochastic mode {self.stochastic_mode!r}")

    def lucb(self):
        return stoch.LucbConfig(
            batch_size=self.batch_size,
            epsilon=self.epsilon,
            t_c=self.t_c,
            t_nc=self.t_nc,
            t_b=self.t_b,
            n_max=self.n_max,
            beam_size=self.beam_size,
        )


@dataclass(frozen=True)
class CauseResult:
    """An identified cause: counterfactual pairs plus its contingency witness."""

    cause: tuple
    contingency: tuple
    depth_found: int

    @property
    def cause_vars(self):
        return frozenset(v for v, _ in self.cause)

    @property
    def contingency_vars(self):
        return frozenset(v for v, _ in self.contingency)

    @property
    def witness(self):
        """The full intervention whose oracle answer certifies AC2."""
        return intervention(self.cause + self.contingency)


@dataclass
class SearchStats:
    nodes_evaluated_per_depth: list = field(default_factory=list)
    causes_per_depth: list = field(default_factory=list)
    oracle_calls: int = 0
    lucb_runs: list = field(default_factory=list)

    def merge(self, other):
        self.nodes_evaluated_per_depth.extend(other.nodes_evaluated_per_depth)
        self.causes_per_depth.extend(other.causes_per_depth)
        self.oracle_calls += other.oracle_calls
        self.lucb_runs.extend(other.lucb_runs)


def init_candidates(variables, domains, v_star):
    """One singleton intervention per counterfactual (variable, value) pair."""
    out = []
    for x in variables:
        for val in range(len(domains[x])):
            if val != v_star[x]:
                out.append(((x, val),))
    return out


def expand_beam(beam, variables, domains, v_star, known_causes):
    """Children of every beam element, one new pair each, deduplicated.

    Counterfactual extensions that would make the counterfactual set a
    superset of a known cause are suppressed; actual-value extensions are
    always emitted.
    """
    if not beam:
        return init_candidates(variables, domains, v_star)
    seen = set()
    out = []
    for e in beam:
        used = {v for v, _ in e}
        e_c = cf_part(e, v_star)
        for x in variables:
            if x in used:
                continue
            grown = e_c | {x}
            blocked = any(grown >= k for k in known_causes)
            for val in range(len(domains[x])):
                if val != v_star[x] and blocked:
                    continue
                child = intervention(e + ((x, val),))
                if child not in seen:
                    seen.add(child)
                    out.append(child)
    return out


def _evaluate_phi(candidates, oracle, config, stats):
    """Per-candidate cancellation estimate in [0,1] (exact for deterministic)."""
    mode = config.stochastic_mode
    if mode == "off":
        if oracle.stochastic:
            raise InvalidConfig("stochastic oracle needs stochastic_mode naive or lucb")
        return oracle.query_batch(candidates)
    if mode == "naive":
        return stoch.naive_evaluate(candidates, oracle, config.n_samples)
    result = stoch.lucb_evaluate(candidates, oracle, config.lucb())
    stats.lucb_runs.append((result.converged, result.total_samples))
    return result.estimates


def _filter_minimal(neg, v_star, known_causes, depth):
    """Minimality filter for one depth's cancelling elements.

    Elements whose counterfactual set covers a known cause are dropped, then
    strict supersets within the depth; for equal sets the first witness wins.
    """
    items = []
    for e in neg:
        c_set, w_set = split_sets(e, v_star)
        if not c_set:
            continue
        if any(c_set >= k for k in known_causes):
            continue
        items.append((c_set, e))
    kept = []
    for c_set, e in items:
        if any(other < c_set for other, _ in items):
            continue
        if any(other == c_set for other in kept):
            continue
        kept.append(c_set)
        cause = tuple(p for p in e if p[1] != v_star[p[0]])
        conting = tuple(p for p in e if p[1] == v_star[p[0]])
        yield CauseResult(cause=cause, contingency=conting, depth_found=depth)


def identify_causes(variables, domains, v_star, oracle, heuristic, config):
    """Run the beam search; returns (causes, stats).

    ``variables`` are the searchable variable ids, ``domains`` is indexed by
    variable id, ``v_star`` is the actual assignment over all variables.
    """
    variables = tuple(variables)
    stats = SearchStats()
    causes = []
    known = []
    beam = []
    deterministic = config.stochastic_mode == "off"
    base_calls = oracle.calls
    n_steps = config.max_steps if config.max_steps > 0 else len(variables)
    for depth in range(1, n_steps + 1):
        if config.early_stop and causes:
            break
        candidates = expand_beam(beam, variables, domains, v_star, known)
        if not candidates:
            break
        stats.nodes_evaluated_per_depth.append(len(candidates))
        phi = _evaluate_phi(candidates, oracle, config, stats)
        if deterministic:
            is_neg = [p == 0 for p in phi]
        else:
            is_neg = [p < config.epsilon for p in phi]
        neg = [e for e, n in zip(candidates, is_neg) if n]
        new_causes = list(_filter_minimal(neg, v_star, known, depth))
        causes.extend(new_causes)
        known.extend(c.cause_vars for c in new_causes)
        stats.causes_per_depth.append(len(new_causes))

        pos = [
            (e, p)
            for e, p, n in zip(candidates, phi, is_neg)
            if not n and not any(cf_part(e, v_star) >= k for k in known)
        ]
        if config.beam_size == -1 or len(pos) <= config.beam_size:
            beam = [e for e, _ in pos]
        else:
            if deterministic or config.score_with_heuristic:
                scored = [
                    (heuristic.score(e, oracle.post_state(e)), i)
                    for i, (e, _) in enumerate(pos)
                ]
            else:
                scored = [(p, i) for i, (_, p) in enumerate(pos)]
            scored.sort(key=lambda s: (s[0], s[1]))
            beam = [pos[i][0] for _, i in scored[: config.beam_size]]
    stats.oracle_calls = oracle.calls - base_calls
    return causes, stats


def _mutually_minimal(causes):
    """Drop duplicates (first wins) and strict supersets of another cause."""
    sets = [c.cause_vars for c in causes]
    out = []
    seen = []
    for c, s in zip(causes, sets):
        if any(other < s for other in sets):
            continue
        if any(other == s for other in seen):
            continue
        seen.append(s)
        out.append(c)
    return out


def minimize_causes(causes, oracle, v_star, domains):
    """Shrink each cause by unlimited-beam search restricted to its variables.

    The cause's contingency is pinned into the oracle; results across all
    inputs are merged and reduced to a mutually minimal set.
    """
    out = []
    for cause in causes:
        variables = tuple(sorted(cause.cause_vars))
        pinned = oracle.pinned(cause.contingency)
        config = BeamConfig(beam_size=-1, max_steps=len(variables))
        heuristic = _null_heuristic()
        subs, _ = identify_causes(variables, domains, v_star, pinned, heuristic, config)
        if not subs:
            out.append(cause)
            continue
        for sub in subs:
            used = sub.cause_vars | sub.contingency_vars
            inherited = tuple(p for p in cause.contingency if p[0] not in used)
            out.append(
                CauseResult(
                    cause=sub.cause,
                    contingency=intervention(sub.contingency + inherited),
                    depth_found=cause.depth_found,
                )
            )
    return _mutually_minimal(out)


def _null_heuristic():
    from .oracles import Heuristic

    return Heuristic("constant", lambda e, s: 0.0, False)
