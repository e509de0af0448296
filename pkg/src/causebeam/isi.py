"""Iterative sub-instance identification over a causal DAG.

Beam search runs on small variable sets derived from the graph: first the
target's direct parents, then, for every cause found, instances replacing
cause variables by their own parents.  A memory of visited instances stops
the recursion.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .beam import CauseResult, SearchStats, _mutually_minimal, identify_causes
from .errors import CauseTooLargeForExpansion, InvalidConfig
from .scm import intervention

MAX_EXPANSION_CAUSE = 16

EXPANSION_MODES = ("cause", "instance")


@dataclass(frozen=True)
class InstanceTask:
    """One queued sub-instance: variables to search and pinned contingency."""

    instance_vars: frozenset
    base_contingency: frozenset

    def __post_init__(self):
        if self.instance_vars & self.base_contingency:
            # instance wins: a searched variable cannot stay pinned
            object.__setattr__(
                self, "base_contingency", self.base_contingency - self.instance_vars
            )


def check_inclusion(candidate, memory):
    """True iff candidate is not a subset of any stored instance."""
    return not any(candidate <= stored for stored in memory)


def _remember(candidate, memory):
    # keep memory antichain-shaped: drop stored subsets of the newcomer
    memory[:] = [s for s in memory if not s <= candidate]
    memory.append(candidate)


def _subsets(items):
    """Non-empty subsets in size-then-lexicographic order."""
    items = sorted(items)
    for r in range(1, len(items) + 1):
        yield from (frozenset(c) for c in combinations(items, r))


def expand_cause_instances(cause_vars, contingency_vars, parents, instance, mode="cause"):
    """Candidate follow-up instances for one identified cause.

    In "cause" mode the non-selected remainder comes from the cause set; in
    "instance" mode from the whole prior instance.
    """
    if mode not in EXPANSION_MODES:
        raise InvalidConfig(f"unknown expansion mode {mode!r}")
    if len(cause_vars) > MAX_EXPANSION_CAUSE:
        raise CauseTooLargeForExpansion(
            f"cause has {len(cause_vars)} variables; subset expansion capped at "
            f"{MAX_EXPANSION_CAUSE}"
        )
    remainder_pool = cause_vars if mode == "cause" else frozenset(instance)
    tasks = []
    for s in _subsets(cause_vars):
        new = frozenset().union(*(frozenset(parents[x]) for x in s))
        new |= remainder_pool - s
        if new:
            tasks.append(InstanceTask(new, frozenset(contingency_vars)))
    return tasks


def identify_causes_isi(
    parents,
    target,
    domains,
    v_star,
    oracle,
    heuristic,
    config,
    expansion="cause",
):
    """Run beam search over DAG-derived sub-instances; returns (causes, stats).

    ``parents`` maps every variable id to its endogenous parent ids and must
    cover at least the true parent relation.
    """
    start = frozenset(parents[target])
    stats = SearchStats()
    if not start:
        return [], stats
    queue = deque([InstanceTask(start, frozenset())])
    memory = [start]
    causes = []
    while queue:
        task = queue.popleft()
        inst_vars = tuple(sorted(task.instance_vars))
        pins = tuple((w, v_star[w]) for w in sorted(task.base_contingency))
        pinned = oracle.pinned(pins)
        found, sub_stats = identify_causes(
            inst_vars, domains, v_star, pinned, heuristic, config
        )
        stats.merge(sub_stats)
        for c in found:
            merged_w = intervention(
                c.contingency
                + tuple(p for p in pins if p[0] not in c.cause_vars | c.contingency_vars)
            )
            result = CauseResult(
                cause=c.cause, contingency=merged_w, depth_found=c.depth_found
            )
            causes.append(result)
            for new_task in expand_cause_instances(
                result.cause_vars,
                result.contingency_vars,
                parents,
                task.instance_vars,
                mode=expansion,
            ):
                if check_inclusion(new_task.instance_vars, memory):
                    _remember(new_task.instance_vars, memory)
                    queue.append(new_task)
    return _mutually_minimal(causes), stats


def identify_causes_isi_scm(scm, context, oracle, heuristic, config, parents=None, expansion="cause"):
    """Convenience wrapper taking an SCM; parents default to the SCM's graph."""
    from .scm import actual_values

    if parents is None:
        parents = scm.parents
    v_star = actual_values(scm, context)
    return identify_causes_isi(
        parents,
        scm.target_index,
        scm.endo_domains,
        v_star,
        oracle,
        heuristic,
        config,
        expansion=expansion,
    )
