"""Brute-force enumeration of all minimal cancelling interventions.

Ground truth for validating the search algorithms.  Enumerates the whole
intervention space size-ascending with superset pruning, so it is only
usable on small instances; the precomputed size is checked against a budget
first.
"""

from __future__ import annotations

import itertools
from math import prod

from .beam import CauseResult, _mutually_minimal
from .errors import BudgetExceeded
from .scm import cf_part, split_sets

DEFAULT_BUDGET = 2**24


def space_size(variables, domains, max_size):
    """Number of interventions with 1..max_size pairs."""
    sizes = [len(domains[x]) for x in variables]
    total = 0
    for r in range(1, max_size + 1):
        for combo in itertools.combinations(sizes, r):
            total += prod(combo)
    return total


def enumerate_causes(variables, domains, v_star, oracle, max_size=None, budget=DEFAULT_BUDGET):
    """All minimal causes with one witness each (smallest contingency first).

    Enumerates every intervention over ``variables`` up to ``max_size`` pairs
    in size-then-canonical order, keeps the cancelling ones, and reduces them
    to the minimal counterfactual sets.
    """
    variables = tuple(variables)
    if max_size is None:
        max_size = len(variables)
    max_size = min(max_size, len(variables))
    total = space_size(variables, domains, max_size)
    if total > budget:
        raise BudgetExceeded(total, budget)

    causes = []
    known = []
    for r in range(1, max_size + 1):
        batch = []
        for subset in itertools.combinations(variables, r):
            for values in itertools.product(*(range(len(domains[x])) for x in subset)):
                e = tuple(zip(subset, values))
                c_set = cf_part(e, v_star)
                if not c_set:
                    continue
                if any(c_set >= k for k in known):
                    continue
                batch.append(e)
        if not batch:
            continue
        phi = oracle.query_batch(batch)
        negs = [e for e, p in zip(batch, phi) if p == 0]
        items = [(cf_part(e, v_star), e) for e in negs]
        for c_set, e in items:
            if any(other < c_set for other, _ in items):
                continue
            if any(c_set == k for k in known):
                continue
            known.append(c_set)
            cause = tuple(p for p in e if p[1] != v_star[p[0]])
            conting = tuple(p for p in e if p[1] == v_star[p[0]])
            causes.append(CauseResult(cause=cause, contingency=conting, depth_found=r))
    return _mutually_minimal(causes)


def enumerate_causes_scm(scm, context, oracle, max_size=None, budget=DEFAULT_BUDGET):
    from .scm import actual_values

    v_star = actual_values(scm, context)
    return enumerate_causes(
        scm.search_variables,
        scm.endo_domains,
        v_star,
        oracle,
        max_size=max_size,
        budget=budget,
    )


def reference_to_dict(causes, names, domains):
    """Reference-set JSON document: named causes with witnesses."""
    doc = []
    for c in causes:
        doc.append(
            {
                "cause": [
                    {"variable": names[v], "value_index": val} for v, val in c.cause
                ],
                "contingency": [
                    {"variable": names[v], "value_index": val}
                    for v, val in c.contingency
                ],
                "size": len(c.cause),
            }
        )
    return doc
