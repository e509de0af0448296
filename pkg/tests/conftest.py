"""Shared fixtures: benchmark instances, sampled contexts, exact references."""

from __future__ import annotations

import pytest

import causebeam as cb

K2_CONTEXT_SEED = 11
K2_POOL_SIZE = 50


@pytest.fixture(scope="session")
def rock():
    return cb.make_rock_throwing()


@pytest.fixture(scope="session")
def rock_ctx(rock):
    return cb.context_from_values(rock, {"st": 1, "bt": 1})


@pytest.fixture(scope="session")
def smk2():
    return cb.make_smk_base(2)


@pytest.fixture(scope="session")
def smk3():
    return cb.make_smk_base(3)


@pytest.fixture(scope="session")
def smk3_ctx(smk3):
    return cb.demo_context(smk3)


@pytest.fixture(scope="session")
def smk2_contexts(smk2):
    """Shared balanced-context pool; criteria slice off what they need."""
    return cb.sample_contexts(smk2, K2_POOL_SIZE, seed=K2_CONTEXT_SEED)


@pytest.fixture(scope="session")
def smk2_references(smk2, smk2_contexts):
    """Exhaustive reference causes (interventions up to 4 pairs) per context."""
    refs = []
    for ctx in smk2_contexts:
        oracle = cb.ScmOracle(smk2, ctx)
        refs.append(cb.enumerate_causes_scm(smk2, ctx, oracle, max_size=4))
    return refs


def names_of(scm, cause):
    return frozenset(scm.endo_names[v] for v in cause.cause_vars)


def cause_set_names(scm, causes):
    return {names_of(scm, c) for c in causes}
