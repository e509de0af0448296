"""Benchmark model family and context sampling."""

from __future__ import annotations

import numpy as np
import pytest

import causebeam as cb
from causebeam.benchmarks import set_domain, smk_exo_names


def ctx_from_names(scm, true_names):
    return tuple(1 if n in true_names else 0 for n in scm.exo_names)


class TestRockThrowing:
    def test_shape(self, rock):
        assert rock.endo_names == ("BT", "ST", "BH", "SH", "BS")
        assert rock.exo_names == ("st", "bt")
        assert rock.target == "BS"


class TestSmkBase:
    def test_variable_counts(self):
        for k in (1, 2, 5):
            scm = cb.make_smk_base(k)
            assert scm.n_endo == 3 + 11 * k
            assert len(scm.exo_names) == 6 * k
            assert smk_exo_names(k) == scm.exo_names

    def test_k_below_one_rejected(self):
        with pytest.raises(cb.InvalidConfig):
            cb.make_smk_base(0)

    def test_first_attacker_wins(self):
        scm = cb.make_smk_base(2)
        # both attackers fully capable: only attacker 1 reaches the dead drop
        ctx = (1,) * 12
        a = cb.evaluate(scm, ctx, ())
        assert scm.value_of(a, "DK_1") == 1
        assert scm.value_of(a, "DK_2") == 0
        assert scm.value_of(a, "SD_1") == 1
        assert scm.value_of(a, "SD_2") == 0
        assert scm.value_of(a, "SMK") == 1

    def test_second_attacker_steps_in(self):
        scm = cb.make_smk_base(2)
        ctx = ctx_from_names(scm, {"fs_2", "ff_2", "a_2", "ad_2"})
        a = cb.evaluate(scm, ctx, ())
        assert scm.value_of(a, "DK_1") == 0
        assert scm.value_of(a, "DK_2") == 1
        assert scm.value_of(a, "SD_2") == 1


class TestSetDomain:
    def test_binary_counting_order(self):
        d = set_domain(2)
        assert d.values == (
            frozenset(),
            frozenset({0}),
            frozenset({1}),
            frozenset({0, 1}),
        )

    def test_too_large(self):
        with pytest.raises(cb.KTooLargeForSetDomains):
            cb.make_smk_nonboolean(13)


class TestNonBooleanAgreement:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_smk_agrees_with_base(self, k):
        base = cb.make_smk_base(k)
        nb = cb.make_smk_nonboolean(k)
        rng = np.random.default_rng(31)
        for _ in range(40):
            ctx = tuple(rng.integers(0, 2, size=6 * k))
            a = cb.evaluate(base, ctx, ())
            b = cb.evaluate(nb, ctx, ())
            assert base.value_of(a, "SMK") == nb.value_of(b, "SMK")
            base_dk = base.value_of(a, "DK")
            nb_dk = nb.value_of(b, "DK")
            assert (base_dk == 1) == (nb_dk > -1)

    def test_attacker_indices_zero_based(self):
        nb = cb.make_smk_nonboolean(3)
        ctx = ctx_from_names(nb, {"fs_2", "ff_2"})
        a = cb.evaluate(nb, ctx, ())
        assert nb.value_of(a, "GP") == frozenset({1})
        assert nb.value_of(a, "DK") == 1


class TestBlackBox:
    def test_visible_surface(self):
        system = cb.make_smk_blackbox(2)
        assert len(system.variable_names) == 6 * 2
        assert all(d.values == (0, 1) for d in system.domains)

    def test_agrees_with_base_target(self):
        base = cb.make_smk_base(2)
        system = cb.make_smk_blackbox(2)
        rng = np.random.default_rng(7)
        for _ in range(20):
            ctx = tuple(rng.integers(0, 2, size=12))
            if cb.evaluate(base, ctx, ())[0] != 1:
                continue
            o = system.oracle(ctx)
            for i, name in enumerate(system.variable_names):
                flip = ((i, 1 - ctx[system.hidden.exo_names.index(name.lower())]),)
                e_base = cb.intervention_from_names(base, [(name, flip[0][1])])
                assert o.query(flip) == cb.ScmOracle(base, ctx).query(e_base)


class TestNoisy:
    def test_zero_noise_equals_base(self):
        base = cb.make_smk_base(2)
        noisy = cb.make_smk_noisy(2, noise_level=0.0)
        rng = np.random.default_rng(3)
        for _ in range(10):
            ctx = tuple(np.random.default_rng(5).integers(0, 2, size=12))
            a = cb.evaluate(base, ctx, ())
            b = cb.evaluate(noisy, ctx, (), rng=rng)
            assert a == b

    def test_flip_rate_concentrates(self):
        noisy = cb.make_smk_noisy(2, noise_level=0.2)
        base = cb.make_smk_base(2)
        ctx = (1,) * 12
        clean = cb.evaluate(base, ctx, ())
        rng = np.random.default_rng(11)
        flips = 0
        trials = 2000
        for _ in range(trials):
            out = cb.evaluate(noisy, ctx, (), rng=rng)
            flips += sum(1 for a, b in zip(out, clean) if a != b)
        rate = flips / (trials * noisy.n_endo)
        # flips cascade through downstream equations, so the per-variable
        # disagreement rate sits near but not exactly at the noise level
        assert 0.1 < rate < 0.45

    def test_noiseless_flag(self):
        noisy = cb.make_smk_noisy(2, noise_level=0.4)
        base = cb.make_smk_base(2)
        ctx = (1, 0) * 6
        assert cb.evaluate(noisy, ctx, (), noiseless=True) == cb.evaluate(base, ctx, ())

    def test_stochastic_flag(self):
        assert cb.make_smk_noisy(2).stochastic
        assert not cb.make_smk_base(2).stochastic


class TestSampleContexts:
    def test_distinct_and_target_true(self, smk2):
        ctxs = cb.sample_contexts(smk2, 30, seed=1)
        assert len(set(ctxs)) == 30
        for ctx in ctxs:
            assert cb.evaluate(smk2, ctx, ())[0] == 1

    def test_seeded_reproducible(self, smk2):
        assert cb.sample_contexts(smk2, 10, seed=8) == cb.sample_contexts(smk2, 10, seed=8)

    def test_n_zero(self, smk2):
        assert cb.sample_contexts(smk2, 0, seed=1) == []

    def test_exhaustion_raises(self, rock):
        # rock throwing has only 3 target-true contexts
        with pytest.raises(cb.SamplingExhausted):
            cb.sample_contexts(rock, 10, seed=1)


class TestDemoContext:
    def test_rock_all_ones(self, rock):
        assert cb.demo_context(rock) == (1, 1)

    def test_smk3_reproduces_trace(self, smk3):
        ctx = cb.demo_context(smk3)
        a = cb.evaluate(smk3, ctx, ())
        assert smk3.value_of(a, "SMK") == 1
        assert smk3.value_of(a, "DK_2") == 1
        assert smk3.value_of(a, "SD") == 0
        assert smk3.value_of(a, "DK_1") == 0


class TestMakeBuiltin:
    def test_specs(self):
        assert cb.make_builtin("rock-throwing").name == "rock-throwing"
        assert cb.make_builtin("smk:4").n_endo == 3 + 44
        assert cb.make_builtin("smk-nonboolean:2").n_endo == 12
        assert cb.make_builtin("smk-noisy:2").stochastic

    def test_bad_specs(self):
        for spec in ("smk", "smk:0", "smk:x", "unknown:2", ""):
            with pytest.raises(cb.InvalidConfig):
                cb.make_builtin(spec)
