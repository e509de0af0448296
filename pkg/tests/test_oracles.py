"""Oracle contract and benchmark heuristics."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import causebeam as cb
from causebeam.oracles import heuristic_for_scm


class TestScmOracle:
    def test_worked_cancellation(self, rock, rock_ctx):
        o = cb.ScmOracle(rock, rock_ctx)
        e = cb.intervention_from_names(rock, [("ST", 0), ("BH", 0)])
        assert o.query(e) == 0

    def test_empty_is_one(self, rock, rock_ctx):
        o = cb.ScmOracle(rock, rock_ctx)
        assert o.query(()) == 1

    def test_smk_dk_cancel(self, smk3, smk3_ctx):
        o = cb.ScmOracle(smk3, smk3_ctx)
        assert o.query(cb.intervention_from_names(smk3, [("DK", 0)])) == 0

    def test_target_not_actual(self, rock):
        with pytest.raises(cb.TargetNotActual):
            cb.ScmOracle(rock, (0, 0))

    def test_call_counter(self, rock, rock_ctx):
        o = cb.ScmOracle(rock, rock_ctx)
        o.query(())
        o.query_batch([(), ()])
        assert o.calls == 3

    def test_batch_matches_scalar(self, smk2):
        ctx = cb.sample_contexts(smk2, 1, seed=4)[0]
        o = cb.ScmOracle(smk2, ctx)
        elements = [
            cb.intervention_from_names(smk2, [("DK", 0)]),
            cb.intervention_from_names(smk2, [("SD", 0)]),
            cb.intervention_from_names(smk2, [("DK", 0), ("SD", 0)]),
        ]
        batch = list(o.query_batch(elements))
        singles = [cb.ScmOracle(smk2, ctx).query(e) for e in elements]
        assert batch == singles


class TestPinnedOracle:
    def test_base_contingency_composition(self, rock, rock_ctx):
        v = cb.actual_values(rock, rock_ctx)
        bh = rock.endo_index["BH"]
        bare = cb.ScmOracle(rock, rock_ctx)
        pinned = bare.pinned(((bh, v[bh]),))
        for name in ("ST", "SH", "BT"):
            var = rock.endo_index[name]
            e = ((var, 1 - v[var]),)
            merged = cb.intervention(e + ((bh, v[bh]),))
            assert pinned.query(e) == cb.ScmOracle(rock, rock_ctx).query(merged)

    def test_query_variable_wins_over_pin(self, rock, rock_ctx):
        bh = rock.endo_index["BH"]
        pinned = cb.ScmOracle(rock, rock_ctx).pinned(((bh, 0),))
        # explicit BH value in the query overrides the pin
        assert pinned.query(((bh, 1),)) == 1

    def test_shared_counter(self, rock, rock_ctx):
        bare = cb.ScmOracle(rock, rock_ctx)
        pinned = bare.pinned(((rock.endo_index["BH"], 0),))
        pinned.query(())
        assert bare.calls == 1

    def test_empty_pins_returns_self(self, rock, rock_ctx):
        o = cb.ScmOracle(rock, rock_ctx)
        assert o.pinned(()) is o


class TestBlackBoxOracle:
    def test_agrees_with_hidden_scm(self, smk3, smk3_ctx):
        system = cb.make_smk_blackbox(3)
        o = system.oracle(smk3_ctx)
        assert o.query(()) == 1
        all_zero = tuple((i, 0) for i in range(len(system.variable_names)))
        assert o.query(all_zero) == 0
        # single leaf intervention cross-checked against the base model
        for i, name in enumerate(system.variable_names[:6]):
            e_bb = ((i, 0),)
            e_base = cb.intervention_from_names(smk3, [(name, 0)])
            assert o.query(e_bb) == cb.ScmOracle(smk3, smk3_ctx).query(e_base)

    def test_determinism(self, smk3_ctx):
        system = cb.make_smk_blackbox(3)
        o = system.oracle(smk3_ctx)
        e = ((0, 0), (5, 0))
        assert o.query(e) == o.query(e)

    def test_shallow_post_state(self, smk3_ctx):
        system = cb.make_smk_blackbox(3)
        o = system.oracle(smk3_ctx)
        state = o.post_state(((0, 0),))
        assert state[0] == 0
        assert state[1:] == o.v_star[1:]


class TestCallableOracle:
    def test_wraps_callable(self):
        o = cb.CallableOracle(lambda e: 0 if e else 1)
        assert o.query(()) == 1
        assert o.query(((0, 1),)) == 0
        assert o.calls == 2

    def test_error_names_intervention(self):
        def bad(e):
            raise ValueError("boom")

        o = cb.CallableOracle(bad)
        with pytest.raises(ValueError, match=r"\(3, 1\)"):
            o.query(((3, 1),))


class TestHeuristics:
    def test_positive_count_values(self, rock, rock_ctx):
        # frozen expected scores for the four depth-1 candidates; the forced
        # bottle hit keeps every variable at 1 and must score worst
        o = cb.ScmOracle(rock, rock_ctx)
        h = heuristic_for_scm("positive", rock, rock_ctx)
        scores = {}
        for name, val in [("BT", 0), ("ST", 0), ("BH", 1), ("SH", 0)]:
            e = cb.intervention_from_names(rock, [(name, val)])
            scores[name] = h.score(e, o.post_state(e))
        assert scores["BH"] == 5
        assert scores["BT"] == scores["ST"] == 3
        assert scores["SH"] == 4
        assert scores["BH"] == max(scores.values())

    def test_all_false_post_state(self, rock, rock_ctx):
        h = heuristic_for_scm("positive", rock, rock_ctx)
        assert h.score((), (0,) * 5) == 0

    def test_changed_empty_intervention(self, rock, rock_ctx):
        o = cb.ScmOracle(rock, rock_ctx)
        h = heuristic_for_scm("changed", rock, rock_ctx)
        assert h.score((), o.post_state(())) == 0

    def test_occam_plus_changed_is_total(self, rock, rock_ctx):
        o = cb.ScmOracle(rock, rock_ctx)
        occam = heuristic_for_scm("occam", rock, rock_ctx)
        changed = heuristic_for_scm("changed", rock, rock_ctx)
        for pairs in [[("ST", 0)], [("ST", 0), ("BH", 0)], [("BH", 1)]]:
            e = cb.intervention_from_names(rock, pairs)
            s = o.post_state(e)
            assert occam.score(e, s) + changed.score(e, s) == rock.n_endo

    def test_constant_is_half(self, smk3, smk3_ctx):
        h = heuristic_for_scm("constant", smk3, smk3_ctx)
        assert h.score((), None) == 17.5

    def test_random_seeded_reproducible(self, rock, rock_ctx):
        h1 = heuristic_for_scm("random", rock, rock_ctx, rng=np.random.default_rng(9))
        h2 = heuristic_for_scm("random", rock, rock_ctx, rng=np.random.default_rng(9))
        a = [h1.score((), None) for _ in range(5)]
        b = [h2.score((), None) for _ in range(5)]
        assert a == b
        assert all(1 <= x <= 4 for x in a)

    def test_nonboolean_smk_score(self):
        scm = cb.make_smk_nonboolean(2)
        ctx = (0,) * 12
        h = heuristic_for_scm("nonboolean-smk", scm, ctx)
        # all sets empty, SD = DK = -1
        state = cb.evaluate(scm, ctx, cb.intervention_from_names(scm, [("SMK", 1)]))
        assert h.score((), state) == -2
        # FS = {1, 3} contributes 2 directly and 2 more through GP = FS | FN
        scm4 = cb.make_smk_nonboolean(4)
        ctx4 = (0,) * 24
        h4 = heuristic_for_scm("nonboolean-smk", scm4, ctx4)
        e = cb.intervention_from_names(
            scm4, [("FS", frozenset({1, 3})), ("SMK", 1)]
        )
        state = cb.evaluate(scm4, ctx4, e)
        assert h4.score(e, state) == 2

    def test_needs_post_state_flagged(self, rock, rock_ctx):
        h = heuristic_for_scm("positive", rock, rock_ctx)
        with pytest.raises(cb.IncompatibleHeuristic):
            h.score((), None)

    def test_unknown_heuristic(self, rock, rock_ctx):
        with pytest.raises(cb.IncompatibleHeuristic):
            heuristic_for_scm("nope", rock, rock_ctx)

    @given(st.integers(0, 2**12 - 1))
    @settings(max_examples=40, deadline=None)
    def test_occam_changed_complement_property(self, code):
        smk2 = cb.make_smk_base(2)
        ctx = tuple(code >> i & 1 for i in range(12))
        a = cb.evaluate(smk2, ctx, (), noiseless=True)
        if smk2.value_of(a, "SMK") != 1:
            return
        o = cb.ScmOracle(smk2, ctx)
        occam = heuristic_for_scm("occam", smk2, ctx)
        changed = heuristic_for_scm("changed", smk2, ctx)
        e = cb.intervention_from_names(smk2, [("DK", 0)])
        s = o.post_state(e)
        assert occam.score(e, s) + changed.score(e, s) == smk2.n_endo
