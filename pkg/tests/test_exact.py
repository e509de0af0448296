"""Exhaustive reference enumerator."""

from __future__ import annotations

import pytest

import causebeam as cb
from causebeam.exact import reference_to_dict, space_size

from conftest import cause_set_names


class TestSpaceSize:
    def test_rock_depth_two(self, rock, rock_ctx):
        # full value products: 4 vars x 2 values, plus C(4,2) pairs x 2x2
        n = space_size(rock.search_variables, rock.endo_domains, 2)
        assert n == 4 * 2 + 6 * 4

    def test_zero_max_size(self, rock):
        assert space_size(rock.search_variables, rock.endo_domains, 0) == 0


class TestEnumerateCauses:
    def test_rock_reference(self, rock, rock_ctx):
        oracle = cb.ScmOracle(rock, rock_ctx)
        causes = cb.enumerate_causes_scm(rock, rock_ctx, oracle, max_size=3)
        assert cause_set_names(rock, causes) == {
            frozenset({"ST"}),
            frozenset({"SH"}),
        }
        for c in causes:
            assert {rock.endo_names[v] for v in c.contingency_vars} == {"BH"}

    def test_constant_one_oracle_empty(self, rock, rock_ctx):
        v = cb.actual_values(rock, rock_ctx)
        oracle = cb.CallableOracle(lambda e: 1)
        causes = cb.enumerate_causes(
            rock.search_variables, rock.endo_domains, v, oracle, max_size=2
        )
        assert causes == []

    def test_budget_raise(self, smk3, smk3_ctx):
        oracle = cb.ScmOracle(smk3, smk3_ctx)
        with pytest.raises(cb.BudgetExceeded) as exc:
            cb.enumerate_causes_scm(smk3, smk3_ctx, oracle, max_size=6, budget=1000)
        assert exc.value.budget == 1000
        assert exc.value.size > 1000

    def test_outputs_pass_full_hp_check(self, smk2, smk2_contexts, smk2_references):
        for ctx, ref in list(zip(smk2_contexts, smk2_references))[:5]:
            for c in ref:
                verdict = cb.check_hp_cause(
                    smk2, ctx, c.cause, set(c.contingency_vars), max_contingency=3
                )
                assert verdict.ac1_ok and verdict.ac2_ok and verdict.ac3_ok

    def test_mutually_minimal(self, smk2_references):
        for ref in smk2_references[:10]:
            sets = [c.cause_vars for c in ref]
            for a in sets:
                assert sum(1 for b in sets if b == a) == 1
                assert not any(b < a for b in sets)

    def test_matches_unlimited_beam_on_smk3(self, smk3, smk3_ctx):
        oracle = cb.ScmOracle(smk3, smk3_ctx)
        # max_size bounds |e| = |C| + |W|; pair causes carry a one-element
        # contingency, so depth 3 is needed to surface them
        exact = cb.enumerate_causes_scm(smk3, smk3_ctx, oracle, max_size=3)
        assert cause_set_names(smk3, exact) == {
            frozenset({"DK"}),
            frozenset({"DK_2"}),
            frozenset({"GP_2"}),
            frozenset({"GK_2"}),
            frozenset({"FS_2", "FN_2"}),
            frozenset({"FF_2", "FDB_2"}),
        }

    def test_reference_to_dict_shape(self, rock, rock_ctx):
        oracle = cb.ScmOracle(rock, rock_ctx)
        causes = cb.enumerate_causes_scm(rock, rock_ctx, oracle, max_size=2)
        d = reference_to_dict(causes, rock.endo_names, rock.endo_domains)
        assert isinstance(d, list)
        for entry in d:
            assert set(entry) == {"cause", "contingency", "size"}
            assert entry["size"] == len(entry["cause"])
