"""Frozen values for the two-processor benchmark family: the jointly
balanced single-installment schedule, the load-by-load strategy in all its
regimes, and cross-checks against the LP optimum."""
from __future__ import annotations

from fractions import Fraction as F

import pytest

from chainsched import InstallmentPlan, validate_schedule
from chainsched.errors import RegimeError, StructuralError
from chainsched.lp import optimal_schedule
from chainsched.reference import (
    ExampleInstance,
    Infeasible,
    Regime,
    classify_regime,
    global_one_installment,
    improved_two_installment_schedule,
    mvb_multi_installment,
    mvb_one_installment,
)

ONE_ONE = InstallmentPlan((1, 1))

# rational grid above (sqrt(3)+1)/2 ~ 1.366, up to 100
SINGLE_REGIME_GRID = [
    F(11, 8), F(7, 5), F(3, 2), F(7, 4), F(2), F(5, 2), F(3),
    F(4), F(11, 2), F(8), F(13), F(21), F(40), F(100),
]


def one_installment_gap(lam):
    """Closed form for mvb makespan minus the jointly balanced makespan."""
    return lam * (2 * lam * lam - 2 * lam - 1) / (
        8 * lam ** 3 + 12 * lam * lam + 8 * lam + 2)


class TestExampleInstance:
    def test_coerces_to_fraction(self):
        assert ExampleInstance(2).lam == F(2)
        assert ExampleInstance("3/4").lam == F(3, 4)

    def test_rejects_nonpositive_ratio(self):
        with pytest.raises(StructuralError):
            ExampleInstance(0)
        with pytest.raises(StructuralError):
            ExampleInstance(F(-1, 2))

    def test_platform_shape(self):
        x = ExampleInstance(F(5, 3))
        assert x.platform.w == (F(5, 3), F(5, 3))
        assert x.platform.z == (F(1),)
        assert x.loads.v_comm == (F(1), F(1))
        assert x.loads.v_comp == (F(1), F(1))


class TestGlobalOneInstallment:
    def test_fractions_and_makespan_at_one_half(self):
        s = global_one_installment(ExampleInstance(F(1, 2)))
        assert [s.gamma[0][0][0], s.gamma[0][1][0]] == [F(3, 5), F(4, 5)]
        assert [s.gamma[1][0][0], s.gamma[1][1][0]] == [F(2, 5), F(1, 5)]
        assert s.makespan == F(7, 10)

    def test_makespan_at_two(self):
        assert global_one_installment(ExampleInstance(F(2))).makespan == F(28, 13)

    def test_validator_clean(self):
        for lam in (F(1, 2), F(1), F(2), F(17, 3)):
            x = ExampleInstance(lam)
            s = global_one_installment(x)
            assert validate_schedule(x.platform, x.loads, ONE_ONE, s).feasible

    def test_large_ratio_gives_each_processor_half_the_work(self):
        # with compute dominating, each processor ends up with about half of
        # the combined volume (the per-load split is lopsided, the totals not)
        s = global_one_installment(ExampleInstance(F(1000)))
        for i in range(2):
            total = s.gamma[i][0][0] + s.gamma[i][1][0]
            assert abs(total - 1) < F(1, 100)

    def test_matches_lp_single_installment_optimum(self):
        for lam in (F(11, 8), F(2), F(5)):
            x = ExampleInstance(lam)
            opt = optimal_schedule(x.platform, x.loads, ONE_ONE)
            assert opt.makespan == global_one_installment(x).makespan


class TestMvbOneInstallment:
    def test_fractions_and_makespan_at_two(self):
        x = ExampleInstance(F(2))
        s = mvb_one_installment(x)
        assert [s.gamma[0][0][0], s.gamma[0][1][0]] == [F(3, 5), F(1, 2)]
        assert [s.gamma[1][0][0], s.gamma[1][1][0]] == [F(2, 5), F(1, 2)]
        assert s.makespan == F(11, 5)
        assert validate_schedule(x.platform, x.loads, ONE_ONE, s).feasible

    def test_rejects_ratios_below_the_regime(self):
        # boundary is (sqrt(3)+1)/2 ~ 1.366; 27/20 = 1.35 sits just below
        for lam in (F(3, 4), F(1), F(27, 20)):
            with pytest.raises(RegimeError):
                mvb_one_installment(ExampleInstance(lam))

    def test_gap_to_global_schedule_follows_closed_form(self):
        for lam in SINGLE_REGIME_GRID:
            gap = (mvb_one_installment(ExampleInstance(lam)).makespan
                   - global_one_installment(ExampleInstance(lam)).makespan)
            assert gap == one_installment_gap(lam)
            assert F(0) <= gap <= F(1, 4)

    def test_never_beats_lp_optimum(self):
        for lam in (F(7, 5), F(2), F(4)):
            x = ExampleInstance(lam)
            opt = optimal_schedule(x.platform, x.loads, ONE_ONE)
            assert opt.makespan <= mvb_one_installment(x).makespan


class TestMvbMultiInstallment:
    def test_three_quarters_needs_three_installments(self):
        x = ExampleInstance(F(3, 4))
        s = mvb_multi_installment(x)
        assert s.makespan == F(9, 10)
        sizes = list(s.gamma[0][1])
        assert sizes == [F(9, 40), F(27, 160), F(17, 160)]
        assert s.gamma[1][1] == s.gamma[0][1]  # equal halves per installment
        assert s.gamma[0][0][0] == F(7, 10) and s.gamma[1][0][0] == F(3, 10)
        plan = InstallmentPlan((1, 3))
        assert validate_schedule(x.platform, x.loads, plan, s).feasible

    def test_unit_ratio_needs_two_installments(self):
        s = mvb_multi_installment(ExampleInstance(F(1)))
        assert list(s.gamma[0][1]) == [F(1, 3), F(1, 6)]
        assert s.makespan == F(7, 6)

    def test_installments_shrink_geometrically(self):
        for lam in (F(7, 10), F(4, 5), F(9, 10), F(1), F(13, 10)):
            lam = F(lam)
            s = mvb_multi_installment(ExampleInstance(lam))
            sizes = list(s.gamma[0][1])
            assert len(sizes) >= 2
            for k in range(len(sizes) - 2):
                assert sizes[k + 1] == lam * sizes[k]
            # the remainder never exceeds the size the series would have used
            assert F(0) < sizes[-1] <= lam * sizes[-2]
            assert 2 * sum(sizes) == 1

    def test_small_ratios_cannot_cover_the_second_load(self):
        out = mvb_multi_installment(ExampleInstance(F(1, 2)))
        assert isinstance(out, Infeasible) and out.coverage == F(1, 2)
        out = mvb_multi_installment(ExampleInstance(F(3, 5)))
        assert isinstance(out, Infeasible) and out.coverage == F(9, 11)

    def test_rejects_single_installment_regime(self):
        with pytest.raises(RegimeError):
            mvb_multi_installment(ExampleInstance(F(2)))

    def test_never_beats_lp_optimum_on_its_own_plan(self):
        x = ExampleInstance(F(3, 4))
        opt = optimal_schedule(x.platform, x.loads, InstallmentPlan((1, 3)))
        assert opt.makespan <= F(9, 10)


class TestClassifyRegime:
    CASES = [
        (F(1, 2), Regime.INCOMPLETE),
        (F(5, 8), Regime.INCOMPLETE),
        (F(13, 20), Regime.MULTI),
        (F(3, 4), Regime.MULTI),
        (F(1), Regime.MULTI),
        (F(27, 20), Regime.MULTI),
        (F(11, 8), Regime.SINGLE),
        (F(2), Regime.SINGLE),
        (F(100), Regime.SINGLE),
    ]

    def test_table(self):
        for lam, want in self.CASES:
            assert classify_regime(lam) is want, lam

    def test_tags(self):
        assert classify_regime(F(1, 2)).value == "HeuristicIncomplete"
        assert classify_regime(F(2)).value == "HeuristicSingle"

    def test_rejects_nonpositive(self):
        with pytest.raises(StructuralError):
            classify_regime(0)

    def test_agrees_with_the_operations(self):
        for lam, want in self.CASES:
            x = ExampleInstance(lam)
            if want is Regime.SINGLE:
                mvb_one_installment(x)
            elif want is Regime.MULTI:
                assert not isinstance(mvb_multi_installment(x), Infeasible)
            else:
                assert isinstance(mvb_multi_installment(x), Infeasible)


class TestImprovedTwoInstallment:
    def test_makespan(self):
        s = improved_two_installment_schedule()
        assert s.makespan == F(2343, 2612)
        assert s.makespan < F(9, 10)

    def test_fractions_sum_per_load(self):
        s = improved_two_installment_schedule()
        for n in range(2):
            assert sum(s.gamma[i][n][j] for i in range(2) for j in range(2)) == 1

    def test_validator_clean(self):
        x = ExampleInstance(F(3, 4))
        s = improved_two_installment_schedule()
        plan = InstallmentPlan((2, 2))
        assert validate_schedule(x.platform, x.loads, plan, s).feasible

    def test_lp_optimum_is_no_worse(self):
        x = ExampleInstance(F(3, 4))
        opt = optimal_schedule(x.platform, x.loads, InstallmentPlan((2, 2)))
        assert opt.makespan <= F(2343, 2612)
