"""Closed-form schedules for the two-processor, two-load benchmark family.

The instance has identical unit compute times w1 = w2 = lam, a unit link,
and two unit loads. Alongside the globally balanced single-installment
schedule, this module reproduces the load-by-load strategy that balances
each load in isolation (here "mvb", for makespan-per-volume balancing):
it is only defined piecewise in lam, needs a growing number of
installments as lam shrinks, and below a critical ratio cannot finish the
second load at all. classify_regime sorts a ratio into those regimes with
exact sign tests on the defining quadratics, so rational inputs never
touch the irrational boundary constants.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import RegimeError, StructuralError
from .model import InstallmentPlan, LoadSet, Platform, Schedule, simulate
from .rationals import as_frac

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ExampleInstance:
    """Two identical processors (compute time lam), unit link, two unit loads."""

    lam: Fraction

    def __post_init__(self):
        lam = as_frac(self.lam)
        if lam <= 0:
            raise StructuralError("lam must be positive")
        object.__setattr__(self, "lam", lam)

    @property
    def platform(self) -> Platform:
        return Platform(w=(self.lam, self.lam), z=(ONE,), tau=(ZERO, ZERO))

    @property
    def loads(self) -> LoadSet:
        return LoadSet(v_comm=(ONE, ONE), v_comp=(ONE, ONE))


class Regime(enum.Enum):
    """Where a ratio lands for the load-by-load strategy.

    INCOMPLETE: the geometric installments cannot cover the second load,
    no matter how many are sent. INFINITE: coverage reaches one only in
    the limit (possible only at the irrational boundary). MULTI: finitely
    many installments suffice. SINGLE: one installment per load works.
    """

    INCOMPLETE = "HeuristicIncomplete"
    INFINITE = "HeuristicInfinite"
    MULTI = "HeuristicMulti"
    SINGLE = "HeuristicSingle"


@dataclass(frozen=True)
class Infeasible:
    """The strategy cannot finish: even infinitely many installments only
    cover `coverage` (at most 1) of the second load."""

    coverage: Fraction


def classify_regime(lam) -> Regime:
    # lam >= (sqrt(3)+1)/2 iff 2 lam^2 - 2 lam - 1 >= 0, and
    # lam >= (sqrt(17)+1)/8 iff 4 lam^2 - lam - 1 >= 0
    lam = as_frac(lam)
    if lam <= 0:
        raise StructuralError("lam must be positive")
    cover = 4 * lam * lam - lam - 1
    if cover < 0:
        return Regime.INCOMPLETE
    if cover == 0:
        return Regime.INFINITE
    if 2 * lam * lam - 2 * lam - 1 < 0:
        return Regime.MULTI
    return Regime.SINGLE


def global_one_installment(x: ExampleInstance) -> Schedule:
    """Jointly balanced single-installment schedule over both loads.

    Both processors stay busy from their first possible moment to the
    common finish 2 lam (lam^2+lam+1) / (2 lam^2 + 2 lam + 1).
    """
    lam = x.lam
    d = 2 * lam * lam + 2 * lam + 1
    gamma = [
        [[(2 * lam * lam + 1) / d], [(2 * lam + 1) / d]],
        [[2 * lam / d], [2 * lam * lam / d]],
    ]
    return simulate(x.platform, x.loads, InstallmentPlan((1, 1)), gamma)


def mvb_one_installment(x: ExampleInstance) -> Schedule:
    """Load-by-load balancing with one installment per load.

    Only defined when the first processor finishes sending the second
    load before it finishes computing the first, which requires
    2 lam^2 - 2 lam - 1 >= 0; below that the strategy has to split the
    second load (see mvb_multi_installment).
    """
    lam = x.lam
    if 2 * lam * lam - 2 * lam - 1 < 0:
        raise RegimeError(
            "one-installment balancing needs 2*lam^2 - 2*lam - 1 >= 0")
    d = 2 * lam + 1
    gamma = [
        [[(lam + 1) / d], [HALF]],
        [[lam / d], [HALF]],
    ]
    return simulate(x.platform, x.loads, InstallmentPlan((1, 1)), gamma)


def mvb_multi_installment(x: ExampleInstance) -> Schedule | Infeasible:
    """Load-by-load balancing, second load split geometrically.

    The first load is balanced as usual; the second goes out in equal
    halves per installment, each lam times the previous one, until the
    remainder fits. Small ratios make the geometric series too short to
    ever cover the load: then the limiting coverage is returned instead
    of a schedule. Ratios in the single-installment regime are rejected,
    use mvb_one_installment there.
    """
    lam = x.lam
    if 2 * lam * lam - 2 * lam - 1 >= 0:
        raise RegimeError(
            "multi-installment balancing applies below the "
            "one-installment regime")
    alpha = lam / (2 * lam + 1)
    if 4 * lam * lam - lam - 1 <= 0:
        return Infeasible(coverage=2 * lam * lam / ((1 - lam) * (2 * lam + 1)))

    # smallest Q whose geometric half-sums reach 1/2; the loop stands in
    # for the usual log-ratio ceiling and also survives lam = 1, where
    # that formula degenerates (Q = 2 there)
    sizes = []
    total = ZERO
    power = ONE
    while total < HALF:
        power *= lam
        sizes.append(power * alpha)
        total += power * alpha
    sizes[-1] = HALF - (total - sizes[-1])  # last installment: the remainder

    gamma = [
        [[(lam + 1) / (2 * lam + 1)], list(sizes)],
        [[alpha], list(sizes)],
    ]
    plan = InstallmentPlan((1, len(sizes)))
    return simulate(x.platform, x.loads, plan, gamma)


def improved_two_installment_schedule() -> Schedule:
    """A hand-built 2x2-installment schedule at lam = 3/4.

    Beats the load-by-load strategy's 9/10 with 2343/2612, by keeping the
    first round of the first load entirely on the second processor.
    """
    x = ExampleInstance(Fraction(3, 4))
    d = Fraction(653)
    gamma = [
        [[ZERO, 317 / d], [ZERO, 464 / d]],
        [[192 / d, 144 / d], [108 / d, 81 / d]],
    ]
    return simulate(x.platform, x.loads, InstallmentPlan((2, 2)), gamma)
