"""Installment refinement: the halving transformation, optimal-makespan
sweeps over installment counts, and the startup-overhead bound on how many
installments are worth sending.

Halving an installment never hurts: the receiving side can start on the
first piece while the second is still on the wire. Sweeping the LP over
uniform installment counts makes the resulting decrease observable; the
overhead bound is the practical brake once each send carries a fixed
startup cost.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import SplitError, StructuralError
from .lp import optimal_schedule
from .model import InstallmentPlan, LoadSet, Platform, Schedule, simulate
from .rationals import as_frac


@dataclass(frozen=True)
class SplitSpec:
    """Which installment to halve: one-based load and installment index."""

    load: int
    installment: int


def split_installment(
    platform: Platform,
    loads: LoadSet,
    plan: InstallmentPlan,
    schedule: Schedule,
    spec: SplitSpec,
) -> tuple[InstallmentPlan, Schedule]:
    """Halve one installment into two identical back-to-back pieces.

    Every processor's fraction of the targeted installment splits into two
    equal parts; all other installments keep their sizes. The returned
    schedule realizes the new fraction vector from scratch, so its makespan
    is never larger than the input's. Splitting an installment of size zero
    on every processor raises SplitError (the transformation would be a
    no-op with one more column).
    """
    n0 = spec.load - 1
    j0 = spec.installment - 1
    if not 0 <= n0 < len(plan.q):
        raise StructuralError(f"no load {spec.load}")
    if not 0 <= j0 < plan.q[n0]:
        raise StructuralError(
            f"load {spec.load} has {plan.q[n0]} installments, "
            f"cannot split installment {spec.installment}")
    m = len(platform.w)
    if all(schedule.gamma[i][n0][j0] == 0 for i in range(m)):
        raise SplitError(
            f"installment {spec.installment} of load {spec.load} "
            "is empty on every processor")

    gamma = []
    for i in range(m):
        row = list(schedule.gamma[i][n0])
        half = row[j0] / 2
        row[j0:j0 + 1] = [half, half]
        mid = [list(schedule.gamma[i][n]) for n in range(len(plan.q))]
        mid[n0] = row
        gamma.append(mid)
    q = list(plan.q)
    q[n0] += 1
    new_plan = InstallmentPlan(tuple(q))
    return new_plan, simulate(platform, loads, new_plan, gamma)


def installment_sweep(
    platform: Platform,
    loads: LoadSet,
    q_max: int,
    objective=None,
) -> list[tuple[int, Fraction]]:
    """Exact optimal makespan for each uniform plan Q_n = q, q = 1..q_max.

    The sequence is non-increasing; it decreases strictly as long as
    communications sit on the critical path.
    """
    if q_max < 1:
        raise StructuralError("q_max must be at least 1")
    n_loads = len(loads.v_comm)
    out = []
    for q in range(1, q_max + 1):
        plan = InstallmentPlan((q,) * n_loads)
        s = optimal_schedule(platform, loads, plan, objective)
        out.append((q, s.makespan))
    return out


@dataclass(frozen=True)
class OverheadModel:
    """Fixed startup cost per communication, in load units, and the largest
    tolerated ratio of padded to raw communication volume."""

    k: Fraction
    rho_max: Fraction

    def __post_init__(self):
        k = as_frac(self.k)
        rho = as_frac(self.rho_max)
        if k <= 0:
            raise StructuralError("startup cost must be positive")
        if rho <= 1:
            raise StructuralError("rho_max must exceed 1")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "rho_max", rho)


def bounded_installments(v_comm, m: int, om: OverheadModel) -> int:
    """Largest installment count keeping the overhead ratio within rho_max.

    With Q installments of a load of volume v crossing m-1 links, the
    padded-to-raw ratio is ((m-1) Q K + v) / v; the bound is the largest Q
    holding that at or below rho_max, floored at 1 so a load still ships
    even when the budget is hopeless.
    """
    if m < 2:
        raise StructuralError("a single processor sends nothing")
    v = as_frac(v_comm)
    if v <= 0:
        raise StructuralError("communication volume must be positive")
    q = math.floor((om.rho_max - 1) * v / ((m - 1) * om.k))
    return max(1, q)
