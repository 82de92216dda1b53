"""Shared test fixtures: canned instances, random instance generators, and
the per-family perturbation table used by the validator completeness tests."""
from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction as F

from chainsched import InstallmentPlan, LoadSet, Platform, Schedule, simulate

EPS = F(1, 1000)


def two_proc(lam, n_loads=2):
    """w_1 = w_2 = lam, z_1 = 1, unit loads."""
    p = Platform(w=(lam, lam), z=(F(1),), tau=(F(0), F(0)))
    l = LoadSet(v_comm=(F(1),) * n_loads, v_comp=(F(1),) * n_loads)
    return p, l


def two_load_optimal_gamma(lam):
    """Fractions that balance both processors across two unit loads in a
    single installment each: P_1 gets (2*lam^2+1)/D and (2*lam+1)/D,
    P_2 gets 2*lam/D and 2*lam^2/D with D = 2*lam^2 + 2*lam + 1."""
    d = 2 * lam * lam + 2 * lam + 1
    return [
        [[(2 * lam * lam + 1) / d], [(2 * lam + 1) / d]],
        [[2 * lam / d], [2 * lam * lam / d]],
    ]


def improved_two_installment_gamma():
    """The hand-built 2x2-installment improvement at lam = 3/4 (denominator 653)."""
    d = F(653)
    return [
        [[F(0), 317 / d], [F(0), 464 / d]],
        [[192 / d, 144 / d], [108 / d, 81 / d]],
    ]


def rand_frac(rng: random.Random, lo=F(1, 4), hi=F(4)) -> F:
    den = rng.randint(1, 8)
    lo_num = -(-lo.numerator * den // lo.denominator)  # ceil(lo * den)
    hi_num = hi.numerator * den // hi.denominator
    return F(rng.randint(lo_num, hi_num), den)


def random_instance(rng: random.Random, m_choices=(2, 3, 4), n_choices=(1, 2, 3),
                    with_tau=False, with_release=False):
    m = rng.choice(m_choices)
    n = rng.choice(n_choices)
    tau = tuple(rand_frac(rng) for _ in range(m)) if with_tau else (F(0),) * m
    p = Platform(
        w=tuple(rand_frac(rng) for _ in range(m)),
        z=tuple(rand_frac(rng) for _ in range(m - 1)),
        tau=tau,
    )
    release = tuple(rand_frac(rng) for _ in range(n)) if with_release else None
    l = LoadSet(
        v_comm=tuple(rand_frac(rng) for _ in range(n)),
        v_comp=tuple(rand_frac(rng) for _ in range(n)),
        release=release,
    )
    return p, l


def random_gamma(rng: random.Random, m: int, plan: InstallmentPlan):
    """Nonnegative fractions with exact per-load sums of 1."""
    gamma = [[[F(0)] * qn for qn in plan.q] for _ in range(m)]
    for n, qn in enumerate(plan.q):
        weights = [[rng.randint(0, 6) for _ in range(qn)] for _ in range(m)]
        weights[rng.randrange(m)][rng.randrange(qn)] += 1
        total = sum(sum(row) for row in weights)
        for i in range(m):
            for j in range(qn):
                gamma[i][n][j] = F(weights[i][j], total)
    return gamma


# ---------- validator completeness table ----------


def _edit(grid, i, n, j, delta):
    g = [[list(js) for js in mid] for mid in grid]
    g[i][n][j] = g[i][n][j] + delta
    return tuple(tuple(tuple(js) for js in mid) for mid in g)


def _shift(s: Schedule, **deltas) -> Schedule:
    """Return a copy of s with (array, i, n, j) cells shifted by deltas given
    as field=list-of-(i, n, j, delta) plus optional makespan_delta."""
    kwargs = {}
    for field, edits in deltas.items():
        if field == "makespan_delta":
            kwargs["makespan"] = s.makespan + edits
            continue
        grid = getattr(s, field)
        for (i, n, j, delta) in edits:
            grid = _edit(grid, i, n, j, delta)
        kwargs[field] = grid
    return replace(s, **kwargs)


def _case_family_1():
    p = Platform(w=(F(1), F(1), F(1)), z=(F(1), F(1)), tau=(F(0),) * 3)
    l = LoadSet(v_comm=(F(1),), v_comp=(F(1),))
    plan = InstallmentPlan((1,))
    s = simulate(p, l, plan, [[[F(1, 3)]], [[F(1, 3)]], [[F(1, 3)]]])
    bad = _shift(s, comm_start=[(1, 0, 0, -EPS)], comm_end=[(1, 0, 0, -EPS)])
    return p, l, plan, bad


def _case_family_2():
    p = Platform(w=(F(1), F(1), F(1)), z=(F(1), F(1)), tau=(F(0),) * 3)
    l = LoadSet(v_comm=(F(1),), v_comp=(F(1),))
    plan = InstallmentPlan((2,))
    gamma = [[[F(1, 6), F(1, 6)]], [[F(1, 6), F(1, 6)]], [[F(1, 6), F(1, 6)]]]
    s = simulate(p, l, plan, gamma)
    bad = _shift(s, comm_start=[(0, 0, 1, -EPS)], comm_end=[(0, 0, 1, -EPS)])
    return p, l, plan, bad


def _case_family_2_last_link():
    p, l = two_proc(F(1), n_loads=1)
    plan = InstallmentPlan((2,))
    s = simulate(p, l, plan, [[[F(1, 4), F(1, 4)]], [[F(1, 4), F(1, 4)]]])
    bad = _shift(s, comm_start=[(0, 0, 1, -EPS)], comm_end=[(0, 0, 1, -EPS)])
    return p, l, plan, bad


def _case_family_3():
    p = Platform(w=(F(1), F(1), F(1)), z=(F(1), F(1)), tau=(F(0),) * 3)
    l = LoadSet(v_comm=(F(1), F(1)), v_comp=(F(1), F(1)))
    plan = InstallmentPlan((1, 1))
    gamma = [[[F(1, 3)], [F(1, 3)]], [[F(1, 3)], [F(1, 3)]], [[F(1, 3)], [F(1, 3)]]]
    s = simulate(p, l, plan, gamma)
    bad = _shift(s, comm_start=[(0, 1, 0, -EPS)], comm_end=[(0, 1, 0, -EPS)])
    return p, l, plan, bad


def _case_family_3_last_link():
    p, l = two_proc(F(1, 2))
    plan = InstallmentPlan((1, 1))
    s = simulate(p, l, plan, two_load_optimal_gamma(F(1, 2)))
    bad = _shift(s, comm_start=[(0, 1, 0, -EPS)], comm_end=[(0, 1, 0, -EPS)])
    return p, l, plan, bad


def _case_family_4():
    p, l = two_proc(F(2), n_loads=1)
    plan = InstallmentPlan((1,))
    s = simulate(p, l, plan, [[[F(3, 5)]], [[F(2, 5)]]])
    bad = _shift(s, comm_start=[(0, 0, 0, -EPS)], comm_end=[(0, 0, 0, -EPS)])
    return p, l, plan, bad


def _case_family_5():
    p, l = two_proc(F(2), n_loads=1)
    plan = InstallmentPlan((1,))
    s = simulate(p, l, plan, [[[F(3, 5)]], [[F(2, 5)]]])
    bad = _shift(s, comm_end=[(0, 0, 0, -EPS)])
    return p, l, plan, bad


def _case_family_6():
    p, l = two_proc(F(2), n_loads=1)
    plan = InstallmentPlan((1,))
    s = simulate(p, l, plan, [[[F(3, 5)]], [[F(2, 5)]]])
    bad = _shift(s, comp_start=[(1, 0, 0, -EPS)], comp_end=[(1, 0, 0, -EPS)])
    return p, l, plan, bad


def _case_family_7():
    p, l = two_proc(F(2), n_loads=1)
    plan = InstallmentPlan((1,))
    s = simulate(p, l, plan, [[[F(3, 5)]], [[F(2, 5)]]])
    bad = _shift(s, comp_end=[(1, 0, 0, -EPS)])
    return p, l, plan, bad


def _case_family_8():
    p = Platform(w=(F(1),), z=(), tau=(F(0),))
    l = LoadSet(v_comm=(F(1), F(1)), v_comp=(F(1), F(1)))
    plan = InstallmentPlan((1, 1))
    s = simulate(p, l, plan, [[[F(1)], [F(1)]]])
    bad = _shift(s, comp_start=[(0, 1, 0, -EPS)], comp_end=[(0, 1, 0, -EPS)])
    return p, l, plan, bad


def _case_family_9():
    p = Platform(w=(F(1),), z=(), tau=(F(0),))
    l = LoadSet(v_comm=(F(1),), v_comp=(F(1),))
    plan = InstallmentPlan((2,))
    s = simulate(p, l, plan, [[[F(1, 2), F(1, 2)]]])
    bad = _shift(s, comp_start=[(0, 0, 1, -EPS)], comp_end=[(0, 0, 1, -EPS)])
    return p, l, plan, bad


def _case_family_10():
    p = Platform(w=(F(1),), z=(), tau=(F(1),))
    l = LoadSet(v_comm=(F(1),), v_comp=(F(1),))
    plan = InstallmentPlan((1,))
    s = simulate(p, l, plan, [[[F(1)]]])
    bad = _shift(s, comp_start=[(0, 0, 0, -EPS)], comp_end=[(0, 0, 0, -EPS)])
    return p, l, plan, bad


def _case_family_11():
    p, l = two_proc(F(2), n_loads=1)
    plan = InstallmentPlan((1,))
    z, w = p.z[0], p.w[1]
    bad = Schedule(
        gamma=[[[1 + EPS]], [[-EPS]]],
        comm_start=[[[F(0)]]],
        comm_end=[[[-EPS * z]]],
        comp_start=[[[F(0)]], [[F(0)]]],
        comp_end=[[[(1 + EPS) * p.w[0]]], [[-EPS * w]]],
        makespan=(1 + EPS) * p.w[0],
    )
    return p, l, plan, bad


def _case_family_12():
    p, l = two_proc(F(2), n_loads=1)
    plan = InstallmentPlan((1,))
    s = simulate(p, l, plan, [[[F(3, 5)]], [[F(2, 5)]]])
    bad = _shift(s, gamma=[(0, 0, 0, EPS)], comp_end=[(0, 0, 0, EPS * p.w[0])])
    bad = replace(bad, makespan=max(bad.comp_end[0][0][0], bad.comp_end[1][0][0]))
    return p, l, plan, bad


def _case_family_13():
    p, l = two_proc(F(2), n_loads=1)
    plan = InstallmentPlan((1,))
    s = simulate(p, l, plan, [[[F(3, 5)]], [[F(2, 5)]]])
    bad = _shift(s, makespan_delta=-EPS)
    return p, l, plan, bad


FAMILY_CASES = {
    1: [_case_family_1],
    2: [_case_family_2, _case_family_2_last_link],
    3: [_case_family_3, _case_family_3_last_link],
    4: [_case_family_4],
    5: [_case_family_5],
    6: [_case_family_6],
    7: [_case_family_7],
    8: [_case_family_8],
    9: [_case_family_9],
    10: [_case_family_10],
    11: [_case_family_11],
    12: [_case_family_12],
    13: [_case_family_13],
}
