"""Dense two-phase primal simplex over exact rationals.

Minimizes c.x subject to linear rows (<=, >=, =) and x >= 0, with every
coefficient a fractions.Fraction, so a reported optimum is exact rather than
a floating approximation. Infeasible and unbounded models come back as
statuses, never exceptions; only exhausting the pivot budget raises.

Pivot selection is Dantzig's rule with smallest-index tie-breaking. A run of
degenerate pivots (no objective movement) switches to Bland's anti-cycling
rule until progress resumes, which keeps the method finite without paying
Bland's price on every step. No big-M terms anywhere: feasibility is found
by a phase-one subproblem over artificial variables, and rows whose slack
can serve directly never get an artificial.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import IterationLimitError

try:  # GMP rationals are ~10x faster; plain Fractions behave identically
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

ZERO = _Q(0)
ONE = _Q(1)


def _to_fraction(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))

DEGENERATE_STREAK = 20
DEFAULT_ITER_CAP = 10**6


@dataclass(frozen=True)
class SimplexResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None
    objective: Fraction | None


def _pivot(T, cost, basis, r, c):
    prow = T[r]
    piv = prow[c]
    if piv != 1:
        T[r] = prow = [v / piv for v in prow]
    for row in T:
        if row is prow:
            continue
        f = row[c]
        if f:
            row[:] = [a - f * b for a, b in zip(row, prow)]
    f = cost[c]
    if f:
        cost[:] = [a - f * b for a, b in zip(cost, prow)]
    basis[r] = c


def solve_simplex(n_vars, rows, objective, iter_cap=DEFAULT_ITER_CAP) -> SimplexResult:
    """Solve min objective.x s.t. rows, x >= 0.

    rows: iterable of (coeffs, rel, rhs) where coeffs maps column -> value
    and rel is "<=", ">=" or "=". objective maps column -> value. Columns
    are 0..n_vars-1. iter_cap bounds pivots across both phases.
    """
    # normalize to <= / = rows, dropping rows already implied by x >= 0
    norm = []
    for coeffs, rel, rhs in rows:
        items = [(j, _Q(v)) for j, v in sorted(coeffs.items()) if v != 0]
        rhs = _Q(rhs)
        if rel == ">=":
            items = [(j, -v) for j, v in items]
            rhs = -rhs
            rel = "<="
        if not items:
            if (rel == "<=" and rhs < 0) or (rel == "=" and rhs != 0):
                return SimplexResult("infeasible", None, None)
            continue
        if rel == "<=" and rhs >= 0 and len(items) == 1 and items[0][1] < 0:
            continue
        norm.append((items, rel == "=", rhs))

    nrows = len(norm)
    slack_col = {}
    ncols = n_vars
    for r, (_, is_eq, _) in enumerate(norm):
        if not is_eq:
            slack_col[r] = ncols
            ncols += 1
    art_start = ncols
    art_rows = []
    basis = [-1] * nrows
    for r, (_, is_eq, rhs) in enumerate(norm):
        if not is_eq and rhs >= 0:
            basis[r] = slack_col[r]
        else:
            basis[r] = ncols
            art_rows.append(r)
            ncols += 1

    width = ncols + 1
    T = []
    for r, (items, _, rhs) in enumerate(norm):
        row = [ZERO] * width
        sign = ONE if rhs >= 0 else -ONE
        for j, v in items:
            row[j] = sign * v
        if r in slack_col:
            row[slack_col[r]] = sign
        if basis[r] >= art_start:
            row[basis[r]] = ONE
        row[-1] = sign * rhs
        T.append(row)

    iters = 0

    def run(cost, limit):
        # returns "optimal" or "unbounded"; T, basis, cost updated in place
        nonlocal iters
        streak = 0
        while True:
            enter = -1
            if streak >= DEGENERATE_STREAK:
                for j in range(limit):
                    if cost[j] < 0:
                        enter = j
                        break
            else:
                best = ZERO
                for j in range(limit):
                    if cost[j] < best:
                        best = cost[j]
                        enter = j
            if enter < 0:
                return "optimal"
            leave = -1
            best_ratio = None
            for r in range(len(T)):
                a = T[r][enter]
                if a > 0:
                    ratio = T[r][-1] / a
                    if (best_ratio is None or ratio < best_ratio
                            or (ratio == best_ratio and basis[r] < basis[leave])):
                        best_ratio = ratio
                        leave = r
            if leave < 0:
                return "unbounded"
            iters += 1
            if iters > iter_cap:
                raise IterationLimitError(
                    f"simplex exceeded {iter_cap} pivots"
                    " (raise CHAINSCHED_ITER_CAP to allow more)")
            streak = streak + 1 if best_ratio == 0 else 0
            _pivot(T, cost, basis, leave, enter)

    if art_rows:
        cost = [ZERO] * width
        for r in art_rows:
            row = T[r]
            for j in range(width):
                if row[j]:
                    cost[j] -= row[j]
        for r in art_rows:
            cost[basis[r]] += ONE
        verdict = run(cost, ncols)
        if verdict != "optimal":  # phase one is bounded below by zero
            raise AssertionError("phase one cannot be unbounded")
        if -cost[-1] > 0:
            return SimplexResult("infeasible", None, None)
        for r in range(nrows):
            if basis[r] >= art_start:
                for j in range(art_start):
                    if T[r][j] != 0:
                        _pivot(T, cost, basis, r, j)
                        break
        keep = [r for r in range(nrows) if basis[r] < art_start]
        T = [T[r][:art_start] + [T[r][-1]] for r in keep]
        basis = [basis[r] for r in keep]
        ncols = art_start
        width = ncols + 1

    cost = [ZERO] * width
    for j, v in objective.items():
        cost[j] = _Q(v)
    for r in range(len(T)):
        f = cost[basis[r]]
        if f:
            trow = T[r]
            cost[:] = [a - f * b for a, b in zip(cost, trow)]
    verdict = run(cost, ncols)
    if verdict == "unbounded":
        return SimplexResult("unbounded", None, None)

    x = [ZERO] * n_vars
    for r, b in enumerate(basis):
        if b < n_vars:
            x[b] = T[r][-1]
    value = sum((_Q(v) * x[j] for j, v in objective.items()), ZERO)
    return SimplexResult("optimal", tuple(_to_fraction(v) for v in x),
                         _to_fraction(value))
