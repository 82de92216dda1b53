"""The chain scheduling problem as an exact linear program.

build_lp writes out the complete constraint system for an instance: chain
store-and-forward ordering, one-port serialization per link, transfer and
computation durations tied to the fraction variables, receive-before-compute,
per-processor computation chaining, availability and release dates,
nonnegative fractions summing to one per load, and the makespan bound.
solve_lp minimizes the requested objective over exact rationals.

Two solve strategies return the same exact optimum. A model fresh out of
build_lp is solved by a cutting-plane loop: a small master program over the
fractions and the objective variables collects critical-path lower bounds
read off the earliest-start realization, and stops when the master bound
equals the makespan of a realized schedule, which certifies optimality
(the master is a relaxation, the realization is feasible). Models that were
edited or assembled by hand fall back to the dense two-phase simplex over
the full variable set.
"""
from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import IterationLimitError, StructuralError
from .model import (
    InstallmentPlan,
    LoadSet,
    Platform,
    Schedule,
    check_instance,
    communication_durations,
    computation_durations,
    earliest_start_times,
)
from .rationals import as_frac
from .simplex import DEFAULT_ITER_CAP, solve_simplex

try:  # optional accelerator: float LP runs scout for cuts, never for answers
    from scipy.optimize import linprog as _linprog
    from scipy.sparse import csc_matrix as _sparse
except ImportError:  # pragma: no cover
    _linprog = None
    _sparse = None

ZERO = Fraction(0)
ONE = Fraction(1)

ITER_CAP_ENV = "CHAINSCHED_ITER_CAP"
CUT_ROUNDS = 10_000
TIE_TOL = 1e-9  # relative slack under which a precedence edge counts as tight
PATH_CAP = 64  # tight paths registered per float solution


@dataclass(frozen=True)
class ObjectiveSpec:
    """What to minimize.

    kind "makespan" minimizes the makespan variable. kind "affine" minimizes
    constant + sum_n weights[n] * C_n where C_n is the completion time of
    load n (an auxiliary variable bounded below by every Ce_{i,n,Q_n}).
    """
    kind: str = "makespan"
    weights: tuple = ()
    constant: Fraction = ZERO

    def __post_init__(self):
        if self.kind not in ("makespan", "affine"):
            raise StructuralError(f"unknown objective kind {self.kind!r}")
        object.__setattr__(self, "weights", tuple(as_frac(w) for w in self.weights))
        object.__setattr__(self, "constant", as_frac(self.constant))


@dataclass(frozen=True)
class Constraint:
    """One row: sum(coeff * var) rel rhs, tagged with its family 1..13."""
    coeffs: tuple  # ((varkey, Fraction), ...), sorted by key
    rel: str  # ">=" or "="
    rhs: Fraction
    family: int
    index: tuple


@dataclass(frozen=True)
class LpMeta:
    platform: Platform
    loads: LoadSet
    plan: InstallmentPlan
    digest: str


@dataclass(frozen=True)
class LpModel:
    variables: tuple
    constraints: tuple
    objective: ObjectiveSpec
    meta: LpMeta | None = None


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    values: dict
    objective_value: Fraction | None


def _digest(variables, constraints, objective) -> str:
    blob = repr((variables, constraints, objective)).encode()
    return hashlib.sha256(blob).hexdigest()


def build_lp(platform, loads, plan, objective=None) -> LpModel:
    """Emit the full constraint system for the instance.

    Variable keys are 1-based tuples: ("S", i, n, j) and ("E", i, n, j) for
    the transfer on link i, ("Cs", i, n, j) / ("Ce", i, n, j) / ("gamma",
    i, n, j) for processor i, ("makespan",), and ("C", n) for affine
    objectives. Families, with their quantifier ranges:

      1   S_{i,n,j} >= E_{i-1,n,j}          2 <= i <= m-1
      2   S_{i,n,j+1} >= E_{i+1,n,j}        i <= m-2, plus the last link's
          own serialization S_{m-1,n,j+1} >= E_{m-1,n,j}
      3   S_{i,n+1,1} >= E_{i+1,n,Q_n}      i <= m-2, plus the last link's
          own serialization S_{m-1,n+1,1} >= E_{m-1,n,Q_n}
      4   S_{i,n,j} >= 0, and S_{1,n,1} >= release(n) when given
      5   E_{i,n,j} = S_{i,n,j} + z_i V_comm(n) sum_{k>i} gamma_k^j(n)
      6   Cs_{i,n,j} >= E_{i-1,n,j}         i >= 2
      7   Ce_{i,n,j} = Cs_{i,n,j} + w_i(n) gamma_i^j(n) V_comp(n)
      8   Cs_{i,n+1,1} >= Ce_{i,n,Q_n}
      9   Cs_{i,n,j+1} >= Ce_{i,n,j}
      10  Cs_{i,1,1} >= tau_i, and Cs_{i,n,1} >= release(n) when given
      11  gamma_i^j(n) >= 0
      12  sum_{i,j} gamma_i^j(n) = 1 per load
      13  makespan >= Ce_{i,N,Q_N}; affine objectives also add
          C_n >= Ce_{i,n,Q_n} here

    For m >= 3 the extra last-link rows in families 2 and 3 are implied by
    the others; for m = 2 they carry the link's one-port rule (without them
    nothing would keep consecutive transfers on the only link apart).
    """
    check_instance(platform, loads, plan)
    obj = objective if objective is not None else ObjectiveSpec()
    m, nl, q = platform.m, loads.n_loads, plan.q
    if obj.kind == "affine" and len(obj.weights) != nl:
        raise StructuralError("affine objective needs one weight per load")
    release = loads.release

    cons = []

    def row(family, index, coeffs, rel, rhs):
        items = tuple(sorted((k, as_frac(v)) for k, v in coeffs.items() if v != 0))
        cons.append(Constraint(items, rel, as_frac(rhs), family, index))

    def inst(n):
        return range(1, q[n - 1] + 1)

    # (1) a transfer leaves a processor only after it arrived there
    for i in range(2, m):
        for n in range(1, nl + 1):
            for j in inst(n):
                row(1, (i, n, j),
                    {("S", i, n, j): 1, ("E", i - 1, n, j): -1}, ">=", 0)
    # (2)/(3) one-port: a processor receives only after forwarding; the
    # min() caps the partner at the last link, whose serialization has no
    # downstream row to come from
    for i in range(1, m):
        e = min(i + 1, m - 1)
        for n in range(1, nl + 1):
            for j in range(2, q[n - 1] + 1):
                row(2, (i, n, j),
                    {("S", i, n, j): 1, ("E", e, n, j - 1): -1}, ">=", 0)
        for n in range(1, nl):
            row(3, (i, n + 1, 1),
                {("S", i, n + 1, 1): 1, ("E", e, n, q[n - 1]): -1}, ">=", 0)
    # (4) transfers start at nonnegative times, past any release date
    for i in range(1, m):
        for n in range(1, nl + 1):
            for j in inst(n):
                row(4, (i, n, j), {("S", i, n, j): 1}, ">=", 0)
    if release is not None and m >= 2:
        for n in range(1, nl + 1):
            row(4, (1, n, 1), {("S", 1, n, 1): 1}, ">=", release[n - 1])
    # (5) transfer duration: everything bound for processors past link i
    for i in range(1, m):
        for n in range(1, nl + 1):
            for j in inst(n):
                coeffs = {("E", i, n, j): 1, ("S", i, n, j): -1}
                c = platform.z[i - 1] * loads.v_comm[n - 1]
                for k in range(i + 1, m + 1):
                    coeffs[("gamma", k, n, j)] = -c
                row(5, (i, n, j), coeffs, "=", 0)
    # (6) compute only after the matching receive ended
    for i in range(2, m + 1):
        for n in range(1, nl + 1):
            for j in inst(n):
                row(6, (i, n, j),
                    {("Cs", i, n, j): 1, ("E", i - 1, n, j): -1}, ">=", 0)
    # (7) computation duration
    for i in range(1, m + 1):
        for n in range(1, nl + 1):
            for j in inst(n):
                rate = platform.compute_rate(i - 1, n - 1)
                row(7, (i, n, j),
                    {("Ce", i, n, j): 1, ("Cs", i, n, j): -1,
                     ("gamma", i, n, j): -rate * loads.v_comp[n - 1]}, "=", 0)
    # (8)/(9) per-processor computation chain
    for i in range(1, m + 1):
        for n in range(1, nl):
            row(8, (i, n + 1, 1),
                {("Cs", i, n + 1, 1): 1, ("Ce", i, n, q[n - 1]): -1}, ">=", 0)
        for n in range(1, nl + 1):
            for j in range(2, q[n - 1] + 1):
                row(9, (i, n, j),
                    {("Cs", i, n, j): 1, ("Ce", i, n, j - 1): -1}, ">=", 0)
    # (10) availability and release dates
    for i in range(1, m + 1):
        row(10, (i, 1, 1), {("Cs", i, 1, 1): 1}, ">=", platform.tau[i - 1])
    if release is not None:
        for i in range(1, m + 1):
            for n in range(1, nl + 1):
                row(10, (i, n, 1), {("Cs", i, n, 1): 1}, ">=", release[n - 1])
    # (11) nonnegative fractions
    for i in range(1, m + 1):
        for n in range(1, nl + 1):
            for j in inst(n):
                row(11, (i, n, j), {("gamma", i, n, j): 1}, ">=", 0)
    # (12) every load fully processed
    for n in range(1, nl + 1):
        row(12, (n,),
            {("gamma", i, n, j): 1 for i in range(1, m + 1) for j in inst(n)},
            "=", 1)
    # (13) objective variables bound the final completion times
    for i in range(1, m + 1):
        row(13, (i,),
            {("makespan",): 1, ("Ce", i, nl, q[nl - 1]): -1}, ">=", 0)
    if obj.kind == "affine":
        for n in range(1, nl + 1):
            for i in range(1, m + 1):
                row(13, (i, n),
                    {("C", n): 1, ("Ce", i, n, q[n - 1]): -1}, ">=", 0)

    variables = []
    for kind in ("S", "E"):
        for i in range(1, m):
            for n in range(1, nl + 1):
                for j in inst(n):
                    variables.append((kind, i, n, j))
    for kind in ("Cs", "Ce", "gamma"):
        for i in range(1, m + 1):
            for n in range(1, nl + 1):
                for j in inst(n):
                    variables.append((kind, i, n, j))
    variables.append(("makespan",))
    if obj.kind == "affine":
        for n in range(1, nl + 1):
            variables.append(("C", n))

    variables = tuple(variables)
    constraints = tuple(cons)
    meta = LpMeta(platform, loads, plan, _digest(variables, constraints, obj))
    return LpModel(variables, constraints, obj, meta)


def _iter_cap(explicit):
    if explicit is not None:
        return explicit
    env = os.environ.get(ITER_CAP_ENV)
    return int(env) if env else DEFAULT_ITER_CAP


def solve_lp(model: LpModel, iter_cap=None) -> LpSolution:
    """Minimize the model's objective exactly.

    Standard models (untouched since build_lp, recognized by fingerprint)
    take the cutting-plane route; anything else is solved densely. Both
    return exact rationals for every variable. iter_cap (or the
    CHAINSCHED_ITER_CAP environment variable) bounds simplex pivots.
    """
    cap = _iter_cap(iter_cap)
    meta = model.meta
    if meta is not None and meta.digest == _digest(
            model.variables, model.constraints, model.objective):
        return _solve_standard(model, cap)
    return _solve_dense(model, cap)


def _solve_dense(model, cap):
    col = {k: idx for idx, k in enumerate(model.variables)}
    rows = []
    for c in model.constraints:
        try:
            rows.append(({col[k]: v for k, v in c.coeffs}, c.rel, c.rhs))
        except KeyError as exc:
            raise StructuralError(
                f"constraint references undeclared variable {exc.args[0]!r}")
    obj = model.objective
    cost = {}
    if obj.kind == "makespan":
        cost[col[("makespan",)]] = ONE
    else:
        for n, w in enumerate(obj.weights, start=1):
            if w:
                cost[col[("C", n)]] = w
    res = solve_simplex(len(model.variables), rows, cost, iter_cap=cap)
    if res.status != "optimal":
        return LpSolution(res.status, {}, None)
    values = {k: res.x[i] for k, i in col.items()}
    total = res.objective + (obj.constant if obj.kind == "affine" else ZERO)
    return LpSolution("optimal", values, total)


def _critical_path(pred, event, platform, loads):
    """Constant and per-fraction coefficients of the path ending at event.

    Walking the predecessor chain sums activity durations, each linear in
    gamma: a computation (i,n,j) contributes w_i(n) V_comp(n) on its own
    fraction, a transfer on link i contributes z_i V_comm(n) on every
    fraction bound past the link. The chain bottoms out at time zero, an
    availability date or a release date, which becomes the constant.
    """
    const = ZERO
    coeffs = {}
    node = event
    while node is not None and node[0] in ("comm", "comp"):
        kind, i, n, j = node
        if kind == "comp":
            inc = platform.compute_rate(i, n) * loads.v_comp[n]
            coeffs[(i, n, j)] = coeffs.get((i, n, j), ZERO) + inc
        else:
            inc = platform.z[i] * loads.v_comm[n]
            for k in range(i + 1, platform.m):
                coeffs[(k, n, j)] = coeffs.get((k, n, j), ZERO) + inc
        node = pred[node]
    if node is not None:
        const = platform.tau[node[1]] if node[0] == "tau" else loads.release[node[1]]
    return const, coeffs


def _observe(p, l, plan, gamma, add_cut):
    """Simulate gamma and register each processor's critical path as a cut.

    Works for exact or float gamma alike; the registered cut coefficients
    are always exact because they come from the instance data and the path
    structure, not from the realized times. Returns the realized makespan
    and whether any registered path was new.
    """
    m, nl, q = p.m, l.n_loads, plan.q
    last = nl - 1
    comm = communication_durations(p, l, plan, gamma)
    comp = computation_durations(p, l, plan, gamma)
    _, _, _, Ce, pred = earliest_start_times(
        m, comm, comp, p.tau, l.release, trace=True)
    realized = max(Ce[i][last][q[last] - 1] for i in range(m))
    added = False
    for i in range(m):
        const, gco = _critical_path(pred, ("comp", i, last, q[last] - 1), p, l)
        added = add_cut(None, const, gco) or added
    return realized, added


def _tight_paths(p, l, plan, gamma, cap=None):
    """Every near-tight critical path at gamma, plus the realized makespan.

    Degenerate schedules finish along several paths at once; the certificate
    needs the whole tight family, not just the one the predecessor trace
    happens to record. DFS over tie edges, capped to keep pathological
    instances from exploding. The paths feed the certificate only; filing
    them all as master cuts would bloat the exact fallback for nothing.
    """
    if cap is None:
        cap = PATH_CAP
    m, nl, q = p.m, l.n_loads, plan.q
    last = nl - 1
    comm = communication_durations(p, l, plan, gamma)
    comp = computation_durations(p, l, plan, gamma)
    _, _, _, Ce, pred = earliest_start_times(
        m, comm, comp, p.tau, l.release, trace=True, tie_tol=TIE_TOL)
    paths = []
    seen = set()

    def emit(const, coeffs):
        key = (const, tuple(sorted(coeffs.items())))
        if key not in seen:
            seen.add(key)
            paths.append((None, const, coeffs))

    def walk(node, coeffs):
        while True:
            if len(paths) >= cap:
                return
            if node is None:
                emit(ZERO, coeffs)
                return
            if node[0] == "tau":
                emit(p.tau[node[1]], coeffs)
                return
            if node[0] == "release":
                emit(l.release[node[1]], coeffs)
                return
            kind, i, n, j = node
            if kind == "comp":
                inc = p.compute_rate(i, n) * l.v_comp[n]
                coeffs[(i, n, j)] = coeffs.get((i, n, j), ZERO) + inc
            else:
                inc = p.z[i] * l.v_comm[n]
                for k in range(i + 1, m):
                    coeffs[(k, n, j)] = coeffs.get((k, n, j), ZERO) + inc
            nxt = pred[node]
            if len(nxt) == 1:
                node = nxt[0]
                continue
            for alt in nxt:
                walk(alt, dict(coeffs))
            return

    for i in range(m):
        walk(("comp", i, last, q[last] - 1), {})
    return max(Ce[i][last][q[last] - 1] for i in range(m)), paths


def _float_full_solve(model):
    """Solve the complete constraint system once in floating point.

    Returns the variable values keyed by column map, or None when the
    solver is unavailable or unhappy. Purely advisory: the caller uses the
    point to guess the optimal support, never as an answer.
    """
    cols = {vk: c for c, vk in enumerate(model.variables)}
    nv = len(cols)
    ub = ([], [], [], [])  # data, row, col, rhs
    eq = ([], [], [], [])
    for con in model.constraints:
        tgt, sign = (ub, -1.0) if con.rel == ">=" else (eq, 1.0)
        r = len(tgt[3])
        for vk, v in con.coeffs:
            tgt[0].append(sign * float(v))
            tgt[1].append(r)
            tgt[2].append(cols[vk])
        tgt[3].append(sign * float(con.rhs))
    cost = [0.0] * nv
    obj = model.objective
    if obj.kind == "makespan":
        cost[cols[("makespan",)]] = 1.0
    else:
        for n, w in enumerate(obj.weights):
            if w:
                cost[cols[("C", n + 1)]] = float(w)
    res = _linprog(
        cost,
        A_ub=_sparse((ub[0], (ub[1], ub[2])), shape=(len(ub[3]), nv)),
        b_ub=ub[3],
        A_eq=_sparse((eq[0], (eq[1], eq[2])), shape=(len(eq[3]), nv)),
        b_eq=eq[3],
        method="highs")
    if not res.success:
        return None
    return {vk: res.x[c] for vk, c in cols.items()}


def _float_discovery(p, l, plan, gcol, tvar, nvars, cuts, add_cut):
    """Run the cut loop in floating point to collect a near-final cut set.

    Only the master solves and the trial realizations are floating point;
    every cut appended through add_cut carries exact coefficients derived
    from the instance data. Returns the last master point for the exact
    certification step, or None when the float solver got nowhere.
    """
    m, nl, q = p.m, l.n_loads, plan.q
    a_eq = []
    for n in range(nl):
        row = [0.0] * nvars
        for i in range(m):
            for j in range(q[n]):
                row[gcol[(i, n, j)]] = 1.0
        a_eq.append(row)
    b_eq = [1.0] * nl
    cost = [0.0] * nvars
    cost[tvar] = 1.0

    xhat = None
    a_ub, b_ub = [], []
    for _ in range(80):
        for _, const, gco in cuts[len(a_ub):]:
            row = [0.0] * nvars
            row[tvar] = -1.0
            for gk, v in gco.items():
                row[gcol[gk]] = float(v)
            a_ub.append(row)
            b_ub.append(-float(const))
        res = _linprog(cost, A_ub=a_ub or None, b_ub=b_ub or None,
                       A_eq=a_eq, b_eq=b_eq, method="highs")
        if not res.success:
            return xhat
        xhat = res.x
        gamma = [[[xhat[gcol[(i, n, j)]] for j in range(q[n])]
                  for n in range(nl)] for i in range(m)]
        realized, added = _observe(p, l, plan, gamma, add_cut)
        if realized - res.fun <= 1e-9 * (1.0 + abs(realized)) or not added:
            return xhat
    return xhat


def _certify(p, l, plan, obj, gcol, cuts, xhat):
    """Turn a float master point into an exact certified optimum, or None.

    The float point only suggests which fractions are positive and which
    cuts are tight; everything checked afterwards is exact. Two small exact
    solves over that support finish the job: a reduced master restricted to
    the positive fractions and tight cuts yields a primal candidate, and the
    corresponding reduced dual yields multipliers over the tight cuts. When
    the multipliers price every discarded fraction correctly and their value
    equals the candidate's realized makespan, that equality sandwiches the
    true optimum (dual value <= LP optimum <= realized makespan), so the
    answer is exact regardless of float error. Degenerate optima with extra
    tight cuts are fine: the reduced problems stay feasible and the simplex
    picks a vertex. Any mismatch returns None and the exact loop takes over.
    """
    nl = l.n_loads
    tvar = len(gcol)
    that = xhat[tvar]
    scale = 1.0 + abs(that)
    pos = sorted(gk for gk in gcol if xhat[gcol[gk]] > 1e-7)
    posidx = {gk: c for c, gk in enumerate(pos)}
    slack = []
    for _, const, gco in cuts:
        val = float(const) + sum(float(v) * xhat[gcol[gk]] for gk, v in gco.items())
        slack.append(that - val)
    # widen the tightness window until the family could plausibly span a
    # dual vertex; a near-degenerate float point leaves the cuts that matter
    # sitting a few solver-tolerances off zero
    for tol in (1e-6, 1e-5, 1e-4):
        active = [idx for idx, s in enumerate(slack) if s <= tol * scale]
        if len(active) >= 2 * nl + 2:
            break
    if not active:
        return None

    # a float dual over the tight cuts picks out the handful that carry
    # weight, keeping the exact solves small no matter how many paths were
    # filed; when the picked support falls short, retry with everything
    trimmed = None
    if len(active) > 24:
        np_, na = len(pos), len(active)
        dd, dr, dc = [], [], []
        for r, gk in enumerate(pos):
            for ai, idx in enumerate(active):
                v = cuts[idx][2].get(gk)
                if v:
                    dd.append(-float(v))
                    dr.append(r)
                    dc.append(ai)
            dd.append(1.0)
            dr.append(r)
            dc.append(na + gk[1])
        fres = _linprog(
            [-float(cuts[idx][1]) for idx in active] + [-1.0] * nl,
            A_ub=_sparse((dd, (dr, dc)), shape=(np_, na + nl)),
            b_ub=[0.0] * np_,
            A_eq=_sparse(([1.0] * na, ([0] * na, range(na))), shape=(1, na + nl)),
            b_eq=[1.0],
            bounds=[(0, None)] * na + [(None, None)] * nl,
            method="highs")
        if fres.success:
            trimmed = [idx for ai, idx in enumerate(active)
                       if fres.x[ai] > 1e-9]
    if trimmed and len(trimmed) < 0.7 * len(active):
        sol = _support_certificate(p, l, plan, obj, gcol, cuts, pos, posidx,
                                   trimmed)
        if sol is not None:
            return sol
    return _support_certificate(p, l, plan, obj, gcol, cuts, pos, posidx,
                                active)


def _support_certificate(p, l, plan, obj, gcol, cuts, pos, posidx, active):
    """Exact certificate attempt over one guessed support; None on mismatch.

    Dual first: exact multipliers over the guessed path family give a lower
    bound. Then a primal candidate is pinned by complementary slackness, as
    a feasibility solve on the face where every weighted path is tight at
    the bound; minimizing the makespan over the family instead would wander
    off to wherever it underestimates. The face can still have spare
    dimensions, so vertices that open some other critical path past the
    bound get cut off with the very paths they expose. Certification is the
    final exact simulate: realized == bound sandwiches the optimum.
    """
    m, nl, q = p.m, l.n_loads, plan.q
    np_, na = len(pos), len(active)
    last = nl - 1

    # reduced dual: lambda per path, mu per load split into +/- parts
    mup, mum = na, na + nl
    drows = [({ai: ONE for ai in range(na)}, "=", ONE)]

    def price_row(gk):
        coeffs = {mup + gk[1]: -ONE, mum + gk[1]: ONE}
        for ai, idx in enumerate(active):
            v = cuts[idx][2].get(gk)
            if v:
                coeffs[ai] = v
        return (coeffs, ">=", ZERO)

    priced = set(pos)
    for gk in pos:  # zero reduced cost on every positive fraction
        drows.append(price_row(gk))
    dcost = {ai: -cuts[idx][1] for ai, idx in enumerate(active)}
    for n in range(nl):
        dcost[mup + n] = -ONE
        dcost[mum + n] = ONE
    # zero fractions must not price favorably either; rather than carrying
    # one row per fraction from the start, add the violated ones lazily
    for _ in range(8):
        dres = solve_simplex(na + 2 * nl, drows, dcost)
        if dres.status != "optimal":
            return None
        lam = dres.x[:na]
        mu = [dres.x[mup + n] - dres.x[mum + n] for n in range(nl)]
        violated = []
        for gk in gcol:
            if gk in priced:
                continue
            red = sum((lam[ai] * cuts[idx][2].get(gk, ZERO)
                       for ai, idx in enumerate(active)), ZERO)
            if red < mu[gk[1]]:
                violated.append(gk)
        if not violated:
            break
        for gk in violated:
            priced.add(gk)
            drows.append(price_row(gk))
    else:
        return None
    bound = -dres.objective

    rows = []
    for n in range(nl):
        rows.append(({posidx[gk]: ONE for gk in pos if gk[1] == n}, "=", ONE))
    for ai, idx in enumerate(active):
        if not lam[ai]:
            continue
        _, const, gco = cuts[idx]
        coeffs = {}
        for gk, v in gco.items():
            if gk in posidx:
                coeffs[posidx[gk]] = v
        rows.append((coeffs, "=", bound - const))

    seen_rows = set()
    for _ in range(12):
        pres = solve_simplex(np_, rows, {})
        if pres.status != "optimal":
            return None
        gamma = [[[pres.x[posidx[(i, n, j)]] if (i, n, j) in posidx else ZERO
                   for j in range(q[n])] for n in range(nl)] for i in range(m)]
        comm = communication_durations(p, l, plan, gamma)
        comp = computation_durations(p, l, plan, gamma)
        S, E, Cs, Ce, pr = earliest_start_times(m, comm, comp, p.tau,
                                                l.release, trace=True)
        realized = max(Ce[i][last][q[last] - 1] for i in range(m))
        if bound == realized:
            values = _solution_values(p, l, plan, obj, gamma, S, E, Cs, Ce)
            return LpSolution("optimal", values, realized)
        if realized < bound:
            return None
        fresh = False
        for i in range(m):
            const, gco = _critical_path(pr, ("comp", i, last, q[last] - 1),
                                        p, l)
            coeffs = {}
            for gk, v in gco.items():
                if gk in posidx:
                    coeffs[posidx[gk]] = -v
            key = (const, tuple(sorted(coeffs.items())))
            if key in seen_rows:
                continue
            seen_rows.add(key)
            rows.append((coeffs, ">=", const - bound))
            fresh = True
        if not fresh:
            return None
    return None


def _solve_standard(model, cap):
    meta = model.meta
    p, l, plan = meta.platform, meta.loads, meta.plan
    obj = model.objective
    m, nl, q = p.m, l.n_loads, plan.q
    if obj.kind == "affine" and any(w < 0 for w in obj.weights):
        return LpSolution("unbounded", {}, None)

    gcol = {}
    for i in range(m):
        for n in range(nl):
            for j in range(q[n]):
                gcol[(i, n, j)] = len(gcol)
    ng = len(gcol)
    targets = [None] if obj.kind == "makespan" else list(range(nl))
    tcol = {t: ng + k for k, t in enumerate(targets)}
    nvars = ng + len(targets)

    rows = []
    for n in range(nl):
        rows.append((
            {gcol[(i, n, j)]: ONE for i in range(m) for j in range(q[n])},
            "=", ONE))

    cuts = []  # (target, constant, {gamma key: coefficient}), all exact
    seen = set()

    def add_cut(target, const, gcoeffs):
        key = (target, const, tuple(sorted(gcoeffs.items())))
        if key in seen:
            return False
        seen.add(key)
        coeffs = {tcol[target]: ONE}
        for gk, v in gcoeffs.items():
            coeffs[gcol[gk]] = -v
        rows.append((coeffs, ">=", const))
        cuts.append((target, const, gcoeffs))
        return True

    # seed with the per-processor total-work paths, one per target
    for i in range(m):
        chain = {}
        for n in range(nl):
            for j in range(q[n]):
                chain[(i, n, j)] = p.compute_rate(i, n) * l.v_comp[n]
            if obj.kind == "affine":
                add_cut(n, p.tau[i], dict(chain))
        if obj.kind == "makespan":
            add_cut(None, p.tau[i], chain)

    if obj.kind == "makespan":
        cost = {tcol[None]: ONE}
    else:
        cost = {tcol[n]: w for n, w in enumerate(obj.weights) if w}

    if obj.kind == "makespan" and _linprog is not None:
        # one float solve of the full system pins down the likely support
        # and certifies directly most of the time; the float cut loop is
        # the backstop for the degenerate leftovers
        full = _float_full_solve(model)
        if full is not None:
            gamma = [[[full[("gamma", i + 1, n + 1, j + 1)]
                       for j in range(q[n])] for n in range(nl)]
                     for i in range(m)]
            realized, extras = _tight_paths(p, l, plan, gamma)
            xhat = [0.0] * nvars
            for gk, c in gcol.items():
                xhat[c] = gamma[gk[0]][gk[1]][gk[2]]
            xhat[tcol[None]] = realized
            sol = _certify(p, l, plan, obj, gcol, cuts + extras, xhat)
            if sol is not None:
                return sol
            _observe(p, l, plan, gamma, add_cut)  # keep just the primaries
        xhat = _float_discovery(p, l, plan, gcol, tcol[None], nvars, cuts, add_cut)
        if xhat is not None:
            sol = _certify(p, l, plan, obj, gcol, cuts, xhat)
            if sol is not None:
                return sol
            # keep only the near-tight cuts for the exact loop below; the
            # rest are far from binding and would only bloat the master,
            # and the loop re-derives any it turns out to need
            that = xhat[tcol[None]]
            scale = 1.0 + abs(that)
            kept = []
            for tc in cuts:
                _, const, gco = tc
                val = float(const) + sum(float(v) * xhat[gcol[gk]]
                                         for gk, v in gco.items())
                if that - val <= 1e-3 * scale:
                    kept.append(tc)
            if len(kept) < len(cuts):
                cuts[:] = kept
                seen.clear()
                seen.update((t, c, tuple(sorted(g.items())))
                            for t, c, g in kept)
                del rows[nl:]
                for t, c, g in kept:
                    coeffs = {tcol[t]: ONE}
                    for gk, v in g.items():
                        coeffs[gcol[gk]] = -v
                    rows.append((coeffs, ">=", c))

    last = nl - 1
    for _ in range(CUT_ROUNDS):
        res = solve_simplex(nvars, rows, cost, iter_cap=cap)
        if res.status != "optimal":  # master is feasible and bounded
            return _solve_dense(model, cap)
        gamma = [[[res.x[gcol[(i, n, j)]] for j in range(q[n])]
                  for n in range(nl)] for i in range(m)]
        comm = communication_durations(p, l, plan, gamma)
        comp = computation_durations(p, l, plan, gamma)
        S, E, Cs, Ce, pred = earliest_start_times(
            m, comm, comp, p.tau, l.release, trace=True)

        if obj.kind == "makespan":
            realized = max(Ce[i][last][q[last] - 1] for i in range(m))
        else:
            realized = sum(
                (obj.weights[n] * max(Ce[i][n][q[n] - 1] for i in range(m))
                 for n in range(nl)), ZERO)
        if res.objective == realized:
            values = _solution_values(p, l, plan, obj, gamma, S, E, Cs, Ce)
            total = realized + (obj.constant if obj.kind == "affine" else ZERO)
            return LpSolution("optimal", values, total)

        progressed = False
        if obj.kind == "makespan":
            for i in range(m):
                if Ce[i][last][q[last] - 1] > res.objective:
                    const, gco = _critical_path(
                        pred, ("comp", i, last, q[last] - 1), p, l)
                    progressed = add_cut(None, const, gco) or progressed
        else:
            for n in range(nl):
                if not obj.weights[n]:
                    continue
                for i in range(m):
                    if Ce[i][n][q[n] - 1] > res.x[tcol[n]]:
                        const, gco = _critical_path(
                            pred, ("comp", i, n, q[n] - 1), p, l)
                        progressed = add_cut(n, const, gco) or progressed
        if not progressed:
            raise AssertionError("cut generation stalled below the optimum")
    raise IterationLimitError(f"cut generation exceeded {CUT_ROUNDS} rounds")


def _solution_values(p, l, plan, obj, gamma, S, E, Cs, Ce):
    m, nl, q = p.m, l.n_loads, plan.q
    values = {}
    for i in range(m - 1):
        for n in range(nl):
            for j in range(q[n]):
                values[("S", i + 1, n + 1, j + 1)] = S[i][n][j]
                values[("E", i + 1, n + 1, j + 1)] = E[i][n][j]
    for i in range(m):
        for n in range(nl):
            for j in range(q[n]):
                values[("Cs", i + 1, n + 1, j + 1)] = Cs[i][n][j]
                values[("Ce", i + 1, n + 1, j + 1)] = Ce[i][n][j]
                values[("gamma", i + 1, n + 1, j + 1)] = gamma[i][n][j]
    values[("makespan",)] = max(Ce[i][nl - 1][q[nl - 1] - 1] for i in range(m))
    if obj.kind == "affine":
        for n in range(nl):
            values[("C", n + 1)] = max(Ce[i][n][q[n] - 1] for i in range(m))
    return values


def solution_schedule(platform, loads, plan, solution: LpSolution) -> Schedule:
    """Pack an optimal LpSolution back into a Schedule."""
    if solution.status != "optimal":
        raise StructuralError(f"no schedule to extract: status {solution.status}")
    v = solution.values
    m, nl, q = platform.m, loads.n_loads, plan.q

    def grid(key, procs):
        return [[[v[(key, i + 1, n + 1, j + 1)] for j in range(q[n])]
                 for n in range(nl)] for i in range(procs)]

    gamma = grid("gamma", m)
    Ce = grid("Ce", m)
    mk = max(Ce[i][nl - 1][q[nl - 1] - 1] for i in range(m))
    return Schedule(gamma=gamma, comm_start=grid("S", m - 1),
                    comm_end=grid("E", m - 1), comp_start=grid("Cs", m),
                    comp_end=Ce, makespan=mk)


def optimal_schedule(platform, loads, plan, objective=None) -> Schedule:
    """Build, solve and realize: the exact optimal Schedule for the plan.

    The result always passes validate_schedule with zero violations.
    """
    model = build_lp(platform, loads, plan, objective)
    return solution_schedule(platform, loads, plan, solve_lp(model))
