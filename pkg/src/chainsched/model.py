"""Platform and schedule model for divisible loads on a processor chain.

The setting: m processors P_1..P_m connected in a line. P_1 initially holds
every load and can pass data down the chain one hop at a time (store and
forward). Each processor owns a single communication port, so all of its
sends and receives serialize; computation overlaps freely with communication.
A load n is described by a communication volume V_comm(n) and a computation
volume V_comp(n), and is dealt out in Q_n installments. The fraction of
installment j of load n computed by P_i is gamma_i^j(n).

Transmitting volume v over the link out of P_i costs z_i * v time units;
computing volume v on P_i costs w_i * v (or w_i^n * v when per-load machine
speeds are given). Processor P_i becomes available at time tau_i.

Times are exact rationals end to end. A `Schedule` stores the start/end of
every communication and computation plus the fractions and the makespan;
`validate_schedule` re-checks all thirteen constraint families that define
feasibility, and `simulate` realizes the earliest-start schedule for a given
fraction vector.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import StructuralError
from .rationals import as_frac, frac_tuple

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------- instance types ----------


@dataclass(frozen=True)
class Platform:
    """A heterogeneous chain: unit compute times w, unit link times z,
    availability dates tau, and optional per-load compute times w_unrelated
    (row i gives P_{i+1}'s unit time for each load, overriding w)."""

    w: tuple[Fraction, ...]
    z: tuple[Fraction, ...]
    tau: tuple[Fraction, ...] = ()
    w_unrelated: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        w = frac_tuple(self.w)
        z = frac_tuple(self.z)
        tau = frac_tuple(self.tau) if self.tau else tuple(ZERO for _ in w)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "tau", tau)
        if self.w_unrelated is not None:
            wu = tuple(frac_tuple(row) for row in self.w_unrelated)
            object.__setattr__(self, "w_unrelated", wu)
        m = len(w)
        if m < 1:
            raise StructuralError("platform needs at least one processor")
        if len(z) != m - 1:
            raise StructuralError(f"expected {m - 1} link times, got {len(z)}")
        if len(tau) != m:
            raise StructuralError(f"expected {m} availability dates, got {len(tau)}")
        if any(x <= 0 for x in w) or any(x <= 0 for x in z):
            raise StructuralError("w and z entries must be positive")
        if any(t < 0 for t in tau):
            raise StructuralError("availability dates must be nonnegative")
        if self.w_unrelated is not None:
            if len(self.w_unrelated) != m:
                raise StructuralError("w_unrelated needs one row per processor")
            widths = {len(row) for row in self.w_unrelated}
            if len(widths) > 1:
                raise StructuralError("w_unrelated rows must have equal length")
            if any(x <= 0 for row in self.w_unrelated for x in row):
                raise StructuralError("w_unrelated entries must be positive")

    @property
    def m(self) -> int:
        return len(self.w)

    def compute_rate(self, i: int, n: int) -> Fraction:
        """Unit compute time of processor i for load n (both zero-based)."""
        if self.w_unrelated is not None:
            return self.w_unrelated[i][n]
        return self.w[i]


@dataclass(frozen=True)
class LoadSet:
    """The loads to distribute, in arrival order. `release` entries, when
    present, forbid sending or computing a load before its release date."""

    v_comm: tuple[Fraction, ...]
    v_comp: tuple[Fraction, ...]
    release: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "v_comm", frac_tuple(self.v_comm))
        object.__setattr__(self, "v_comp", frac_tuple(self.v_comp))
        if self.release is not None:
            object.__setattr__(self, "release", frac_tuple(self.release))
        if len(self.v_comm) < 1:
            raise StructuralError("need at least one load")
        if len(self.v_comp) != len(self.v_comm):
            raise StructuralError("v_comm and v_comp lengths differ")
        if any(v < 0 for v in self.v_comm) or any(v < 0 for v in self.v_comp):
            raise StructuralError("load volumes must be nonnegative")
        if self.release is not None:
            if len(self.release) != len(self.v_comm):
                raise StructuralError("release needs one date per load")
            if any(r < 0 for r in self.release):
                raise StructuralError("release dates must be nonnegative")

    @property
    def n_loads(self) -> int:
        return len(self.v_comm)


@dataclass(frozen=True)
class InstallmentPlan:
    """Installment counts Q_n, one per load."""

    q: tuple[int, ...]

    def __post_init__(self):
        q = tuple(int(x) for x in self.q)
        object.__setattr__(self, "q", q)
        if len(q) < 1 or any(x < 1 for x in q):
            raise StructuralError("every load needs at least one installment")

    @classmethod
    def uniform(cls, n_loads: int, q: int) -> "InstallmentPlan":
        return cls(tuple(q for _ in range(n_loads)))


def check_instance(platform: Platform, loads: LoadSet, plan: InstallmentPlan) -> None:
    """Raise StructuralError unless platform, loads and plan agree on sizes."""
    n = loads.n_loads
    if len(plan.q) != n:
        raise StructuralError(f"plan covers {len(plan.q)} loads, instance has {n}")
    if platform.w_unrelated is not None and len(platform.w_unrelated[0]) != n:
        raise StructuralError("w_unrelated column count must equal the number of loads")


# ---------- schedule container ----------


def _grid3(values) -> tuple[tuple[tuple[Fraction, ...], ...], ...]:
    return tuple(tuple(frac_tuple(inner) for inner in mid) for mid in values)


@dataclass(frozen=True)
class Schedule:
    """A fully timed schedule. All arrays are indexed [i][n][j] zero-based:
    gamma/comp_* over processors i < m, comm_* over links i < m-1."""

    gamma: tuple[tuple[tuple[Fraction, ...], ...], ...]
    comm_start: tuple[tuple[tuple[Fraction, ...], ...], ...]
    comm_end: tuple[tuple[tuple[Fraction, ...], ...], ...]
    comp_start: tuple[tuple[tuple[Fraction, ...], ...], ...]
    comp_end: tuple[tuple[tuple[Fraction, ...], ...], ...]
    makespan: Fraction

    def __post_init__(self):
        for name in ("gamma", "comm_start", "comm_end", "comp_start", "comp_end"):
            object.__setattr__(self, name, _grid3(getattr(self, name)))
        object.__setattr__(self, "makespan", as_frac(self.makespan))
        m = len(self.gamma)
        if m < 1:
            raise StructuralError("schedule must cover at least one processor")
        shape = tuple(tuple(len(js) for js in self.gamma[i]) for i in range(m))
        if any(shape[i] != shape[0] for i in range(m)):
            raise StructuralError("gamma rows disagree on load/installment shape")
        for name in ("comp_start", "comp_end"):
            arr = getattr(self, name)
            if tuple(tuple(len(js) for js in arr[i]) for i in range(len(arr))) != shape:
                raise StructuralError(f"{name} shape does not match gamma")
        for name in ("comm_start", "comm_end"):
            arr = getattr(self, name)
            if len(arr) != m - 1:
                raise StructuralError(f"{name} must have one row per link")
            if tuple(tuple(len(js) for js in arr[i]) for i in range(m - 1)) != shape[: m - 1]:
                raise StructuralError(f"{name} shape does not match gamma")

    @property
    def m(self) -> int:
        return len(self.gamma)

    @property
    def n_loads(self) -> int:
        return len(self.gamma[0])

    def plan(self) -> InstallmentPlan:
        return InstallmentPlan(tuple(len(js) for js in self.gamma[0]))


def makespan(schedule: Schedule) -> Fraction:
    """Completion time of the last installment of the last load, recomputed
    from the raw arrays (the stored makespan field is not trusted)."""
    last = schedule.n_loads - 1
    return max(row[last][-1] for row in schedule.comp_end)


# ---------- feasibility ----------


class Violation(NamedTuple):
    """One broken constraint: family id 1..13, one-based (i, n, j) style
    index, and the two sides of the comparison that failed."""

    family: int
    index: tuple[int, ...]
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class ValidationReport:
    feasible: bool
    violations: tuple[Violation, ...]
    recomputed_makespan: Fraction

    def families(self) -> set[int]:
        return {v.family for v in self.violations}


def validate_schedule(
    platform: Platform,
    loads: LoadSet,
    plan: InstallmentPlan,
    schedule: Schedule,
    tol=None,
) -> ValidationReport:
    """Check every constraint family (1)-(13) against the schedule.

    With tol=None comparisons are exact rational; otherwise `tol` is an
    absolute slack applied to every inequality and equality. Dimension
    mismatches raise StructuralError instead of reporting violations.

    Families, with one-based indices (links and processors both start at 1):
      1   S_{i+1,n,j} >= E_{i,n,j}                 i <= m-2
      2   S_{i,n,j+1} >= E_{i+1,n,j}               i <= m-2, plus the last
          link's own serialization S_{m-1,n,j+1} >= E_{m-1,n,j}
      3   S_{i,n+1,1} >= E_{i+1,n,Q_n}             i <= m-2, plus the last
          link's own serialization S_{m-1,n+1,1} >= E_{m-1,n,Q_n}
      4   S_{i,n,j} >= 0, and S_{1,n,1} >= release(n) when releases are given
      5   E_{i,n,j} = S_{i,n,j} + z_i V_comm(n) sum_{k>i} gamma_k^j(n)
      6   Cs_{i,n,j} >= E_{i-1,n,j}                i >= 2
      7   Ce_{i,n,j} = Cs_{i,n,j} + w_i(n) gamma_i^j(n) V_comp(n)
      8   Cs_{i,n+1,1} >= Ce_{i,n,Q_n}
      9   Cs_{i,n,j+1} >= Ce_{i,n,j}
      10  Cs_{i,1,1} >= tau_i, and Cs_{i,n,1} >= release(n) when given
      11  gamma_i^j(n) >= 0
      12  sum_{i,j} gamma_i^j(n) = 1 for every n
      13  makespan >= Ce_{i,N,Q_N}

    The two "last link" rows in families 2 and 3 are the one-port rule for
    the final link; for m >= 3 they are implied by the verbatim rows.
    """
    check_instance(platform, loads, plan)
    m, n_loads, q = platform.m, loads.n_loads, plan.q
    if schedule.m != m:
        raise StructuralError(f"schedule covers {schedule.m} processors, platform has {m}")
    if schedule.n_loads != n_loads:
        raise StructuralError(f"schedule covers {schedule.n_loads} loads, instance has {n_loads}")
    if schedule.plan().q != q:
        raise StructuralError("schedule installment shape does not match the plan")

    tol = ZERO if tol is None else as_frac(tol)
    gamma = schedule.gamma
    S, E = schedule.comm_start, schedule.comm_end
    Cs, Ce = schedule.comp_start, schedule.comp_end
    release = loads.release
    violations: list[Violation] = []

    def ge(family, index, lhs, rhs):
        if lhs < rhs - tol:
            violations.append(Violation(family, index, lhs, rhs))

    def eq(family, index, lhs, rhs):
        if abs(lhs - rhs) > tol:
            violations.append(Violation(family, index, lhs, rhs))

    # (1)
    for i in range(m - 2):
        for n in range(n_loads):
            for j in range(q[n]):
                ge(1, (i + 2, n + 1, j + 1), S[i + 1][n][j], E[i][n][j])
    # (2) verbatim rows, then the last link's own serialization
    for i in range(m - 2):
        for n in range(n_loads):
            for j in range(q[n] - 1):
                ge(2, (i + 1, n + 1, j + 2), S[i][n][j + 1], E[i + 1][n][j])
    if m >= 2:
        for n in range(n_loads):
            for j in range(q[n] - 1):
                ge(2, (m - 1, n + 1, j + 2), S[m - 2][n][j + 1], E[m - 2][n][j])
    # (3) likewise across consecutive loads
    for i in range(m - 2):
        for n in range(n_loads - 1):
            ge(3, (i + 1, n + 2, 1), S[i][n + 1][0], E[i + 1][n][q[n] - 1])
    if m >= 2:
        for n in range(n_loads - 1):
            ge(3, (m - 1, n + 2, 1), S[m - 2][n + 1][0], E[m - 2][n][q[n] - 1])
    # (4)
    for i in range(m - 1):
        for n in range(n_loads):
            for j in range(q[n]):
                ge(4, (i + 1, n + 1, j + 1), S[i][n][j], ZERO)
    if release is not None and m >= 2:
        for n in range(n_loads):
            ge(4, (1, n + 1, 1), S[0][n][0], release[n])
    # (5)
    for i in range(m - 1):
        for n in range(n_loads):
            for j in range(q[n]):
                sent = sum((gamma[k][n][j] for k in range(i + 1, m)), ZERO)
                eq(5, (i + 1, n + 1, j + 1), E[i][n][j],
                   S[i][n][j] + platform.z[i] * loads.v_comm[n] * sent)
    # (6)
    for i in range(1, m):
        for n in range(n_loads):
            for j in range(q[n]):
                ge(6, (i + 1, n + 1, j + 1), Cs[i][n][j], E[i - 1][n][j])
    # (7)
    for i in range(m):
        for n in range(n_loads):
            for j in range(q[n]):
                eq(7, (i + 1, n + 1, j + 1), Ce[i][n][j],
                   Cs[i][n][j] + platform.compute_rate(i, n) * gamma[i][n][j] * loads.v_comp[n])
    # (8)
    for i in range(m):
        for n in range(n_loads - 1):
            ge(8, (i + 1, n + 2, 1), Cs[i][n + 1][0], Ce[i][n][q[n] - 1])
    # (9)
    for i in range(m):
        for n in range(n_loads):
            for j in range(q[n] - 1):
                ge(9, (i + 1, n + 1, j + 2), Cs[i][n][j + 1], Ce[i][n][j])
    # (10)
    for i in range(m):
        ge(10, (i + 1, 1, 1), Cs[i][0][0], platform.tau[i])
    if release is not None:
        for i in range(m):
            for n in range(n_loads):
                ge(10, (i + 1, n + 1, 1), Cs[i][n][0], release[n])
    # (11)
    for i in range(m):
        for n in range(n_loads):
            for j in range(q[n]):
                ge(11, (i + 1, n + 1, j + 1), gamma[i][n][j], ZERO)
    # (12)
    for n in range(n_loads):
        total = sum((gamma[i][n][j] for i in range(m) for j in range(q[n])), ZERO)
        eq(12, (n + 1,), total, ONE)
    # (13)
    last = n_loads - 1
    for i in range(m):
        ge(13, (i + 1,), schedule.makespan, Ce[i][last][q[last] - 1])

    recomputed = max(Ce[i][last][q[last] - 1] for i in range(m))
    return ValidationReport(feasible=not violations, violations=tuple(violations),
                            recomputed_makespan=recomputed)


# ---------- earliest-start realization ----------


def earliest_start_times(m, comm_dur, comp_dur, tau, release, trace=False,
                         tie_tol=None):
    """Earliest-start times for fixed activity durations.

    Communications are issued per installment in (n, j) order, links in chain
    order, each starting as soon as both endpoint ports are free (one port
    per processor, so sends and receives serialize). Computations chain per
    processor from tau_i, waiting for the matching receive on P_2..P_m and
    for release dates. Works for any numeric type with +, max and ordering.

    With trace=True also returns a predecessor map: for every ("comm"|"comp",
    i, n, j) event, the event or constant tag ("tau", i) / ("release", n) /
    None (time zero) whose end time its start equals. With tie_tol set, each
    map value is instead the tuple of every candidate whose bound comes
    within tie_tol * (1 + start) of the start, binding one first: the extras
    expose alternate critical paths through degenerate schedules.
    """
    n_loads = len(comm_dur[0]) if m > 1 else len(comp_dur[0])
    q = [len(js) for js in (comm_dur[0] if m > 1 else comp_dur[0])]
    S = [[[None] * q[n] for n in range(n_loads)] for _ in range(m - 1)]
    E = [[[None] * q[n] for n in range(n_loads)] for _ in range(m - 1)]
    Cs = [[[None] * q[n] for n in range(n_loads)] for _ in range(m)]
    Ce = [[[None] * q[n] for n in range(n_loads)] for _ in range(m)]
    pred: dict = {}

    def near(best_t, cands):
        thr = tie_tol * (1 + abs(best_t))
        out = []
        for t, cp in cands:
            if best_t - t <= thr and cp not in out:
                out.append(cp)
        return tuple(out)

    port_free = [0] * m
    port_last: list = [None] * m
    for n in range(n_loads):
        for j in range(q[n]):
            for i in range(m - 1):
                cands = [(port_free[i], port_last[i]),
                         (port_free[i + 1], port_last[i + 1])]
                if release is not None and i == 0 and j == 0:
                    cands.append((release[n], ("release", n)))
                best_t, best_p = cands[0]
                for t, cp in cands[1:]:
                    if t > best_t:
                        best_t, best_p = t, cp
                S[i][n][j] = best_t
                end = best_t + comm_dur[i][n][j]
                E[i][n][j] = end
                port_free[i] = port_free[i + 1] = end
                port_last[i] = port_last[i + 1] = ("comm", i, n, j)
                if trace:
                    pred[("comm", i, n, j)] = (
                        best_p if tie_tol is None
                        else near(best_t, [(best_t, best_p)] + cands))

    for i in range(m):
        prev_t, prev_p = tau[i], ("tau", i)
        for n in range(n_loads):
            for j in range(q[n]):
                cands = [(prev_t, prev_p)]
                if i >= 1:
                    cands.append((E[i - 1][n][j], ("comm", i - 1, n, j)))
                if release is not None and j == 0:
                    cands.append((release[n], ("release", n)))
                best_t, best_p = cands[0]
                for t, cp in cands[1:]:
                    if t > best_t:
                        best_t, best_p = t, cp
                Cs[i][n][j] = best_t
                end = best_t + comp_dur[i][n][j]
                Ce[i][n][j] = end
                prev_t, prev_p = end, ("comp", i, n, j)
                if trace:
                    pred[("comp", i, n, j)] = (
                        best_p if tie_tol is None
                        else near(best_t, [(best_t, best_p)] + cands))

    if trace:
        return S, E, Cs, Ce, pred
    return S, E, Cs, Ce


def communication_durations(platform, loads, plan, gamma):
    """comm_dur[i][n][j] = z_i V_comm(n) sum_{k>i} gamma_k^j(n), exact."""
    m = platform.m
    out = []
    for i in range(m - 1):
        row = []
        for n in range(loads.n_loads):
            cell = []
            for j in range(plan.q[n]):
                sent = sum((gamma[k][n][j] for k in range(i + 1, m)), ZERO)
                cell.append(platform.z[i] * loads.v_comm[n] * sent)
            row.append(cell)
        out.append(row)
    return out


def computation_durations(platform, loads, plan, gamma):
    """comp_dur[i][n][j] = w_i(n) gamma_i^j(n) V_comp(n), exact."""
    return [
        [
            [platform.compute_rate(i, n) * gamma[i][n][j] * loads.v_comp[n]
             for j in range(plan.q[n])]
            for n in range(loads.n_loads)
        ]
        for i in range(platform.m)
    ]


def simulate(
    platform: Platform,
    loads: LoadSet,
    plan: InstallmentPlan,
    gamma,
    sum_tol=None,
) -> Schedule:
    """Realize the earliest-start schedule for a fraction vector gamma[i][n][j].

    gamma must be nonnegative with per-load sums exactly 1 (StructuralError
    otherwise; pass sum_tol to allow an absolute slack on the sums, the
    fractions are then used as given). Zero-size installments are legal and
    produce zero-duration activities. The result always satisfies every
    constraint family checked by validate_schedule.
    """
    check_instance(platform, loads, plan)
    m, n_loads, q = platform.m, loads.n_loads, plan.q
    gamma = _grid3(gamma)
    if len(gamma) != m:
        raise StructuralError("gamma must have one row per processor")
    for i in range(m):
        if len(gamma[i]) != n_loads or tuple(len(js) for js in gamma[i]) != tuple(q):
            raise StructuralError("gamma shape does not match (m, loads, plan)")
    for i in range(m):
        for n in range(n_loads):
            for j in range(q[n]):
                if gamma[i][n][j] < 0:
                    raise StructuralError(f"gamma[{i}][{n}][{j}] is negative")
    for n in range(n_loads):
        total = sum((gamma[i][n][j] for i in range(m) for j in range(q[n])), ZERO)
        if sum_tol is None:
            if total != 1:
                raise StructuralError(f"fractions of load {n + 1} sum to {total}, expected 1")
        elif abs(total - 1) > as_frac(sum_tol):
            raise StructuralError(f"fractions of load {n + 1} sum to {total}, expected 1")

    comm_dur = communication_durations(platform, loads, plan, gamma)
    comp_dur = computation_durations(platform, loads, plan, gamma)
    S, E, Cs, Ce = earliest_start_times(m, comm_dur, comp_dur, platform.tau, loads.release)
    last = n_loads - 1
    mk = max(Ce[i][last][q[last] - 1] for i in range(m))
    return Schedule(gamma=gamma, comm_start=S, comm_end=E, comp_start=Cs, comp_end=Ce,
                    makespan=mk)
