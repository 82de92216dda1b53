"""Command-line front end.

Eight subcommands over scenario files:

    solve       optimal schedule for the scenario's plan
    validate    check a schedule file against a scenario
    simulate    realize the earliest-start schedule of a fraction file
    sweep       makespan versus uniform installment count, as CSV
    example     the two-processor benchmark family, report or CSV
    refine      split one installment in half and re-solve the timing
    export-lp   write the makespan program as LP text or fixed MPS
    gantt       draw a schedule file as ASCII or SVG

Exit status 0 on success, 1 when the request is well-formed but the
answer is "no" (an infeasible schedule, a closed form outside its
regime, an unsplittable installment), 2 for structural, parse and IO
problems. Failures also emit one JSON object on stderr. All output is
deterministic: rerunning a command on the same inputs gives identical
bytes, and every number in a report appears both as an exact rational
and as a 12-significant-digit decimal.

Arithmetic mode only affects input parsing and validation tolerance.
Internally everything is exact; "float" accepts fractional JSON numbers
at their binary value and validates with absolute slack 1e-9 instead of
exact comparison.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from .errors import IterationLimitError, RegimeError, SplitError, StructuralError
from .gantt import render_gantt, render_sweep_svg
from .lp import ObjectiveSpec, build_lp, optimal_schedule
from .lpfile import export_lp
from .model import InstallmentPlan, simulate, validate_schedule
from .rationals import as_frac, decimal_str, frac_str
from .reference import (
    ExampleInstance,
    Infeasible,
    Regime,
    classify_regime,
    global_one_installment,
    mvb_multi_installment,
    mvb_one_installment,
)
from .refine import SplitSpec, installment_sweep, split_installment
from .scenario import (
    parse_rational,
    scenario_from_json,
    schedule_from_json,
    schedule_to_json,
)

FLOAT_TOL = Fraction(1, 10**9)


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as StructuralError (exit 2)."""

    def error(self, message):
        raise StructuralError(message)


def _load_json(path: str):
    return json.loads(Path(path).read_text())


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(data, out: str | None):
    _emit(json.dumps(data, indent=2) + "\n", out)


def _tol(mode: str):
    return FLOAT_TOL if mode == "float" else None


def _both(x: Fraction) -> str:
    return f"{frac_str(x)} ({decimal_str(x)})"


def _parse_q(text: str) -> InstallmentPlan:
    try:
        q = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise StructuralError(f"bad installment list {text!r}, want e.g. 2,2")
    return InstallmentPlan(q)


def _parse_objective(text: str):
    if text == "makespan":
        return None
    if text.startswith("affine:"):
        weights = tuple(as_frac(part) for part in text[len("affine:"):].split(","))
        return ObjectiveSpec(kind="affine", weights=weights)
    raise StructuralError(f"bad objective {text!r}, want makespan or affine:<weights>")


def _read_scenario(args):
    data = _load_json(args.scenario)
    return scenario_from_json(data, mode=args.mode)


# ---------- subcommands ----------


def _cmd_solve(args) -> int:
    platform, loads, plan = _read_scenario(args)
    if args.q is not None:
        plan = _parse_q(args.q)
    schedule = optimal_schedule(platform, loads, plan,
                                objective=_parse_objective(args.objective))
    _emit_json(schedule_to_json(schedule), args.out)
    return 0


def _cmd_validate(args) -> int:
    platform, loads, plan = _read_scenario(args)
    schedule = schedule_from_json(_load_json(args.schedule), mode=args.mode)
    report = validate_schedule(platform, loads, plan, schedule, tol=_tol(args.mode))
    data = {
        "feasible": report.feasible,
        "violations": [
            {"family": v.family, "index": list(v.index),
             "lhs": frac_str(v.lhs), "lhs_decimal": decimal_str(v.lhs),
             "rhs": frac_str(v.rhs), "rhs_decimal": decimal_str(v.rhs)}
            for v in report.violations
        ],
        "makespan": frac_str(report.recomputed_makespan),
        "makespan_decimal": decimal_str(report.recomputed_makespan),
    }
    _emit_json(data, args.out)
    if not report.feasible:
        families = sorted(report.families())
        _error_json("ValidationFailed",
                    f"schedule violates constraint families {families}")
        return 1
    return 0


def _cmd_simulate(args) -> int:
    platform, loads, plan = _read_scenario(args)
    data = _load_json(args.gamma)
    if isinstance(data, dict):
        if "gamma" not in data:
            raise StructuralError("fraction file object has no gamma key")
        data = data["gamma"]
    if not isinstance(data, list):
        raise StructuralError("fraction file must hold a nested list")
    gamma = [[[parse_rational(x, args.mode) for x in js] for js in mid]
             for mid in data]
    schedule = simulate(platform, loads, plan, gamma)
    _emit_json(schedule_to_json(schedule), args.out)
    return 0


def _cmd_sweep(args) -> int:
    platform, loads, _ = _read_scenario(args)
    table = installment_sweep(platform, loads, args.q_max,
                              objective=_parse_objective(args.objective))
    if args.format == "svg":
        _emit(render_sweep_svg(table), args.out)
        return 0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["Q", "makespan_num", "makespan_den", "makespan_float"])
    for q, span in table:
        writer.writerow([q, span.numerator, span.denominator, decimal_str(span)])
    _emit(buf.getvalue(), args.out)
    return 0


def _lp_plan_for(regime: Regime, heur_plan: InstallmentPlan) -> InstallmentPlan:
    if regime is Regime.MULTI:
        return heur_plan
    return InstallmentPlan((1, 1))


def _example_point(lam: Fraction):
    """(regime, global schedule, heuristic result or Infeasible, lp schedule)."""
    x = ExampleInstance(lam)
    regime = classify_regime(lam)
    global_sched = global_one_installment(x)
    if regime is Regime.SINGLE:
        heur = mvb_one_installment(x)
    else:
        heur = mvb_multi_installment(x)
    plan = _lp_plan_for(regime, heur.plan() if not isinstance(heur, Infeasible)
                        else InstallmentPlan((1, 1)))
    lp = optimal_schedule(x.platform, x.loads, plan)
    return regime, global_sched, heur, plan, lp


def _cmd_example_single(lam: Fraction, out: str | None) -> int:
    regime, global_sched, heur, plan, lp = _example_point(lam)
    lp_name = f"LP({plan.q[0]},{plan.q[1]})"
    lines = []
    if isinstance(heur, Infeasible):
        lines.append(f"{regime.value}; coverage bound {frac_str(heur.coverage)}; "
                     f"{lp_name} makespan {frac_str(lp.makespan)}")
        details = [("coverage bound", heur.coverage)]
    elif regime is Regime.MULTI:
        q = plan.q[1]
        lines.append(f"{regime.value}; Q {q}; heuristic makespan "
                     f"{frac_str(heur.makespan)}; {lp_name} makespan "
                     f"{frac_str(lp.makespan)}")
        details = [("heuristic makespan", heur.makespan),
                   ("gap", heur.makespan - lp.makespan)]
    else:
        lines.append(f"{regime.value}; heuristic makespan "
                     f"{frac_str(heur.makespan)}; {lp_name} makespan "
                     f"{frac_str(lp.makespan)}")
        details = [("heuristic makespan", heur.makespan),
                   ("gap", heur.makespan - lp.makespan)]
    lines.append(f"lambda = {_both(lam)}")
    lines.append(f"one-installment optimum = {_both(global_sched.makespan)}")
    for name, value in details:
        lines.append(f"{name} = {_both(value)}")
    lines.append(f"{lp_name} makespan = {_both(lp.makespan)}")
    _emit("\n".join(lines) + "\n", out)
    return 0


def _lambda_grid(start: Fraction, stop: Fraction, step: Fraction):
    if step <= 0:
        raise StructuralError("lambda step must be positive")
    if stop < start:
        raise StructuralError("lambda range is empty")
    grid = []
    lam = start
    while lam <= stop:
        grid.append(lam)
        lam += step
    return grid


def _cmd_example_range(start, stop, step, out: str | None) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["lambda", "regime",
                     "global_makespan", "global_decimal",
                     "heuristic_makespan", "heuristic_decimal",
                     "lp_makespan", "lp_decimal"])
    for lam in _lambda_grid(start, stop, step):
        regime, global_sched, heur, _, lp = _example_point(lam)
        if isinstance(heur, Infeasible):
            hr, hd = "", ""
        else:
            hr, hd = frac_str(heur.makespan), decimal_str(heur.makespan)
        writer.writerow([frac_str(lam), regime.value,
                         frac_str(global_sched.makespan),
                         decimal_str(global_sched.makespan),
                         hr, hd,
                         frac_str(lp.makespan), decimal_str(lp.makespan)])
    _emit(buf.getvalue(), out)
    return 0


def _cmd_example(args) -> int:
    range_given = [args.lambda_start, args.lambda_stop, args.lambda_step]
    if args.lam is not None:
        if any(v is not None for v in range_given):
            raise StructuralError("give either --lambda or a --lambda-start/"
                                  "--lambda-stop/--lambda-step range, not both")
        return _cmd_example_single(parse_rational(args.lam, args.mode), args.out)
    if any(v is None for v in range_given):
        raise StructuralError("example needs --lambda or a full "
                              "--lambda-start/--lambda-stop/--lambda-step range")
    start, stop, step = (parse_rational(v, args.mode) for v in range_given)
    return _cmd_example_range(start, stop, step, args.out)


def _cmd_refine(args) -> int:
    platform, loads, plan = _read_scenario(args)
    schedule = schedule_from_json(_load_json(args.schedule), mode=args.mode)
    spec = SplitSpec(load=args.load, installment=args.installment)
    _, refined = split_installment(platform, loads, plan, schedule, spec)
    _emit_json(schedule_to_json(refined), args.out)
    return 0


def _cmd_export_lp(args) -> int:
    platform, loads, plan = _read_scenario(args)
    model = build_lp(platform, loads, plan,
                     objective=_parse_objective(args.objective))
    fmt = {"lp": "lp-text", "mps": "mps"}[args.format]
    _emit(export_lp(model, fmt), args.out)
    return 0


def _cmd_gantt(args) -> int:
    schedule = schedule_from_json(_load_json(args.schedule), mode=args.mode)
    _emit(render_gantt(schedule, args.format), args.out)
    return 0


# ---------- wiring ----------


def _build_parser() -> _Parser:
    parser = _Parser(prog="chainsched",
                     description="Exact multi-installment schedules for "
                                 "divisible loads on processor chains.")
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p, scenario=True):
        if scenario:
            p.add_argument("--scenario", required=True, help="scenario JSON path")
        p.add_argument("--mode", choices=("rational", "float"), default="rational")
        p.add_argument("--out", help="write the artifact here instead of stdout")

    p = sub.add_parser("solve", help="optimal schedule for the scenario")
    common(p)
    p.add_argument("--q", help="override the plan, e.g. 2,2")
    p.add_argument("--objective", default="makespan")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("validate", help="check a schedule against a scenario")
    common(p)
    p.add_argument("--schedule", required=True, help="schedule JSON path")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("simulate", help="earliest-start schedule of a fraction file")
    common(p)
    p.add_argument("--gamma", required=True,
                   help="JSON file holding gamma[i][n][j] fractions")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("sweep", help="makespan versus installment count")
    common(p)
    p.add_argument("--q-max", type=int, required=True)
    p.add_argument("--objective", default="makespan")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("example", help="two-processor benchmark family")
    common(p, scenario=False)
    p.add_argument("--lambda", dest="lam", help="single point, e.g. 1/2")
    p.add_argument("--lambda-start", help="sweep start (with stop and step)")
    p.add_argument("--lambda-stop")
    p.add_argument("--lambda-step")
    p.set_defaults(fn=_cmd_example)

    p = sub.add_parser("refine", help="halve one installment and re-time")
    common(p)
    p.add_argument("--schedule", required=True, help="schedule JSON path")
    p.add_argument("--load", type=int, required=True, help="one-based load")
    p.add_argument("--installment", type=int, required=True,
                   help="one-based installment")
    p.set_defaults(fn=_cmd_refine)

    p = sub.add_parser("export-lp", help="write the linear program")
    common(p)
    p.add_argument("--format", choices=("lp", "mps"), required=True)
    p.add_argument("--objective", default="makespan")
    p.set_defaults(fn=_cmd_export_lp)

    p = sub.add_parser("gantt", help="draw a schedule file")
    common(p, scenario=False)
    p.add_argument("--schedule", required=True, help="schedule JSON path")
    p.add_argument("--format", choices=("ascii", "svg"), required=True)
    p.set_defaults(fn=_cmd_gantt)

    return parser


def _error_json(kind: str, detail: str):
    sys.stderr.write(json.dumps({"error": kind, "detail": detail}) + "\n")


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return args.fn(args)
    except (RegimeError, SplitError) as exc:
        _error_json(type(exc).__name__, str(exc))
        return 1
    except (StructuralError, IterationLimitError) as exc:
        _error_json(type(exc).__name__, str(exc))
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        _error_json(type(exc).__name__, str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
