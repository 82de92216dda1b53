"""Scenario and schedule files: JSON in, JSON out, rationals as "p/q".

A scenario holds a platform, its loads, and an installment plan:

    {"platform": {"m": 2, "w": ["1/2", "1/2"], "z": [1], "tau": [0, 0],
                  "w_unrelated": [["1/2", "2"], ["1", "1/3"]]},
     "loads": {"v_comm": [1, 1], "v_comp": [1, 1], "release": [0, "1/2"]},
     "plan": {"q": [1, 1]}}

"m", "tau", "w_unrelated" and "release" are optional. Numbers may be JSON
integers or "p/q" / "0.75" strings everywhere a rational is expected; in
rational mode a fractional JSON number like 0.3 is rejected rather than
silently read as the nearest double, in float mode it is accepted at its
exact binary value. Schedule files carry gamma, the four time arrays and
the makespan under the same encoding, always written as exact strings,
plus a 12-significant-digit decimal rendering of the makespan for human
eyes. Unknown keys are errors: a typoed optional key should fail loudly,
not silently drop a constraint.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import StructuralError
from .model import InstallmentPlan, LoadSet, Platform, Schedule
from .rationals import as_frac, decimal_str, frac_str

MODES = ("rational", "float")


def parse_rational(value, mode: str = "rational") -> Fraction:
    """as_frac with the mode's stance on fractional JSON numbers."""
    if isinstance(value, float) and mode == "rational" and not value.is_integer():
        raise StructuralError(
            f"{value!r} is a float; rational mode wants an exact \"p/q\" "
            "or decimal string (or use float mode)")
    return as_frac(value)


def _check_keys(data: dict, allowed, where: str):
    if not isinstance(data, dict):
        raise StructuralError(f"{where} must be a JSON object")
    unknown = set(data) - set(allowed)
    if unknown:
        raise StructuralError(f"unknown {where} keys: {sorted(unknown)}")


def _rat_list(values, mode, where: str):
    if not isinstance(values, list):
        raise StructuralError(f"{where} must be a list")
    return tuple(parse_rational(v, mode) for v in values)


def scenario_from_json(data, mode: str = "rational"):
    """Parse a scenario object into (Platform, LoadSet, InstallmentPlan)."""
    if mode not in MODES:
        raise StructuralError(f"unknown mode {mode!r}")
    _check_keys(data, ("platform", "loads", "plan"), "scenario")
    for part in ("platform", "loads", "plan"):
        if part not in data:
            raise StructuralError(f"scenario is missing {part!r}")

    pdata = data["platform"]
    _check_keys(pdata, ("m", "w", "z", "tau", "w_unrelated"), "platform")
    if "w" not in pdata or "z" not in pdata:
        raise StructuralError("platform needs w and z")
    w = _rat_list(pdata["w"], mode, "w")
    kwargs = {}
    if "tau" in pdata:
        kwargs["tau"] = _rat_list(pdata["tau"], mode, "tau")
    if "w_unrelated" in pdata:
        rows = pdata["w_unrelated"]
        if not isinstance(rows, list):
            raise StructuralError("w_unrelated must be a list of rows")
        kwargs["w_unrelated"] = tuple(
            _rat_list(row, mode, "w_unrelated row") for row in rows)
    platform = Platform(w=w, z=_rat_list(pdata["z"], mode, "z"), **kwargs)
    if "m" in pdata and pdata["m"] != platform.m:
        raise StructuralError(
            f"platform claims m={pdata['m']} but lists {platform.m} entries in w")

    ldata = data["loads"]
    _check_keys(ldata, ("v_comm", "v_comp", "release"), "loads")
    if "v_comm" not in ldata or "v_comp" not in ldata:
        raise StructuralError("loads need v_comm and v_comp")
    release = None
    if "release" in ldata:
        release = _rat_list(ldata["release"], mode, "release")
    loads = LoadSet(v_comm=_rat_list(ldata["v_comm"], mode, "v_comm"),
                    v_comp=_rat_list(ldata["v_comp"], mode, "v_comp"),
                    release=release)

    _check_keys(data["plan"], ("q",), "plan")
    if "q" not in data["plan"]:
        raise StructuralError("plan needs q")
    q = data["plan"]["q"]
    if not isinstance(q, list) or not all(isinstance(x, int) for x in q):
        raise StructuralError("plan q must be a list of integers")
    return platform, loads, InstallmentPlan(tuple(q))


def scenario_to_json(platform: Platform, loads: LoadSet, plan: InstallmentPlan) -> dict:
    pdata = {"m": platform.m,
             "w": [frac_str(x) for x in platform.w],
             "z": [frac_str(x) for x in platform.z],
             "tau": [frac_str(x) for x in platform.tau]}
    if platform.w_unrelated is not None:
        pdata["w_unrelated"] = [[frac_str(x) for x in row]
                                for row in platform.w_unrelated]
    ldata = {"v_comm": [frac_str(x) for x in loads.v_comm],
             "v_comp": [frac_str(x) for x in loads.v_comp]}
    if loads.release is not None:
        ldata["release"] = [frac_str(x) for x in loads.release]
    return {"platform": pdata, "loads": ldata, "plan": {"q": list(plan.q)}}


_GRIDS = ("gamma", "comm_start", "comm_end", "comp_start", "comp_end")


def _grid_to_json(grid):
    return [[[frac_str(x) for x in js] for js in mid] for mid in grid]


def schedule_to_json(schedule: Schedule) -> dict:
    data = {name: _grid_to_json(getattr(schedule, name)) for name in _GRIDS}
    data["makespan"] = frac_str(schedule.makespan)
    data["makespan_decimal"] = decimal_str(schedule.makespan)
    return data


def schedule_from_json(data, mode: str = "rational") -> Schedule:
    _check_keys(data, _GRIDS + ("makespan", "makespan_decimal"), "schedule")
    for name in _GRIDS + ("makespan",):
        if name not in data:
            raise StructuralError(f"schedule is missing {name!r}")
    grids = {}
    for name in _GRIDS:
        grid = data[name]
        if not isinstance(grid, list) or not all(
                isinstance(mid, list) and all(isinstance(js, list) for js in mid)
                for mid in grid):
            raise StructuralError(f"{name} must be a threefold-nested list")
        grids[name] = tuple(
            tuple(tuple(parse_rational(x, mode) for x in js) for js in mid)
            for mid in grid)
    return Schedule(makespan=parse_rational(data["makespan"], mode), **grids)
