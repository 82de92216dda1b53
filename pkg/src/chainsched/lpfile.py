"""Deterministic text renderings of an LpModel: CPLEX-style LP and fixed MPS.

Both formats want plain decimal numbers, so every row (objective included)
is first multiplied by the least common multiple of its coefficients'
denominators; a positive row scale changes neither the feasible set nor the
argmin. The rendered files then carry exact integers everywhere. An
objective scale other than one changes the reported optimum, so it is
announced in a leading comment (``\\ objective scaled by ...`` resp.
``* objective scaled by ...``). A constant objective offset has no place in
LP text and is announced the same way; MPS instead stores it the standard
way, negated, as the RHS entry of the cost row.

LP text uses the variables' native names: S_i_n_j / E_i_n_j for transfer
start and end on link i, Cs_i_n_j / Ce_i_n_j for computation start and end
on processor i, gamma_i_n_j for fractions (load n, installment j, all
one-based), makespan, and C_n for per-load completions. Every variable is
declared once in the Bounds section with its natural lower bound. Row names
are f<family>_<index...>.

Fixed MPS is the classic 8-character-field layout (fields at columns 2, 5,
15, 25, 40, 50; names at most 8 characters; values at most 12), which the
native names do not fit, so they compress to S/E/C/D/G + i_n_j
(Cs -> C, Ce -> D, gamma -> G), T for the makespan and L<n> for load
completions; rows to F<family>R<seq>. Should even a compressed name
overflow 8 characters, all columns fall back to X<seq>. Integer values
wider than 12 characters render in scientific notation, where exactness
ends. Zero RHS entries are omitted, as is a BOUNDS section: every
variable's natural domain is the MPS default x >= 0.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .errors import StructuralError
from .lp import LpModel

ZERO = Fraction(0)

_MPS_PREFIX = {"S": "S", "E": "E", "Cs": "C", "Ce": "D", "gamma": "G"}


def _lp_var(key) -> str:
    if key == ("makespan",):
        return "makespan"
    return key[0] + "_" + "_".join(str(k) for k in key[1:])


def _mps_var(key) -> str:
    if key == ("makespan",):
        return "T"
    if key[0] == "C":
        return f"L{key[1]}"
    return _MPS_PREFIX[key[0]] + "_".join(str(k) for k in key[1:])


def _objective_terms(model: LpModel):
    """Objective as (varkey, Fraction) pairs plus the constant offset."""
    obj = model.objective
    if obj.kind == "makespan":
        return [(("makespan",), Fraction(1))], ZERO
    loads = [key[1] for key in model.variables if key[0] == "C"]
    if len(obj.weights) != len(loads):
        raise StructuralError("objective weights do not match the C variables")
    return [(("C", n), w) for n, w in zip(loads, obj.weights)], obj.constant


def _scaled(terms, rhs):
    scale = rhs.denominator
    for _, v in terms:
        scale = math.lcm(scale, v.denominator)
    return [(k, int(v * scale)) for k, v in terms], int(rhs * scale), scale


def _lp_sum(terms, names) -> str:
    parts = []
    for key, v in terms:
        if v == 0:
            continue
        mag = abs(v)
        term = names[key] if mag == 1 else f"{mag} {names[key]}"
        if not parts:
            parts.append(term if v > 0 else f"- {term}")
        else:
            parts.append(f"+ {term}" if v > 0 else f"- {term}")
    return " ".join(parts) if parts else "0 " + names[next(iter(names))]


def render_lp(model: LpModel) -> str:
    """CPLEX-style LP text for the model, rows scaled to integers."""
    names = {key: _lp_var(key) for key in model.variables}
    obj_terms, constant = _objective_terms(model)
    obj_scaled, _, obj_scale = _scaled(obj_terms, ZERO)

    lines = ["\\ chain schedule model, rows scaled to integer coefficients"]
    if obj_scale != 1:
        lines.append(f"\\ objective scaled by {obj_scale}")
    if constant != ZERO:
        lines.append(f"\\ objective constant {constant} not encoded below")
    lines.append("Minimize")
    lines.append(" obj: " + _lp_sum(obj_scaled, names))
    lines.append("Subject To")
    seen = set()
    for con in model.constraints:
        name = f"f{con.family}_" + "_".join(str(k) for k in con.index)
        while name in seen:
            name += "x"
        seen.add(name)
        terms, rhs, _ = _scaled(con.coeffs, con.rhs)
        rel = ">=" if con.rel == ">=" else "="
        lines.append(f" {name}: {_lp_sum(terms, names)} {rel} {rhs}")
    lines.append("Bounds")
    for key in model.variables:
        lines.append(f" 0 <= {names[key]}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def _fit_value(v: int) -> str:
    s = str(v)
    if len(s) <= 12:
        return s
    return f"{float(v):.5e}"


def _mps_line(f1, f2, f3="", f4="", f5="", f6="") -> str:
    # classic fixed fields: 2-3, 5-12, 15-22, 25-36, 40-47, 50-61
    line = f" {f1:<2} {f2:<8}"
    if f3 or f4:
        line = f"{line}  {f3:<8}  {f4:<12}"
    if f5 or f6:
        line = f"{line}   {f5:<8}  {f6:<12}"
    return line.rstrip()


def render_mps(model: LpModel) -> str:
    """Fixed-column MPS for the model, same row scaling as render_lp."""
    names = {key: _mps_var(key) for key in model.variables}
    if any(len(n) > 8 for n in names.values()):
        names = {key: f"X{k}" for k, key in enumerate(model.variables, 1)}

    obj_terms, constant = _objective_terms(model)
    obj_scaled, neg_constant, obj_scale = _scaled(obj_terms, -constant)

    rows = []  # (rowname, type)
    entries = {key: [] for key in model.variables}  # var -> [(row, int)]
    for k, v in obj_scaled:
        entries[k].append(("COST", v))
    rhs_entries = []
    if neg_constant != 0:
        rhs_entries.append(("COST", neg_constant))
    for seq, con in enumerate(model.constraints, 1):
        rname = f"F{con.family}R{seq}"
        if len(rname) > 8:
            rname = f"R{seq}"
        rows.append((rname, "G" if con.rel == ">=" else "E"))
        terms, rhs, _ = _scaled(con.coeffs, con.rhs)
        for k, v in terms:
            if v != 0:
                entries[k].append((rname, v))
        if rhs != 0:
            rhs_entries.append((rname, rhs))

    lines = [f"{'NAME':<14}CHAINSCHED"]
    if obj_scale != 1:
        lines.append(f"* objective scaled by {obj_scale}")
    lines.append("ROWS")
    lines.append(_mps_line("N", "COST"))
    for rname, rtype in rows:
        lines.append(_mps_line(rtype, rname))
    lines.append("COLUMNS")
    for key in model.variables:
        pairs = entries[key]
        for a in range(0, len(pairs), 2):
            chunk = pairs[a:a + 2]
            flat = []
            for rname, v in chunk:
                flat.extend((rname, _fit_value(v)))
            lines.append(_mps_line("", names[key], *flat))
    lines.append("RHS")
    for a in range(0, len(rhs_entries), 2):
        chunk = rhs_entries[a:a + 2]
        flat = []
        for rname, v in chunk:
            flat.extend((rname, _fit_value(v)))
        lines.append(_mps_line("", "RHS", *flat))
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"


def export_lp(model: LpModel, fmt: str) -> str:
    """Render the model as "lp-text" or "mps"."""
    if fmt == "lp-text":
        return render_lp(model)
    if fmt == "mps":
        return render_mps(model)
    raise StructuralError(f"unsupported export format {fmt!r}")
