"""Exact rational coercion and rendering helpers.

Everything numeric in this package is a `fractions.Fraction`. These helpers
exist so the boundary (JSON files, CLI flags, reports) stays consistent:
rationals travel as "p/q" strings, decimal renderings are always 12
significant digits rounded half-even.
"""
from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction

from .errors import StructuralError


def as_frac(value) -> Fraction:
    """Coerce a number-like value to Fraction.

    Accepts Fraction, int, "p/q" strings, decimal strings ("0.75"), and
    floats. Floats convert to their exact binary value; decimal-intended
    inputs should arrive as strings (the JSON loader does this).
    """
    if isinstance(value, bool):
        raise StructuralError(f"not a rational value: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise StructuralError(f"unparseable rational {value!r}") from exc
    raise StructuralError(f"not a rational value: {value!r}")


def frac_tuple(values) -> tuple[Fraction, ...]:
    return tuple(as_frac(v) for v in values)


def frac_str(x: Fraction) -> str:
    """Render as "p/q", or plain "p" for integers."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def decimal_str(x, digits: int = 12) -> str:
    """Decimal rendering at `digits` significant digits, round half to even."""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_HALF_EVEN
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return str(d)
