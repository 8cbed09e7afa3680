"""Exact rational scalars.

All coefficients and parameters are :class:`fractions.Fraction` values.
This module adds the strict text format used by the JSON files and the
CLI (``"p/q"`` or ``"p"``) on top of the standard library type.
"""

from __future__ import annotations

import re
from fractions import Fraction

Rational = Fraction

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_rational(text) -> Fraction:
    """Parse ``[-]digits[/digits]`` into a canonical Fraction.

    Ints and Fractions pass through unchanged. Floats, decimals and
    anything else are rejected so that no rounding can sneak in.

    >>> parse_rational("3/6")
    Fraction(1, 2)
    >>> parse_rational("-2")
    Fraction(-2, 1)
    """
    if isinstance(text, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"cannot read a rational from {type(text).__name__}")
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        raise ValueError(f"malformed rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    """Canonical string form, inverse of :func:`parse_rational`."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def inverse(x: Fraction) -> Fraction:
    if x == 0:
        raise ZeroDivisionError("zero has no inverse")
    return 1 / Fraction(x)


def rational_sqrt(x: Fraction):
    """Exact square root of ``x`` if it is a rational square, else None."""
    from math import isqrt

    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None
