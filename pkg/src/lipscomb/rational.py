"""Exact rational helpers.

Coordinates and metric values are carried as :class:`fractions.Fraction`;
this module only adds the few operations the rest of the package needs on
top of it (closed-form geometric tails, exact integer roots, and the
``num/den`` wire format).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

ExactRational = Fraction

RationalLike = Union[Fraction, int, str]


def to_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` into a Fraction. Floats are refused to keep things exact."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError("floats are not accepted where an exact rational is required")
    return Fraction(value)


def geometric_tail(base: int, start: int) -> Fraction:
    """Return ``sum(base**-i for i >= start)`` in closed form."""
    if base < 2:
        raise ValueError("base must be at least 2")
    if start < 1:
        raise ValueError("start must be at least 1")
    return Fraction(1, base ** (start - 1) * (base - 1))


def format_rational(value: Fraction) -> str:
    """Render as ``num/den`` (always with a denominator, e.g. ``0/1``)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``num/den``, an integer or a finite decimal string exactly."""
    if not isinstance(text, str):
        raise TypeError(f"expected a string, got {type(text).__name__}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of a non-negative integer, or None when it is not a perfect power."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2 or k == 1:
        return n
    if k == 2:
        r = math.isqrt(n)
        return r if r * r == n else None
    # integer Newton iteration from an upper bound decreases monotonically
    r = 1 << -(-n.bit_length() // k)
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def rational_root(value: Fraction, k: int) -> Fraction | None:
    """Exact k-th root of a non-negative rational if it is rational, else None."""
    value = Fraction(value)
    num = integer_root(value.numerator, k)
    if num is None:
        return None
    den = integer_root(value.denominator, k)
    if den is None:
        return None
    return Fraction(num, den)


def root_to_float(value: Fraction, k: float) -> float:
    """k-th root of a non-negative rational as a float, accurate to a few ulps.

    Works in logarithms of the numerator and denominator so that tiny or huge
    rationals do not underflow before the root is taken.
    """
    value = Fraction(value)
    if value == 0:
        return 0.0
    approx = float(value)
    if 1e-300 < approx < 1e300:
        return approx ** (1.0 / k)
    log = (_log(value.numerator) - _log(value.denominator)) / k
    return math.exp(log)


def _log(n: int) -> float:
    bits = n.bit_length()
    if bits < 1000:
        return math.log(n)
    shift = bits - 900
    return math.log(n >> shift) + shift * math.log(2)
