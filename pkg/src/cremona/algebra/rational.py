"""Exact rationals.

``Rational`` is gmpy2's ``mpq``: always reduced, positive denominator.
"""

from fractions import Fraction

from gmpy2 import mpq

Rational = mpq

ZERO = mpq(0)
ONE = mpq(1)


def as_rational(value) -> mpq:
    """Coerce ints, Fractions, mpq and strings like ``"3/2"`` to ``mpq``."""
    if isinstance(value, type(ZERO)):
        return value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        value = value.strip()
        if "/" in value:
            num, den = value.split("/")
            return mpq(int(num), int(den))
        return mpq(int(value))
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass an int, str or Fraction")
    if isinstance(value, int):
        return mpq(value)
    num = getattr(value, "numerator", None)
    if num is None and hasattr(value, "q"):
        # FLINT rationals (sympy's ground type when python-flint is present)
        return mpq(int(value.p), int(value.q))
    if num is not None:
        return mpq(int(num), int(value.denominator))
    return mpq(value)


def fmt_rational(q: mpq) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
