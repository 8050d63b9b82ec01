"""Truncated power series in t over Q (dense, known modulo t^prec).

Coefficient storage and the truncated products are delegated to FLINT's
``fmpq_poly``; values cross the boundary as ``mpq``.
"""

from __future__ import annotations

from typing import Optional

import flint

from .rational import Rational, as_rational


def _fq(a) -> flint.fmpq:
    a = as_rational(a)
    return flint.fmpq(int(a.numerator), int(a.denominator))


def _mq(a: flint.fmpq) -> Rational:
    return Rational(int(a.p), int(a.q))


class Series:
    __slots__ = ("p", "prec", "_order")

    def __init__(self, coeffs, prec: int):
        self.p = flint.fmpq_poly([_fq(a) for a in list(coeffs)[:prec]])
        self.prec = prec
        self._order = -1

    @classmethod
    def _raw(cls, p: flint.fmpq_poly, prec: int) -> "Series":
        s = cls.__new__(cls)
        s.p = p if p.length() <= prec else p.truncate(prec)
        s.prec = prec
        s._order = -1
        return s

    @classmethod
    def const(cls, a, prec: int) -> "Series":
        return cls([a], prec)

    @classmethod
    def t(cls, prec: int, scale=1) -> "Series":
        return cls([0, scale], prec)

    def order(self) -> Optional[int]:
        """Index of the first nonzero coefficient, None if zero to this precision."""
        if self._order == -1:
            if self.p.is_zero():
                self._order = None
            else:
                self._order = next(i for i, a in enumerate(self.p.coeffs()) if a != 0)
        return self._order

    def __getitem__(self, i):
        return _mq(self.p[i])

    def _lift(self, other):
        if isinstance(other, Series):
            return other
        return Series.const(other, self.prec)

    def __add__(self, other):
        o = self._lift(other)
        return Series._raw(self.p + o.p, min(self.prec, o.prec))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Series._raw(self.p - o.p, min(self.prec, o.prec))

    def __neg__(self):
        return Series._raw(-self.p, self.prec)

    def scale(self, k) -> "Series":
        return Series._raw(self.p * _fq(k), self.prec)

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        n = min(self.prec, other.prec)
        return Series._raw(self.p.mul_low(other.p, n), n)

    __rmul__ = __mul__

    def shift_down(self, k: int) -> "Series":
        """Divide by t^k (the first k coefficients must vanish); loses k of precision."""
        return Series._raw(self.p.right_shift(k), self.prec - k)

    def inverse(self) -> "Series":
        a0 = self.p[0]
        if a0 == 0:
            raise ZeroDivisionError("series is not a unit")
        n = self.prec
        g = flint.fmpq_poly([1 / a0])
        k = 1
        while k < n:
            k = min(2 * k, n)
            e = self.p.truncate(k).mul_low(g, k)
            g = g.mul_low(2 - e, k)
        return Series._raw(g, n)

    def __truediv__(self, other: "Series") -> "Series":
        """Quotient of series; the divisor may have positive order."""
        k = other.order()
        if k is None:
            raise ZeroDivisionError("division by a series that is zero to this precision")
        num, den = self, other
        if k:
            o = self.order()
            if o is not None and o < k:
                raise ZeroDivisionError("quotient is not a power series")
            num, den = self.shift_down(k), other.shift_down(k)
        return num * den.inverse()

    def __repr__(self):
        return f"Series({[str(_mq(a)) for a in self.p.coeffs()]}, prec={self.prec})"
