"""Dense univariate polynomials over Q and rational root extraction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from sympy import QQ
from sympy.polys.rings import ring

from .rational import ZERO, Rational, as_rational, fmt_rational

_T_RING, _T = ring("t", QQ)


class UniPoly:
    """Coefficients low degree first; trailing zeros stripped."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence = ()):
        c = [as_rational(a) for a in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = c

    @classmethod
    def _raw(cls, c):
        p = cls.__new__(cls)
        while c and not c[-1]:
            c.pop()
        p.c = c
        return p

    @classmethod
    def monomial(cls, k: int, coeff=1):
        return cls._raw([ZERO] * k + [as_rational(coeff)])

    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def lc(self) -> Rational:
        return self.c[-1] if self.c else ZERO

    def order(self) -> int:
        for i, a in enumerate(self.c):
            if a:
                return i
        raise ValueError("order of zero polynomial")

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.c == other.c

    def __hash__(self):
        return hash(tuple(self.c))

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.c), len(other.c))
        a = self.c + [ZERO] * (n - len(self.c))
        b = other.c + [ZERO] * (n - len(other.c))
        return UniPoly._raw([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw([-a for a in self.c])

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if not self.c or not other.c:
            return UniPoly()
        out = [ZERO] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    out[i + j] += a * b
        return UniPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        x = as_rational(x)
        acc = ZERO
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def divmod(self, other: "UniPoly"):
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        q = [ZERO] * max(0, len(r) - len(other.c) + 1)
        inv = 1 / other.c[-1]
        dv = len(other.c) - 1
        for k in range(len(r) - 1, dv - 1, -1):
            coef = r[k] * inv
            if coef:
                q[k - dv] = coef
                for j, b in enumerate(other.c):
                    r[k - dv + j] -= coef * b
        return UniPoly._raw(q), UniPoly._raw(r[:dv] if dv else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "UniPoly":
        if not self.c or self.c[-1] == 1:
            return self
        inv = 1 / self.c[-1]
        return UniPoly._raw([a * inv for a in self.c])

    def derivative(self) -> "UniPoly":
        return UniPoly._raw([a * i for i, a in enumerate(self.c)][1:])

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, _coerce(other)
        while b.c:
            a, b = b, a % b
        return a.monic()

    def squarefree_part(self) -> "UniPoly":
        if self.degree() < 1:
            return UniPoly([1]) if self.c else self
        return (self // self.gcd(self.derivative())).monic()

    def to_sympy(self):
        return _T_RING.from_list(list(reversed(self.c))) if self.c else _T_RING.zero

    @classmethod
    def from_sympy(cls, el) -> "UniPoly":
        if not el:
            return cls()
        deg = el.degree()
        coeffs = [ZERO] * (deg + 1)
        for (k,), c in el.items():
            coeffs[k] = as_rational(c)
        return cls._raw(coeffs)

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if not a:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            mag = fmt_rational(abs(a))
            body = mag if not mono else (mono if abs(a) == 1 else f"{mag}*{mono}")
            parts.append(("-" if a < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    __repr__ = __str__


def _coerce(x) -> UniPoly:
    return x if isinstance(x, UniPoly) else UniPoly([x])


@dataclass
class RootReport:
    """Rational roots with multiplicities plus the monic cofactor without rational roots."""

    roots: List[Tuple[Rational, int]] = field(default_factory=list)
    residual: UniPoly = field(default_factory=lambda: UniPoly([1]))

    @property
    def complete(self) -> bool:
        return self.residual.degree() <= 0

    def distinct(self) -> List[Rational]:
        return [r for r, _ in self.roots]


def rational_roots(p: UniPoly) -> RootReport:
    """All rational roots of ``p`` with multiplicity.

    Linear factors are split off by factoring over Q (Zassenhaus, through
    sympy), which scales to coefficients far beyond what divisor enumeration
    can handle.  Higher-degree irreducible factors end up in ``residual``.
    """
    if not p.c:
        raise ValueError("rational_roots of the zero polynomial")
    _, factors = p.to_sympy().factor_list()
    roots = []
    residual = UniPoly([1])
    for fac, mult in factors:
        fu = UniPoly.from_sympy(fac).monic()
        if fu.degree() == 1:
            roots.append((-fu.c[0], mult))
        elif fu.degree() > 1:
            residual = residual * fu ** mult
    roots.sort()
    return RootReport(roots, residual)


def rational_root_candidates(p: UniPoly) -> List[Rational]:
    """Candidates ±a/b from the rational root theorem on the primitive integer form.

    Brute force over divisors; only for small coefficients.
    """
    from math import lcm

    den = lcm(*(int(a.denominator) for a in p.c))
    ints = [int(a * den) for a in p.c]
    shift = next(i for i, a in enumerate(ints) if a)
    ints = ints[shift:]
    cands = {ZERO} if shift else set()

    def divisors(n):
        n = abs(n)
        return [d for d in range(1, n + 1) if n % d == 0]

    for a in divisors(ints[0]):
        for b in divisors(ints[-1]):
            cands.add(as_rational(a) / b)
            cands.add(-as_rational(a) / b)
    return sorted(cands)
