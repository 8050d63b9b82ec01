"""Polynomial algorithms on :class:`MultiPoly`: gcd, exact division, resultants,
factorization.  The heavy lifting is done by sympy's sparse polynomial rings,
whose QQ coefficients are gmpy2 ``mpq`` under the gmpy ground types the
package selects; results are still coerced in case sympy was imported first
with FLINT ground types.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Tuple

from sympy import QQ
from sympy.polys.rings import ring

from .multipoly import MultiPoly
from .rational import as_rational
from .unipoly import UniPoly


@lru_cache(maxsize=None)
def _ring(nvars: int):
    names = ",".join(f"v{i}" for i in range(nvars))
    return ring(names, QQ)[0]


def to_sympy(p: MultiPoly):
    R = _ring(p.nvars)
    return R.from_dict(dict(p.terms)) if p.terms else R.zero


def from_sympy(el, nvars: int) -> MultiPoly:
    return MultiPoly._raw({tuple(e): as_rational(c) for e, c in el.items() if c}, nvars)


def gcd_multivariate(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Greatest common divisor, scaled so its graded-lex leading coefficient is 1."""
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    g = to_sympy(p).gcd(to_sympy(q))
    return from_sympy(g, p.nvars).monic()


def gcd_many(polys) -> MultiPoly:
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        raise ValueError("gcd of zero polynomials")
    g = polys[0].monic()
    for p in polys[1:]:
        if g.is_constant():
            break
        g = gcd_multivariate(g, p)
    return g


def divmod_poly(p: MultiPoly, q: MultiPoly):
    qs, r = to_sympy(p).div(to_sympy(q))
    return from_sympy(qs, p.nvars), from_sympy(r, p.nvars)


def exact_divide(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """``p / q``; raises ``ArithmeticError`` when ``q`` does not divide ``p``."""
    if q.is_constant():
        return p.scale(1 / q.constant_term())
    quo, rem = divmod_poly(p, q)
    if not rem.is_zero():
        raise ArithmeticError("inexact division")
    return quo


def divides(q: MultiPoly, p: MultiPoly) -> bool:
    if p.is_zero():
        return True
    if q.is_zero():
        return False
    return divmod_poly(p, q)[1].is_zero()


def _move_first(p: MultiPoly, var: int) -> MultiPoly:
    perm = [var] + [i for i in range(p.nvars) if i != var]
    return MultiPoly._raw({tuple(e[i] for i in perm): c for e, c in p.terms.items()}, p.nvars)


def resultant_eliminate(p: MultiPoly, q: MultiPoly, var: int) -> MultiPoly:
    """Sylvester resultant of ``p`` and ``q`` with respect to variable ``var``.

    Degree-0 conventions: if ``q`` does not involve ``var`` then
    ``Res(p, q) = q ** deg_var(p)`` (symmetrically for ``p``, with the sign
    ``(-1)**(0*deg)`` = 1); two polynomials both free of ``var`` give 1.
    """
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of a zero polynomial")
    dp, dq = p.degree_in(var), q.degree_in(var)
    if dq == 0:
        return q ** dp
    if dp == 0:
        return p ** dq
    rp, rq = to_sympy(_move_first(p, var)), to_sympy(_move_first(q, var))
    res = rp.resultant(rq)
    if not hasattr(res, "items"):
        return MultiPoly.const(res, p.nvars)
    out = {}
    for e, c in res.items():
        if c:
            f = list(e)
            f.insert(var, 0)
            out[tuple(f)] = c
    return MultiPoly._raw(out, p.nvars)


def order_at_origin(p: MultiPoly) -> int:
    """Minimal total degree of the terms of ``p`` (its multiplicity at 0)."""
    return p.order()


def factor_over_q(p: MultiPoly) -> Tuple[object, List[Tuple[MultiPoly, int]]]:
    """Factorization into Q-irreducibles: ``(constant, [(factor, multiplicity)])``."""
    const, factors = to_sympy(p).factor_list()
    return const, [(from_sympy(f, p.nvars).monic(), m) for f, m in factors]


def squarefree_factors(p: MultiPoly) -> List[Tuple[MultiPoly, int]]:
    _, factors = to_sympy(p).sqf_list()
    return [(from_sympy(f, p.nvars).monic(), m) for f, m in factors]


def univariate(p: MultiPoly, var: int) -> UniPoly:
    """View ``p`` (which must only involve ``var``) as a :class:`UniPoly`."""
    deg = max(p.degree_in(var), 0)
    coeffs = [0] * (deg + 1)
    for e, c in p.terms.items():
        if any(k for i, k in enumerate(e) if i != var):
            raise ValueError("polynomial involves other variables")
        coeffs[e[var]] = c
    return UniPoly(coeffs)
