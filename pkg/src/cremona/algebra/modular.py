"""Multi-modular computation of the square-free part of a resultant.

Used to locate the proper base points of high-degree maps, where a dense
Sylvester resultant over Q is far too slow.  The answer is only trusted after
exact verification by the caller.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Optional

from math import isqrt

from gmpy2 import invert, mpq
from sympy import prevprime

from .multipoly import MultiPoly
from .unipoly import UniPoly


@lru_cache(maxsize=1)
def _primes(count: int = 64) -> List[int]:
    out = []
    p = 2 ** 61
    for _ in range(count):
        p = int(prevprime(p))
        out.append(p)
    return out


def _reduce(c: mpq, p: int) -> Optional[int]:
    den = int(c.denominator) % p
    if den == 0:
        return None
    return int(c.numerator) * int(invert(den, p)) % p


def _rem(a: List[int], b: List[int], p: int) -> List[int]:
    a = list(a)
    inv = int(invert(b[-1], p))
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv % p
        if c:
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % p
    a = a[:db]
    while a and a[-1] == 0:
        a.pop()
    return a


def resultant_mod(a: List[int], b: List[int], p: int) -> int:
    """Resultant of two univariate polynomials (low degree first) modulo ``p``."""
    if not a or not b:
        return 0
    res = 1
    while True:
        m, n = len(a) - 1, len(b) - 1
        if n == 0:
            return res * pow(b[0], m, p) % p
        if m == 0:
            return res * pow(a[0], n, p) % p
        r = _rem(a, b, p)
        if not r:
            return 0
        if (m * n) % 2:
            res = -res
        res = res * pow(b[-1], m - (len(r) - 1), p) % p
        a, b = b, r


def _interpolate(values: List[int], p: int) -> List[int]:
    """Newton interpolation through (0, v0), (1, v1), ... modulo ``p``."""
    n = len(values)
    coef = list(values)
    for j in range(1, n):
        inv = int(invert(j, p))
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * inv % p
    # expand the Newton form sum coef[i] * prod_{k<i} (x - k)
    poly = [0]
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - i) + coef[i]
        shifted = [0] + poly
        for k in range(len(poly)):
            shifted[k] = (shifted[k] - i * poly[k]) % p
        shifted[0] = (shifted[0] + coef[i]) % p
        poly = shifted
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _gcd_mod(a, b, p):
    while b:
        a, b = b, _rem(a, b, p)
    if not a:
        return a
    inv = int(invert(a[-1], p))
    return [c * inv % p for c in a]


def _div_mod(a, b, p):
    a = list(a)
    inv = int(invert(b[-1], p))
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv % p
        q[k - db] = c
        if c:
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % p
    return q


def _sqf_mod(poly, p):
    deriv = [(k * c) % p for k, c in enumerate(poly)][1:]
    while deriv and deriv[-1] == 0:
        deriv.pop()
    if not deriv:
        return [1]
    g = _gcd_mod(poly, deriv, p)
    q = _div_mod(poly, g, p)
    inv = int(invert(q[-1], p))
    return [c * inv % p for c in q]


def rational_reconstruct(c: int, m: int) -> Optional[mpq]:
    """Find n/d = c mod m with |n|, d <= sqrt(m/2), or None."""
    bound = isqrt(m // 2)
    r0, r1 = m, c % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return mpq(r1, s1)


def squarefree_resultant(a: MultiPoly, b: MultiPoly, max_primes: int = 60) -> UniPoly:
    """Monic square-free part of ``Res_y(a, b)`` for bivariate ``a, b`` in (x, y).

    Both polynomials must have a nonzero constant leading coefficient in y so
    that specializing x commutes with the resultant.  Returns the zero
    polynomial when the resultant vanishes identically.
    """
    da, db = a.degree_in(1), b.degree_in(1)
    for poly, d in ((a, da), (b, db)):
        lead = [e for e in poly.terms if e[1] == d]
        if d <= 0 or any(e[0] for e in lead):
            raise ValueError("leading coefficient in y must be a nonzero constant")
    npts = a.degree() * b.degree() + 1

    def columns(poly, d, p):
        # cols[j] = coefficients (low first, in x) of y^j, reduced mod p
        cols = [[0] * (poly.degree_in(0) + 1) for _ in range(d + 1)]
        for (i, j), c in poly.terms.items():
            r = _reduce(c, p)
            if r is None:
                return None
            cols[j][i] = r
        return cols

    def horner(col, x0, p):
        acc = 0
        for c in reversed(col):
            acc = (acc * x0 + c) % p
        return acc

    crt_mod = 1
    crt_coeffs: List[int] = []
    best_deg = -1
    previous = None
    for p in _primes(max_primes)[:max_primes]:
        ca, cb = columns(a, da, p), columns(b, db, p)
        if ca is None or cb is None or ca[da][0] == 0 or cb[db][0] == 0:
            continue
        values = []
        for x0 in range(npts):
            ua = [horner(col, x0, p) for col in ca]
            ub = [horner(col, x0, p) for col in cb]
            values.append(resultant_mod(ua, ub, p))
        rp = _interpolate(values, p)
        if not rp:
            sp: List[int] = []
        else:
            sp = _sqf_mod(rp, p)
        deg = len(sp) - 1
        if deg < best_deg:
            continue  # unlucky prime
        if deg > best_deg or not crt_coeffs:
            best_deg = deg
            crt_mod, crt_coeffs = p, list(sp)
            previous = None
            if deg < 0:
                return UniPoly()
            if deg == 0:
                return UniPoly([1])
            continue
        # combine by CRT
        inv = int(invert(crt_mod % p, p))
        new = []
        for c_old, c_p in zip(crt_coeffs, sp):
            t = (c_p - c_old) * inv % p
            new.append(c_old + crt_mod * t)
        crt_mod *= p
        crt_coeffs = new
        recon = [rational_reconstruct(c, crt_mod) for c in crt_coeffs]
        if all(r is not None for r in recon):
            if recon == previous:
                return UniPoly(recon)
            previous = recon
    raise ArithmeticError("modular resultant did not stabilize")


def _mulmod(a, b, m, p):
    """a*b mod (m, p) for dense coefficient lists (low degree first)."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _rem(out, m, p) if len(out) >= len(m) else out


def _powmod(base, e, m, p):
    result = [1]
    base = _rem(base, m, p) if len(base) >= len(m) else base
    while e:
        if e & 1:
            result = _mulmod(result, base, m, p)
        base = _mulmod(base, base, m, p)
        e >>= 1
    return result


def roots_mod(coeffs: List[int], p: int, rng) -> List[int]:
    """Distinct roots in F_p of a polynomial given low degree first (p odd prime)."""
    f = [c % p for c in coeffs]
    while f and f[-1] == 0:
        f.pop()
    if len(f) <= 1:
        return []
    # the product of the distinct linear factors: gcd(f, t^p - t)
    tp = _powmod([0, 1], p, f, p)
    tp = tp + [0] * max(0, 2 - len(tp))
    tp[1] = (tp[1] - 1) % p
    while tp and tp[-1] == 0:
        tp.pop()
    g = _gcd_mod(f, tp, p) if tp else _gcd_mod(f, f, p)
    roots: List[int] = []

    def split(h):
        if len(h) <= 1:
            return
        if len(h) == 2:
            roots.append(-h[0] * int(invert(h[1], p)) % p)
            return
        while True:
            delta = rng.randrange(p)
            w = _powmod([delta, 1], (p - 1) // 2, h, p)
            w = w + [0] * max(0, 1 - len(w))
            w[0] = (w[0] - 1) % p
            while w and w[-1] == 0:
                w.pop()
            if not w:
                continue
            d = _gcd_mod(h, w, p)
            if 1 < len(d) < len(h):
                split(d)
                split(_div_mod(h, d, p))
                return

    split(g)
    return sorted(roots)


def certify_coprime(polys, tries: int = 3, seed: int = 1) -> bool:
    """True only if the homogeneous ``polys`` provably have no common factor.

    Restricts to a random line ``P + tQ`` modulo a large prime.  If some
    ``f_i(Q)`` is nonzero mod p, any common factor G would restrict to a
    polynomial of degree ``deg G`` dividing every restriction (Gauss's lemma
    keeps the cofactors p-integral), so a trivial gcd there proves G = 1.
    False means "not certified", not "not coprime".
    """
    import random

    rng = random.Random(seed)
    polys = [q for q in polys if not q.is_zero()]
    if len(polys) < 2:
        return len(polys) == 1 and polys[0].is_constant()
    for p in _primes(8)[:tries]:
        reduced = []
        ok = True
        for q in polys:
            terms = []
            for e, c in q.terms.items():
                r = _reduce(c, p)
                if r is None:
                    ok = False
                    break
                terms.append((e, r))
            reduced.append(terms)
        if not ok:
            continue
        P = [rng.randrange(p) for _ in range(3)]
        Q = [rng.randrange(p) for _ in range(3)]
        if all(_eval_terms(t, Q, p) == 0 for t in reduced):
            continue
        g = None
        for terms in reduced:
            u = _restrict_to_line(terms, P, Q, p)
            g = u if g is None else _gcd_mod(g, u, p) if u else g
            if g is not None and len(g) == 1:
                return True
        # a single nonconstant restriction that never shrank
    return False


def _eval_terms(terms, pt, p):
    total = 0
    for e, c in terms:
        v = c
        for a, k in zip(pt, e):
            if k:
                v = v * pow(a, k, p) % p
        total += v
    return total % p


def _restrict_to_line(terms, P, Q, p):
    """Dense coefficients (low first) of ``f(P + t Q)`` mod p."""
    deg = max(sum(e) for e, _ in terms)
    # powers of each linear coordinate P_i + t Q_i
    cache = {}

    def lin_pow(i, k):
        key = (i, k)
        if key not in cache:
            if k == 0:
                cache[key] = [1]
            else:
                prev = lin_pow(i, k - 1)
                nxt = [0] * (len(prev) + 1)
                for s, v in enumerate(prev):
                    nxt[s] = (nxt[s] + v * P[i]) % p
                    nxt[s + 1] = (nxt[s + 1] + v * Q[i]) % p
                cache[key] = nxt
        return cache[key]

    out = [0] * (deg + 1)
    for e, c in terms:
        acc = [c]
        for i, k in enumerate(e):
            if k:
                lp = lin_pow(i, k)
                new = [0] * (len(acc) + len(lp) - 1)
                for a, va in enumerate(acc):
                    if va:
                        for b, vb in enumerate(lp):
                            new[a + b] = (new[a + b] + va * vb) % p
                acc = new
        for s, v in enumerate(acc):
            out[s] = (out[s] + v) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _mul_dense(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def certify_composition_coprime(outer, inner, seed: int = 1) -> bool:
    """Same certificate as :func:`certify_coprime` for the components of
    ``outer(inner)``, computed without expanding the composition: the inner
    forms are restricted to the line first."""
    import random

    rng = random.Random(seed)
    for p in _primes(8)[:3]:
        try:
            red_in = [[(e, _reduce_strict(c, p)) for e, c in q.terms.items()] for q in inner]
            red_out = [[(e, _reduce_strict(c, p)) for e, c in q.terms.items()] for q in outer]
        except ZeroDivisionError:
            continue
        P = [rng.randrange(p) for _ in range(3)]
        Q = [rng.randrange(p) for _ in range(3)]
        gQ = [_eval_terms(t, Q, p) for t in red_in]
        if all(_eval_terms(t, gQ, p) == 0 for t in red_out if t):
            continue
        lines = [_restrict_to_line(t, P, Q, p) if t else [] for t in red_in]
        powers = [{0: [1]} for _ in range(3)]

        def pw(i, k):
            table = powers[i]
            if k not in table:
                table[k] = _mul_dense(pw(i, k - 1), lines[i], p) if lines[i] else []
            return table[k]

        g = None
        for terms in red_out:
            if not terms:
                continue
            acc = []
            for e, c in terms:
                mono = [c]
                for i, k in enumerate(e):
                    if k:
                        part = pw(i, k)
                        mono = _mul_dense(mono, part, p) if part else []
                        if not mono:
                            break
                if len(mono) > len(acc):
                    acc = acc + [0] * (len(mono) - len(acc))
                for s, v in enumerate(mono):
                    acc[s] = (acc[s] + v) % p
            while acc and acc[-1] == 0:
                acc.pop()
            if not acc:
                continue
            g = acc if g is None else _gcd_mod(g, acc, p)
            if len(g) == 1:
                return True
    return False


def _reduce_strict(c, p):
    r = _reduce(c, p)
    if r is None:
        raise ZeroDivisionError
    return r
