"""Rational self-maps of the projective plane.

A :class:`PlaneMap` is a primitive triple of homogeneous forms of one degree,
stored canonically so that two maps are equal iff their triples are equal.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .algebra import ops
from .algebra.modular import certify_composition_coprime, certify_coprime
from .algebra.grammar import ParseError, parse_poly_tokens, tokenize
from .algebra.multipoly import MultiPoly, X, Y, Z
from .algebra.rational import ONE, ZERO, Rational, as_rational, fmt_rational
from .errors import (
    DegreeCapExceeded, DegreeMismatch, FactorizationIncomplete, IndeterminatePoint,
    InhomogeneousComponent, NotBirational, ZeroJacobian, ZeroMap,
)

DEFAULT_DEGREE_CAP = 700


# -- points -----------------------------------------------------------------

@dataclass(frozen=True)
class ProjPoint:
    """Point of P^2 with rational coordinates, first nonzero coordinate 1."""

    coords: Tuple[Rational, Rational, Rational]

    def __post_init__(self):
        c = tuple(as_rational(a) for a in self.coords)
        if len(c) != 3:
            raise ValueError("a plane point has three coordinates")
        lead = next((a for a in c if a), None)
        if lead is None:
            raise ValueError("(0:0:0) is not a projective point")
        object.__setattr__(self, "coords", tuple(a / lead for a in c))

    @classmethod
    def of(cls, *coords) -> "ProjPoint":
        return cls(tuple(coords))

    @classmethod
    def parse(cls, text: str) -> "ProjPoint":
        body = text.strip()
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1]
        parts = body.split(":") if ":" in body else body.split(",")
        if len(parts) != 3:
            raise ValueError(f"expected three coordinates in {text!r}")
        return cls(tuple(as_rational(p.strip()) for p in parts))

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def first_nonzero(self) -> int:
        return next(i for i, a in enumerate(self.coords) if a)

    def __str__(self):
        return "(" + ":".join(fmt_rational(a) for a in self.coords) + ")"

    __repr__ = __str__


# -- maps -------------------------------------------------------------------

def _normalize(components: Sequence[MultiPoly], coprime: bool = False
               ) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    comps = list(components)
    if all(c.is_zero() for c in comps):
        raise ZeroMap("all three components vanish")
    degs = {c.degree() for c in comps if not c.is_zero()}
    for k, c in enumerate(comps):
        if not c.is_homogeneous():
            raise InhomogeneousComponent(f"component {k} is not homogeneous: {c}")
    if len(degs) > 1:
        raise DegreeMismatch(f"components have degrees {sorted(degs)}")
    if coprime or certify_coprime(comps):
        g = None
    else:
        g = ops.gcd_many(comps)
    if g is not None and not g.is_constant():
        comps = [ops.exact_divide(c, g) for c in comps]
    lead = next(c for c in comps if not c.is_zero()).leading_coefficient()
    if lead != 1:
        inv = 1 / lead
        comps = [c.scale(inv) for c in comps]
    return tuple(comps)


class PlaneMap:
    """``(f0 : f1 : f2)``, primitive and canonically scaled.  Immutable."""

    __slots__ = ("components", "_hash")

    def __init__(self, components: Sequence[MultiPoly], normalize: bool = True,
                 coprime: bool = False):
        comps = _normalize(components, coprime) if normalize else tuple(components)
        if len(comps) != 3:
            raise ValueError("a plane map has three components")
        self.components = comps
        self._hash = hash(comps)

    @property
    def degree(self) -> int:
        return max(c.degree() for c in self.components)

    def __eq__(self, other):
        return isinstance(other, PlaneMap) and self.components == other.components

    def __hash__(self):
        return self._hash

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __call__(self, p) -> ProjPoint:
        return evaluate(self, p)

    def is_identity(self) -> bool:
        return self == IDENTITY

    def to_str(self) -> str:
        return "(" + " : ".join(c.to_str() for c in self.components) + ")"

    __str__ = to_str

    def __repr__(self):
        return f"PlaneMap{self.to_str()}"

    def to_json(self) -> dict:
        return {"degree": self.degree, "components": [c.to_str() for c in self.components]}

    @classmethod
    def from_json(cls, data) -> "PlaneMap":
        if isinstance(data, str):
            data = json.loads(data)
        f = parse_map("(" + " : ".join(data["components"]) + ")")
        if f.degree != data["degree"]:
            raise DegreeMismatch(f"declared degree {data['degree']}, components have {f.degree}")
        return f


IDENTITY = PlaneMap((X, Y, Z))


def parse_map(text: str) -> PlaneMap:
    """Parse ``(P0 : P1 : P2)`` into a normalized map."""
    tokens = tokenize(text)
    if tokens[0][:2] != ("op", "("):
        raise ParseError("a map starts with '('", tokens[0][2], text)
    comps = []
    i = 1
    for k in range(3):
        poly, i = parse_poly_tokens(tokens, i, (":",), text)
        comps.append(poly)
        kind, val, pos = tokens[i]
        want = ":" if k < 2 else ")"
        if (kind, val) != ("op", want):
            raise ParseError(f"expected {want!r}, found {val or 'end of input'!r}", pos, text)
        i += 1
    if tokens[i][0] != "end":
        raise ParseError(f"unexpected {tokens[i][1]!r} after the map", tokens[i][2], text)
    return PlaneMap(comps)


def compose(f: PlaneMap, g: PlaneMap, degree_cap: int = DEFAULT_DEGREE_CAP) -> PlaneMap:
    """``f o g`` (apply g first)."""
    bound = f.degree * g.degree
    if bound > degree_cap:
        raise DegreeCapExceeded(bound, degree_cap)
    if g.is_identity():
        return f
    if f.is_identity():
        return g
    coprime = certify_composition_coprime(f.components, g.components)
    return PlaneMap([c.substitute(g.components) for c in f.components], coprime=coprime)


def evaluate(f: PlaneMap, p) -> ProjPoint:
    if not isinstance(p, ProjPoint):
        p = ProjPoint(tuple(p))
    vals = tuple(c.evaluate(p.coords) for c in f.components)
    if not any(vals):
        raise IndeterminatePoint(p)
    return ProjPoint(vals)


# -- automorphisms ----------------------------------------------------------

def _det3(m) -> Rational:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


@dataclass(frozen=True)
class Automorphism:
    """Invertible 3x3 rational matrix acting on column vectors, up to scaling."""

    matrix: Tuple[Tuple[Rational, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(as_rational(a) for a in row) for row in self.matrix)
        if len(m) != 3 or any(len(r) != 3 for r in m):
            raise ValueError("automorphisms are 3x3 matrices")
        if _det3(m) == 0:
            raise ValueError("singular matrix")
        lead = next(a for row in m for a in row if a)
        object.__setattr__(self, "matrix", tuple(tuple(a / lead for a in r) for r in m))

    @classmethod
    def identity(cls) -> "Automorphism":
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "Automorphism":
        """The map sending coordinate i to slot ``perm[i]``."""
        rows = [[0] * 3 for _ in range(3)]
        for i, j in enumerate(perm):
            rows[j][i] = 1
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def random(cls, rng: random.Random, bound: int = 10, max_den: int = 10) -> "Automorphism":
        while True:
            entries = []
            for _ in range(9):
                den = rng.randint(1, max_den)
                entries.append(as_rational(rng.randint(-bound * den, bound * den)) / den)
            m = (tuple(entries[0:3]), tuple(entries[3:6]), tuple(entries[6:9]))
            if _det3(m) != 0:
                return cls(m)

    @property
    def det(self) -> Rational:
        return _det3(self.matrix)

    def apply(self, p) -> ProjPoint:
        c = tuple(p)
        return ProjPoint(tuple(sum(a * b for a, b in zip(row, c)) for row in self.matrix))

    __call__ = apply

    def linear_forms(self) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
        v = (X, Y, Z)
        return tuple(sum((v[j].scale(row[j]) for j in range(3) if row[j]), MultiPoly.zero())
                     for row in self.matrix)

    def as_map(self) -> PlaneMap:
        return PlaneMap(self.linear_forms())

    def inverse(self) -> "Automorphism":
        m = self.matrix
        cof = [[(m[(j + 1) % 3][(i + 1) % 3] * m[(j + 2) % 3][(i + 2) % 3]
                 - m[(j + 1) % 3][(i + 2) % 3] * m[(j + 2) % 3][(i + 1) % 3])
                for j in range(3)] for i in range(3)]
        return Automorphism(tuple(tuple(r) for r in cof))

    def __matmul__(self, other: "Automorphism") -> "Automorphism":
        a, b = self.matrix, other.matrix
        return Automorphism(tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
                                  for i in range(3)))

    def __str__(self):
        return "[" + "; ".join(" ".join(fmt_rational(a) for a in r) for r in self.matrix) + "]"


def act(A: Automorphism, f: PlaneMap, side: str = "left") -> PlaneMap:
    """``A o f``, ``f o A`` or ``A o f o A^-1``."""
    if side == "left":
        return PlaneMap([c.substitute(list(f.components)) for c in A.linear_forms()])
    if side == "right":
        return PlaneMap([c.substitute(list(A.linear_forms())) for c in f.components])
    if side == "conjugate":
        return act(A, act(A.inverse(), f, "right"), "left")
    raise ValueError(f"unknown side {side!r}")


# -- Jacobian and contracted curves ----------------------------------------

def jacobian(f: PlaneMap) -> MultiPoly:
    m = [[c.diff(v) for v in range(3)] for c in f.components]
    det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
           - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
           + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    if det.is_zero():
        raise ZeroJacobian("the Jacobian determinant vanishes identically")
    return det


@dataclass(frozen=True)
class ContractedCurve:
    equation: MultiPoly
    image: Optional[ProjPoint]
    field_checks: int = 0

    def to_json(self) -> dict:
        return {"equation": self.equation.to_str(),
                "image": None if self.image is None else str(self.image),
                "field_checks": self.field_checks}


def _dehomogenize(p: MultiPoly, k: int) -> MultiPoly:
    keep = [i for i in range(3) if i != k]
    out = {}
    for e, c in p.terms.items():
        key = tuple(e[i] for i in keep)
        out[key] = out.get(key, ZERO) + c
    return MultiPoly({e: c for e, c in out.items() if c}, 2)


def wedge_contracted(f: PlaneMap, h: MultiPoly) -> bool:
    """Exact test that ``f`` is constant on ``V(h)`` (``h`` irreducible).

    In each affine chart, ``(f_i df_j - f_j df_i) ^ dh`` must vanish modulo
    ``h`` for every pair of components.
    """
    for k in range(3):
        hk = _dehomogenize(h, k)
        if hk.is_constant():
            continue
        fk = [_dehomogenize(c, k) for c in f.components]
        dh = (hk.diff(0), hk.diff(1))
        for i in range(3):
            for j in range(i + 1, 3):
                a = [fk[i] * fk[j].diff(v) - fk[j] * fk[i].diff(v) for v in range(2)]
                w = a[0] * dh[1] - a[1] * dh[0]
                if not ops.divides(hk, w):
                    return False
    return True


def _pure_power_var(h: MultiPoly) -> Optional[int]:
    d = h.degree()
    for v in range(3):
        e = [0, 0, 0]
        e[v] = d
        if tuple(e) in h.terms:
            return v
    return None


def _image_by_normal_form(f: PlaneMap, h: MultiPoly, rng: random.Random) -> Optional[ProjPoint]:
    """The constant value of ``f`` on ``V(h)``, or None if it is not a rational point."""
    comps, curve = list(f.components), h
    A = None
    v = _pure_power_var(curve)
    while v is None:
        A = Automorphism.random(rng, bound=3, max_den=1)
        curve = h.substitute(list(A.linear_forms()))
        v = _pure_power_var(curve)
    if A is not None:
        comps = [c.substitute(list(A.linear_forms())) for c in comps]
    hv = ops.to_sympy(ops._move_first(curve, v))
    rems = [ops.from_sympy(ops.to_sympy(ops._move_first(c, v)).rem(hv), 3) for c in comps]
    base = next((r for r in rems if not r.is_zero()), None)
    if base is None:
        return None
    e0, c0 = base.sorted_terms()[0]
    ratios = []
    for r in rems:
        lam = r.terms.get(e0, ZERO) / c0
        if r != base.scale(lam):
            return None
        ratios.append(lam)
    return ProjPoint(tuple(ratios))


_FIELD_PRIME = 2 ** 31 - 1


def _field_points(h: MultiPoly, count: int, rng: random.Random, p: int = _FIELD_PRIME):
    """Points of ``V(h)`` over F_p, found as roots on random lines."""
    from .algebra.modular import roots_mod

    pts = []
    tries = 0
    while len(pts) < count and tries < 50 * count:
        tries += 1
        a = [rng.randrange(p) for _ in range(3)]
        b = [rng.randrange(p) for _ in range(3)]
        # h(a + t b) as a polynomial in t, mod p
        coeffs = [0] * (h.degree() + 1)
        for e, c in h.terms.items():
            term = [int(c.numerator) * pow(int(c.denominator), -1, p) % p]
            for i, k in enumerate(e):
                for _ in range(k):
                    nxt = [0] * (len(term) + 1)
                    for s, val in enumerate(term):
                        nxt[s] = (nxt[s] + val * a[i]) % p
                        nxt[s + 1] = (nxt[s + 1] + val * b[i]) % p
                    term = nxt
            for s, val in enumerate(term):
                coeffs[s] = (coeffs[s] + val) % p
        for t in roots_mod(coeffs, p, rng):
            pts.append(tuple((a[i] + t * b[i]) % p for i in range(3)))
    return pts[:count]


def _eval_mod(poly: MultiPoly, pt, p: int) -> int:
    total = 0
    for e, c in poly.terms.items():
        term = int(c.numerator) * pow(int(c.denominator), -1, p)
        for v, k in zip(pt, e):
            term = term * pow(v, k, p)
        total += term
    return total % p


def field_check(f: PlaneMap, h: MultiPoly, image: ProjPoint, count: int = 20,
                seed: int = 0, p: int = _FIELD_PRIME) -> int:
    """Evaluate ``f`` at ``count`` points of ``V(h)`` over F_p; return how many
    land on ``image`` (points where f is undefined are skipped and resampled)."""
    rng = random.Random(seed)
    img = [int(a.numerator) * pow(int(a.denominator), -1, p) % p for a in image]
    good = 0
    for pt in _field_points(h, 4 * count, rng, p):
        vals = [_eval_mod(c, pt, p) for c in f.components]
        if not any(vals):
            continue
        cross = [(vals[i] * img[j] - vals[j] * img[i]) % p for i in range(3) for j in range(3)]
        if any(cross):
            return -1
        good += 1
        if good >= count:
            break
    return good


def contracted_curves(f: PlaneMap, seed: int = 0, max_factor_degree: int = 60,
                      field_points: int = 20) -> List[ContractedCurve]:
    """Irreducible components of the Jacobian that ``f`` maps to a point."""
    J = jacobian(f)
    if J.degree() > max_factor_degree:
        raise FactorizationIncomplete(
            f"Jacobian of degree {J.degree()} exceeds the factorization cap {max_factor_degree}",
            [h for h, _ in ops.squarefree_factors(J)])
    rng = random.Random(seed)
    out = []
    for h, _ in ops.factor_over_q(J)[1]:
        if h.is_constant() or not wedge_contracted(f, h):
            continue
        image = _image_by_normal_form(f, h, rng)
        checks = 0
        if image is not None:
            checks = field_check(f, h, image, field_points, seed)
            if checks < 0:
                raise AssertionError(f"finite-field check contradicts contraction of {h}")
        out.append(ContractedCurve(h, image, checks))
    out.sort(key=lambda c: (c.equation.degree(), c.equation.to_str()))
    return out


# -- inverse ----------------------------------------------------------------

def monomials(d: int) -> List[Tuple[int, int, int]]:
    """Degree-d exponent triples, graded-lex descending."""
    out = []
    for a in range(d, -1, -1):
        for b in range(d - a, -1, -1):
            out.append((a, b, d - a - b))
    return out


def _random_point(rng: random.Random, bound: int = 100) -> Tuple[int, int, int]:
    return tuple(rng.randint(-bound, bound) for _ in range(3))


def _primitive_ints(vals) -> List[int]:
    from math import gcd, lcm

    den = lcm(*(int(v.denominator) for v in vals))
    ints = [int(v * den) for v in vals]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return [a // g for a in ints] if g else ints


@lru_cache(maxsize=256)
def _inverse_cached(f: PlaneMap, seed: int) -> PlaneMap:
    d = f.degree
    if d == 1:
        m = tuple(tuple(c.terms.get(e, ZERO) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
                  for c in f.components)
        try:
            return Automorphism(m).inverse().as_map()
        except ValueError:
            raise NotBirational("singular linear map") from None
    mons = monomials(d)
    nm = len(mons)
    rng = random.Random(seed)
    J = jacobian(f)
    rows = []
    samples = 0
    attempts = 0
    while samples < 3 * nm:
        attempts += 1
        if attempts > 50 * nm:
            raise NotBirational("could not find enough regular sample points")
        p = _random_point(rng)
        if not any(p) or J.evaluate(p) == 0:
            continue
        q = [c.evaluate(p) for c in f.components]
        if not any(q):
            continue
        q = _primitive_ints(q)
        qm = [q[0] ** e[0] * q[1] ** e[1] * q[2] ** e[2] for e in mons]
        c = next(i for i in range(3) if p[i])
        for i in range(3):
            if i == c:
                continue
            # p_c * g_i(q) - p_i * g_c(q) = 0
            row = [0] * (3 * nm)
            for k in range(nm):
                row[i * nm + k] = p[c] * qm[k]
                row[c * nm + k] = -p[i] * qm[k]
            rows.append(row)
        samples += 1
    M = DomainMatrix([[QQ(a) for a in r] for r in rows], (len(rows), 3 * nm), QQ)
    basis = M.nullspace().to_list()
    for vec in basis:
        vec = [as_rational(a) for a in vec]
        comps = []
        for i in range(3):
            terms = {mons[k]: vec[i * nm + k] for k in range(nm) if vec[i * nm + k]}
            comps.append(MultiPoly(terms))
        try:
            g = PlaneMap(comps)
        except (ZeroMap, ValueError):
            continue
        if compose(g, f).is_identity() and compose(f, g).is_identity():
            return g
    raise NotBirational("no triple in the interpolation nullspace inverts the map")


def inverse(f: PlaneMap, seed: int = 0) -> PlaneMap:
    """The inverse map, by interpolation and exact verification."""
    return _inverse_cached(f, seed)


def is_birational(f: PlaneMap) -> bool:
    try:
        inverse(f)
    except (NotBirational, ZeroJacobian):
        return False
    return True
