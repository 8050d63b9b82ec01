"""Points of the bubble space over P^2 and local germs of linear systems.

A :class:`BubblePoint` is a proper anchor plus a tower of chart records.  At
the proper level the local coordinates are the two affine coordinates other
than the anchor's first nonzero one, translated so the anchor is the origin.
Each further level is one blow-up of the origin of the previous chart:

    first  (c):  X = u,            Y = u (v + c)
    second (c):  X = (u + c) v,    Y = v

and the new point is the origin (u, v) = (0, 0).  Canonically the second
chart is only used for the direction (0:1), with c = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .algebra.multipoly import MultiPoly
from .algebra.rational import ZERO, Rational, as_rational, fmt_rational
from .errors import NotABasePoint
from .planemap import ProjPoint

FIRST = "first"
SECOND = "second"

U = MultiPoly.var(0, 2)
V = MultiPoly.var(1, 2)

Step = Tuple[str, Rational]


def proper_axes(anchor: ProjPoint) -> Tuple[int, int, int]:
    """(k, i, j): dehomogenize at k, local coordinates are x_i, x_j (i < j)."""
    k = anchor.first_nonzero()
    i, j = (a for a in range(3) if a != k)
    return k, i, j


class BubblePoint:
    """Immutable; equality is equality of canonical forms."""

    __slots__ = ("anchor", "tower", "_hash")

    def __init__(self, anchor, tower: Sequence[Step] = ()):
        if not isinstance(anchor, ProjPoint):
            anchor = ProjPoint(tuple(anchor))
        steps = tuple((kind, as_rational(c)) for kind, c in tower)
        for kind, _ in steps:
            if kind not in (FIRST, SECOND):
                raise ValueError(f"unknown chart kind {kind!r}")
        self.anchor = anchor
        self.tower = steps
        if not self.is_canonical():
            from .transport import canonicalize

            self.tower = canonicalize(self).tower
        self._hash = hash((self.anchor, self.tower))

    @classmethod
    def _canonical(cls, anchor: ProjPoint, tower: Tuple[Step, ...]) -> "BubblePoint":
        p = cls.__new__(cls)
        p.anchor, p.tower = anchor, tower
        p._hash = hash((anchor, tower))
        return p

    def is_canonical(self) -> bool:
        return all(kind == FIRST or c == 0 for kind, c in self.tower)

    @property
    def level(self) -> int:
        return len(self.tower)

    def parent(self) -> "BubblePoint":
        if not self.tower:
            raise ValueError("a proper point has no parent")
        return BubblePoint._canonical(self.anchor, self.tower[:-1])

    def child(self, kind: str, c=0) -> "BubblePoint":
        return BubblePoint(self.anchor, self.tower + ((kind, c),))

    def ancestors(self) -> List["BubblePoint"]:
        return [BubblePoint._canonical(self.anchor, self.tower[:n]) for n in range(self.level)]

    def is_infinitely_near(self, other: "BubblePoint") -> bool:
        """True if ``self`` lies strictly above ``other`` in the bubble space."""
        return (self.anchor == other.anchor and self.level > other.level
                and self.tower[:other.level] == other.tower)

    def __eq__(self, other):
        return (isinstance(other, BubblePoint) and self.anchor == other.anchor
                and self.tower == other.tower)

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (self.level, tuple(self.anchor.coords),
                tuple((0 if k == FIRST else 1, c) for k, c in self.tower))

    def __str__(self):
        parts = [str(self.anchor)]
        for kind, c in self.tower:
            parts.append(f"{kind} {fmt_rational(c)}")
        return " > ".join(parts)

    __repr__ = __str__

    def to_json(self) -> dict:
        return {"anchor": str(self.anchor),
                "tower": [[kind, fmt_rational(c)] for kind, c in self.tower]}

    @classmethod
    def from_json(cls, data) -> "BubblePoint":
        return cls(ProjPoint.parse(data["anchor"]), [(k, c) for k, c in data["tower"]])


# -- chart maps -------------------------------------------------------------

def chart_down(kind: str, c, u, v):
    """Coordinates one level down of the point (u, v) of a chart."""
    if kind == FIRST:
        return u, u * (v + c)
    return (u + c) * v, v


def to_homogeneous(anchor: ProjPoint, X, Y, one):
    k, i, j = proper_axes(anchor)
    out = [None, None, None]
    out[k] = one
    out[i] = X + anchor[i]
    out[j] = Y + anchor[j]
    return out


# -- germs ------------------------------------------------------------------

@dataclass(frozen=True)
class LinearSystemGerm:
    """Three local polynomials in (u, v) at the origin of a chart."""

    components: Tuple[MultiPoly, MultiPoly, MultiPoly]
    divisions: int = 0

    def order(self) -> int:
        return min(c.order() for c in self.components if not c.is_zero())

    def is_base_point(self) -> bool:
        return all(c.constant_term() == 0 for c in self.components)

    def translate(self, a, b) -> "LinearSystemGerm":
        if not a and not b:
            return self
        images = [U + a, V + b]
        return LinearSystemGerm(tuple(c.substitute(images) for c in self.components),
                                self.divisions)


def proper_germ(components: Sequence[MultiPoly], anchor: ProjPoint) -> LinearSystemGerm:
    images = to_homogeneous(anchor, U, V, MultiPoly.one(2))
    return LinearSystemGerm(tuple(c.substitute(images) for c in components))


def _first_chart(p: MultiPoly, m: int) -> MultiPoly:
    # X^a Y^b -> u^(a+b-m) v^b
    return p.map_exponents(lambda e: (e[0] + e[1] - m, e[1]))


def _second_chart(p: MultiPoly, m: int) -> MultiPoly:
    # X^a Y^b -> u^a v^(a+b-m)
    return p.map_exponents(lambda e: (e[0], e[0] + e[1] - m))


def strict_transform(p: MultiPoly, kind: str, c=0) -> MultiPoly:
    """Strict transform of a local curve through the origin in a blow-up chart,
    translated so the chart point (0, c) (first) or (c, 0) (second) is the origin."""
    m = p.order()
    out = _first_chart(p, m) if kind == FIRST else _second_chart(p, m)
    if c:
        out = out.substitute([U, V + c] if kind == FIRST else [U + c, V])
    return out


def blow_up_ascend(germ: LinearSystemGerm):
    """Blow up the chart origin: ``(first-chart germ, second-chart germ, m)``.

    Each component is pulled back and divided by the m-th power of the
    exceptional equation, m being the multiplicity of the system at the origin.
    """
    if not germ.is_base_point():
        raise NotABasePoint("some component does not vanish at the origin")
    m = germ.order()
    first = LinearSystemGerm(tuple(_first_chart(c, m) for c in germ.components),
                             germ.divisions + m)
    second = LinearSystemGerm(tuple(_second_chart(c, m) for c in germ.components),
                              germ.divisions + m)
    return first, second, m


def initial_forms(germ: LinearSystemGerm) -> List[MultiPoly]:
    m = germ.order()
    return [c.homogeneous_part(m) for c in germ.components]
