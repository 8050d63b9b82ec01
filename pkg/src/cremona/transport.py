"""The transport p -> f^.(p) of bubble points that are not base points.

A non-base point p has a neighbourhood on which the lifted map is a local
isomorphism onto a neighbourhood of f^.(p).  So an arc through p with
tangent direction (1 : s), written in p's top chart, maps to an arc through
f^.(p) whose next infinitely near point moves with s.  Pushing the image arc
down to P^2 and re-ascending the target towers canonically, the towers of two
different directions agree exactly up to f^.(p).
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .algebra.multipoly import MultiPoly
from .algebra.rational import ONE, ZERO, as_rational
from .algebra.series import Series
from .bubble import FIRST, SECOND, BubblePoint, chart_down, proper_axes, to_homogeneous
from .errors import DepthExceeded, IsBasePoint
from .planemap import IDENTITY, PlaneMap, ProjPoint

DIRECTIONS = (ONE, as_rational(-2), as_rational(3))
MAX_PRECISION = 4096


def arc_through(p: BubblePoint, s, prec: int) -> List[Series]:
    """Homogeneous coordinates of the arc (t, s t) of p's top chart."""
    u = Series.t(prec)
    v = Series.t(prec, s)
    for kind, c in reversed(p.tower):
        u, v = chart_down(kind, c, u, v)
    return to_homogeneous(p.anchor, u, v, Series.const(ONE, prec))


def _apply(components: Sequence[MultiPoly], arc: List[Series]) -> List[Series]:
    prec = min(a.prec for a in arc)
    cache = [{0: Series.const(ONE, prec), 1: a} for a in arc]

    def power(i, k):
        table = cache[i]
        if k not in table:
            half = power(i, k // 2)
            sq = half * half
            table[k] = sq * arc[i] if k % 2 else sq
        return table[k]

    out = []
    for comp in components:
        acc = Series([], prec)
        for e, c in comp.terms.items():
            term = None
            for i, k in enumerate(e):
                if k:
                    term = power(i, k) if term is None else term * power(i, k)
            acc = acc + (term.scale(c) if term is not None else Series.const(c, prec))
        out.append(acc)
    return out


class _PrecisionLost(Exception):
    pass


def _descend(arc: List[Series], depth: int) -> Tuple[ProjPoint, List[Tuple[str, object]], bool]:
    """Limit point and canonical tower (up to ``depth`` levels) of an arc.

    Returns ``(anchor, steps, exhausted)`` where ``exhausted`` means the
    precision ran out before ``depth`` levels were read.
    """
    orders = [a.order() for a in arc]
    known = [o for o in orders if o is not None]
    if not known:
        raise _PrecisionLost
    k0 = min(known)
    arc = [a.shift_down(k0) for a in arc]
    anchor = ProjPoint(tuple(a[0] for a in arc))
    k, i, j = proper_axes(anchor)
    inv = arc[k].inverse()
    X = arc[i] * inv - anchor[i]
    Y = arc[j] * inv - anchor[j]
    steps = []
    # consecutive first-chart steps keep X, second-chart steps keep Y: the
    # shifted divisor's inverse is reused along such runs
    inv_cache = {}

    def divide(num, den, k):
        key = (id(den), num.prec)
        if key not in inv_cache:
            inv_cache.clear()
            inv_cache[key] = (den, den.shift_down(k).inverse())
        return num.shift_down(k) * inv_cache[key][1]

    while len(steps) < depth:
        a, b = X.order(), Y.order()
        a_lb = X.prec if a is None else a
        b_lb = Y.prec if b is None else b
        if a is not None and a <= b_lb:
            if b is not None and b < a:
                raise ZeroDivisionError
            q = divide(Y, X, a)
            if q.prec <= 0:
                return anchor, steps, True
            c = q[0]
            steps.append((FIRST, c))
            Y = q - c
        elif b is not None and b < a_lb:
            q = divide(X, Y, b)
            if q.prec <= 0:
                return anchor, steps, True
            steps.append((SECOND, ZERO))
            X = q
        else:
            return anchor, steps, True
        if X.prec <= 1 or Y.prec <= 1:
            return anchor, steps, True
    return anchor, steps, False


def _image_tower(components, p: BubblePoint, s, prec: int, depth: int):
    arc = arc_through(p, s, prec)
    image = _apply(components, arc)
    return _descend(image, depth)


def push_forward_point(f: PlaneMap, p: BubblePoint, check_base: bool = True,
                       max_depth: Optional[int] = None) -> BubblePoint:
    """``f^.(p)`` for a bubble point p that is not a base point of f."""
    if check_base and f.degree > 1:
        from .basepoints import base_point_tree

        if p in base_point_tree(f, check=False):
            raise IsBasePoint(p)
    if max_depth is None:
        max_depth = p.level + f.degree ** 2 + 1
    prec = 2 * (p.level + 8)
    while prec <= MAX_PRECISION:
        try:
            result = _compare_directions(f.components, p, prec, max_depth)
        except _PrecisionLost:
            result = None
        if result is not None:
            return result
        prec *= 2
    raise DepthExceeded(f"transport of {p} did not settle within precision {MAX_PRECISION}")


def _compare_directions(components, p, prec, max_depth):
    """Common prefix of the image towers of two directions that separate.

    A direction tangent to a contracted curve has a constant image arc whose
    tower never separates from anything; it is outvoted by the others.
    """
    towers = [_image_tower(components, p, s, prec, max_depth + 1) for s in DIRECTIONS]
    anchors = {a for a, _, _ in towers}
    complete = [a for a, t, ex in towers if not ex or t]
    if len(anchors) > 1:
        raise IsBasePoint(p)
    anchor = towers[0][0]
    answers = set()
    deepest = 0
    for x in range(len(towers)):
        for y in range(x + 1, len(towers)):
            t1, t2 = towers[x][1], towers[y][1]
            common = 0
            while common < min(len(t1), len(t2)) and t1[common] == t2[common]:
                common += 1
            deepest = max(deepest, common)
            if common < min(len(t1), len(t2)):
                answers.add(tuple(t1[:common]))
    if answers:
        if len(answers) > 1:
            # one direction is degenerate: the majority prefix is the deepest one
            # shared by at least two separating pairs
            best = max(answers, key=len)
        else:
            best = answers.pop()
        if len(best) > max_depth:
            raise DepthExceeded(f"image of {p} is deeper than {max_depth} levels")
        return BubblePoint._canonical(anchor, best)
    if deepest > max_depth:
        raise DepthExceeded(f"image of {p} is deeper than {max_depth} levels")
    if any(ex for _, _, ex in towers):
        return None  # need more precision to see the towers separate
    raise DepthExceeded(f"image of {p} is deeper than {max_depth} levels")


def canonicalize(p: BubblePoint) -> BubblePoint:
    """Canonical form of a tower written with arbitrary second-chart records."""
    return push_forward_point(IDENTITY, p, check_base=False)


def composition_functoriality_check(f: PlaneMap, g: PlaneMap, p: BubblePoint) -> bool:
    """``(f o g)^.(p) == f^.(g^.(p))``; preconditions are checked."""
    from .planemap import compose

    gp = push_forward_point(g, p)
    rhs = push_forward_point(f, gp)
    lhs = push_forward_point(compose(f, g), p)
    return lhs == rhs


# -- budgeted transport along orbits ---------------------------------------

class PartialPoint:
    """A transported point known through a tower prefix.

    ``exact`` means the towers of different directions were seen to separate,
    so the prefix is the whole point; otherwise the point lies at or above the
    end of the prefix.
    """

    __slots__ = ("anchor", "prefix", "exact")

    def __init__(self, anchor: ProjPoint, prefix, exact: bool):
        self.anchor, self.prefix, self.exact = anchor, tuple(prefix), exact

    @property
    def min_level(self) -> int:
        return len(self.prefix)

    def point(self) -> BubblePoint:
        if not self.exact:
            raise ValueError("point only known through a prefix")
        return BubblePoint._canonical(self.anchor, self.prefix)

    def compare(self, q: BubblePoint) -> Optional[bool]:
        """Equality with a concrete point: True, False, or None if undecided."""
        if self.anchor != q.anchor:
            return False
        n = min(len(self.prefix), q.level)
        if self.prefix[:n] != q.tower[:n]:
            return False
        if self.exact:
            return len(self.prefix) == q.level
        if len(self.prefix) > q.level:
            return False
        return None

    def __str__(self):
        s = str(BubblePoint._canonical(self.anchor, self.prefix))
        return s if self.exact else s + " > ..."

    __repr__ = __str__


def _apply_arc(components, arc: List[Series]) -> List[Series]:
    image = _apply(components, arc)
    orders = [a.order() for a in image]
    known = [o for o in orders if o is not None]
    if not known:
        raise _PrecisionLost
    k = min(known)
    return [a.shift_down(k) for a in image] if k else image


class ArcOrbit:
    """Images of generic arcs through a base point under g, g^2, ...

    The i-th image locates (g^i)^.(base) as long as the base is not a base
    point of g^i.  Towers are read lazily: ``image(m, depth)`` reads only as
    many levels as the caller needs, since precision grows quickly with depth.
    Coefficient heights grow geometrically with the number of applications of
    g, so whenever an orbit point has been located exactly the arcs restart
    from it (``rebase``).
    """

    def __init__(self, start: BubblePoint, g: PlaneMap):
        self.g = g
        self.cache: dict = {0: PartialPoint(start.anchor, start.tower, True)}
        self.rebase(0, start)

    def rebase(self, index: int, point: BubblePoint):
        self.base_index, self.base = index, point
        self.prec = 4 * (point.level + 4)
        self._reset()

    def _reset(self):
        self.arcs = [[arc_through(self.base, s, self.prec)] for s in DIRECTIONS]

    def refine(self):
        if self.prec >= MAX_PRECISION:
            raise DepthExceeded(f"orbit of {self.base} needs precision beyond {MAX_PRECISION}")
        self.prec = min(2 * self.prec, MAX_PRECISION)
        self._reset()

    def _arc(self, d: int, i: int) -> List[Series]:
        arcs = self.arcs[d]
        while len(arcs) <= i:
            arcs.append(_apply_arc(self.g.components, arcs[-1]))
        return arcs[i]

    def _read(self, m: int, depth: int) -> Optional[PartialPoint]:
        try:
            towers = [_descend(self._arc(d, m - self.base_index), depth)
                      for d in range(len(DIRECTIONS))]
            return _resolve_partial(towers, depth)
        except (_PrecisionLost, ZeroDivisionError):
            return None

    def try_exact(self, m: int, depth: int) -> Optional[BubblePoint]:
        """The m-th point if the current precision already separates directions."""
        known = self.cache.get(m)
        if known is None or not known.exact:
            known = self._read(m, depth)
            if known is None or not known.exact:
                return None
            self.cache[m] = known
        return known.point()

    def image(self, m: int, depth: int) -> PartialPoint:
        known = self.cache.get(m)
        if known is not None and (known.exact or known.min_level >= depth):
            return known
        b = max(i for i, x in self.cache.items() if i < m and x.exact)
        if b != self.base_index:
            self.rebase(b, self.cache[b].point())
        if m > self.base_index + 1:
            prev = self.try_exact(m - 1, self.base.level + 2 * depth + 16)
            if prev is not None:
                self.rebase(m - 1, prev)
        while True:
            result = self._read(m, depth)
            if result is not None:
                if known is None or result.exact or result.min_level > known.min_level:
                    self.cache[m] = result
                return self.cache[m]
            self.refine()


def _resolve_partial(towers, depth) -> Optional[PartialPoint]:
    anchors = {a for a, _, _ in towers}
    if len(anchors) > 1:
        raise IsBasePoint("start point is a base point of the iterate")
    anchor = towers[0][0]
    best, exact = (), False
    for x in range(len(towers)):
        for y in range(x + 1, len(towers)):
            t1, ex1 = towers[x][1], towers[x][2]
            t2, ex2 = towers[y][1], towers[y][2]
            common = 0
            while common < min(len(t1), len(t2)) and t1[common] == t2[common]:
                common += 1
            if common < min(len(t1), len(t2)):
                return PartialPoint(anchor, t1[:common], True)
            if common >= depth and len(t1) >= depth and len(t2) >= depth:
                if len(best) < common:
                    best = tuple(t1[:common])
    if len(best) >= depth:
        return PartialPoint(anchor, best, False)
    return None  # too little precision to read ``depth`` levels
