"""Base points of a plane map: proper ones by elimination, infinitely near
ones by recursive blow-up of the local linear system."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .algebra import ops
from .algebra.modular import squarefree_resultant
from .algebra.multipoly import MultiPoly
from .algebra.unipoly import UniPoly, rational_roots
from .bubble import (
    FIRST, SECOND, U, V, BubblePoint, LinearSystemGerm, blow_up_ascend, initial_forms,
    proper_germ, strict_transform,
)
from .errors import IrrationalBaseLocus, NoetherMismatch
from .planemap import Automorphism, PlaneMap, ProjPoint


# -- proper base points -----------------------------------------------------

def _uni(p: MultiPoly, var: int) -> UniPoly:
    return ops.univariate(p, var)


def _sympy_gcd(polys: List[UniPoly]) -> UniPoly:
    polys = [p for p in polys if p]
    if not polys:
        return UniPoly()
    g = polys[0].to_sympy()
    for p in polys[1:]:
        g = g.gcd(p.to_sympy())
        if g.degree() == 0:
            break
    return UniPoly.from_sympy(g).monic()


def _restrict(p: MultiPoly, values: Dict[int, object], keep: int) -> UniPoly:
    """Substitute constants for the variables in ``values``; univariate in ``keep``."""
    coeffs: Dict[int, object] = {}
    for e, c in p.terms.items():
        t = c
        for var, val in values.items():
            if e[var]:
                t = t * val ** e[var]
        coeffs[e[keep]] = coeffs.get(e[keep], 0) + t
    deg = max(coeffs) if coeffs else 0
    return UniPoly([coeffs.get(k, 0) for k in range(deg + 1)])


def _multiplicity_at(components, point: ProjPoint) -> int:
    return proper_germ(components, point).order()


def _try_locate(f: PlaneMap, rng: random.Random, bound: int):
    comps = f.components
    d = f.degree
    M = Automorphism.random(rng, bound=bound, max_den=1)
    moved = [c.substitute(list(M.linear_forms())) for c in comps]
    # no base point on the line z = 0 of the moved system
    if all(c.evaluate((1, 0, 0)) == 0 for c in moved):
        return None
    at_infinity = _sympy_gcd([_restrict(c, {1: 1, 2: 0}, 0) for c in moved])
    if at_infinity.degree() > 0:
        return None
    combos = []
    for _ in range(3):
        w = [rng.randint(-bound, bound) for _ in range(3)]
        combos.append(sum((c.scale(a) for c, a in zip(moved, w) if a), MultiPoly.zero()))
    ydeg = tuple([0, d, 0])
    if any(c.terms.get(ydeg, 0) == 0 for c in combos):
        return None
    affine = [c.map_exponents(lambda e: (e[0], e[1]), 2) for c in combos]
    r_ab = squarefree_resultant(affine[0], affine[1])
    r_ac = squarefree_resultant(affine[0], affine[2])
    if r_ab.is_zero() or r_ac.is_zero():
        return None
    g = _sympy_gcd([r_ab, r_ac])
    xs = rational_roots(g) if g.degree() > 0 else None
    points = []
    residual = [] if xs is None or xs.complete else [xs.residual]
    for x0 in (xs.distinct() if xs else []):
        ys = _sympy_gcd([_restrict(c, {0: x0, 2: 1}, 1) for c in moved])
        if ys.degree() <= 0:
            continue
        rep = rational_roots(ys)
        if not rep.complete:
            residual.append(rep.residual)
        for y0 in rep.distinct():
            points.append(M.apply((x0, y0, 1)))
    return points, residual


def proper_base_points(f: PlaneMap, seed: int = 0, attempts: int = 12
                       ) -> List[Tuple[ProjPoint, int]]:
    """Rational indeterminacy points of ``f`` with their multiplicities, sorted.

    The system is moved by a random projective change so that two generic
    members are monic in y with no common zero at infinity, then the
    x-coordinates are the rational roots of the gcd of two resultants.
    """
    if f.degree == 1:
        vals = _linear_kernel(f)
        return [(vals, 1)] if vals is not None else []
    rng = random.Random(seed)
    residual_seen = 0
    last_residual = None
    for attempt in range(attempts):
        found = _try_locate(f, rng, bound=3 + attempt)
        if found is None:
            continue
        points, residual = found
        if residual:
            # confirm with a fresh projection before declaring the locus irrational
            residual_seen += 1
            last_residual = residual
            if residual_seen < 2:
                continue
            raise IrrationalBaseLocus(
                "base locus has points not defined over Q: residual "
                + ", ".join(str(r) for r in residual), residual)
        for p in points:
            if any(c.evaluate(p.coords) for c in f.components):
                raise AssertionError(f"located point {p} is not a common zero")
        uniq = sorted(set(points), key=lambda p: tuple(p.coords))
        return [(p, _multiplicity_at(f.components, p)) for p in uniq]
    if last_residual is not None:
        raise IrrationalBaseLocus("base locus has points not defined over Q", last_residual)
    raise ArithmeticError("could not find a generic projection for base-point location")


def _linear_kernel(f: PlaneMap) -> Optional[ProjPoint]:
    from sympy import Matrix

    rows = [[c.terms.get(e, 0) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))] for c in f.components]
    ker = Matrix(rows).nullspace()
    if not ker:
        return None
    if len(ker) > 1:
        raise IrrationalBaseLocus("linear map with a line of indeterminacy")
    return ProjPoint(tuple(ker[0]))


# -- trees ------------------------------------------------------------------

@dataclass(frozen=True)
class TreeNode:
    index: int
    point: BubblePoint
    multiplicity: int
    parent: Optional[int]
    proximate: Tuple[int, ...]

    @property
    def satellites(self) -> Tuple[int, ...]:
        return tuple(a for a in self.proximate if a != self.parent)


@dataclass
class NoetherReport:
    degree: int
    sum_m: int
    sum_m2: int
    proximity_failures: List[Tuple[int, int, int]] = field(default_factory=list)

    @property
    def expected(self) -> Tuple[int, int]:
        return 3 * (self.degree - 1), self.degree ** 2 - 1

    @property
    def passed(self) -> bool:
        return (self.sum_m, self.sum_m2) == self.expected and not self.proximity_failures

    def summary(self) -> str:
        e1, e2 = self.expected
        s = f"sum m = {self.sum_m} (expected {e1}), sum m^2 = {self.sum_m2} (expected {e2})"
        for j, m, tot in self.proximity_failures:
            s += f"; proximity fails at p_{j}: {m} < {tot}"
        return s

    def to_json(self) -> dict:
        e1, e2 = self.expected
        return {"passed": self.passed, "sum_m": self.sum_m, "expected_sum_m": e1,
                "sum_m2": self.sum_m2, "expected_sum_m2": e2,
                "proximity_failures": [list(x) for x in self.proximity_failures]}


@dataclass(frozen=True)
class BasePointTree:
    degree: int
    nodes: Tuple[TreeNode, ...]

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def node(self, index: int) -> TreeNode:
        return self.nodes[index - 1]

    @property
    def points(self) -> List[BubblePoint]:
        return [n.point for n in self.nodes]

    @property
    def multiplicities(self) -> List[int]:
        return [n.multiplicity for n in self.nodes]

    def index_of(self, p: BubblePoint) -> Optional[int]:
        for n in self.nodes:
            if n.point == p:
                return n.index
        return None

    def __contains__(self, p: BubblePoint) -> bool:
        return self.index_of(p) is not None

    def proximity_edges(self) -> List[Tuple[int, int]]:
        return [(n.index, a) for n in self.nodes for a in n.proximate]

    def satellite_edges(self) -> List[Tuple[int, int]]:
        return [(n.index, a) for n in self.nodes for a in n.satellites]

    def height(self) -> int:
        return max((n.point.level + 1 for n in self.nodes), default=0)

    def is_single_chain(self) -> bool:
        if not self.nodes:
            return False
        return all(n.parent == (None if n.index == 1 else n.index - 1) for n in self.nodes)

    def noether(self) -> NoetherReport:
        ms = self.multiplicities
        fails = []
        for n in self.nodes:
            tot = sum(o.multiplicity for o in self.nodes if n.index in o.proximate)
            if n.multiplicity < tot:
                fails.append((n.index, n.multiplicity, tot))
        return NoetherReport(self.degree, sum(ms), sum(m * m for m in ms), fails)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "nodes": [{"label": f"p_{n.index}", "multiplicity": n.multiplicity,
                       **n.point.to_json()} for n in self.nodes],
            "edges": [{"from": f"p_{n.index}", "to": f"p_{a}",
                       "kind": "succession" if a == n.parent else "satellite"}
                      for n in self.nodes for a in n.proximate],
        }

    def to_dot(self, name: str = "base_points", prefix: str = "p") -> str:
        lines = [f"digraph {name} {{", "  rankdir=RL;"]
        for n in self.nodes:
            lines.append(f'  {prefix}{n.index} [label="{prefix}_{n.index} (m={n.multiplicity})"];')
        for n in self.nodes:
            for a in n.proximate:
                style = "solid" if a == n.parent else "dashed"
                lines.append(f"  {prefix}{n.index} -> {prefix}{a} [style={style}];")
        lines.append("}")
        return "\n".join(lines)


def _grow(point: BubblePoint, germ: LinearSystemGerm, divisors, parent, out, limit):
    if len(out) > limit:
        raise NoetherMismatch(NoetherReport(-1, -1, -1))
    node_id = len(out)
    first, second, m = blow_up_ascend(germ)
    out.append((point, m, parent, tuple(i for i, _ in divisors)))
    forms = initial_forms(germ)
    # directions (1:c): common roots of h(1, v)
    unis = []
    for h in forms:
        coeffs = [0] * (m + 1)
        for (a, b), c in h.terms.items():
            coeffs[b] = c
        unis.append(UniPoly(coeffs))
    g = _sympy_gcd(unis)
    children = []
    if g.degree() > 0:
        rep = rational_roots(g)
        if not rep.complete:
            raise IrrationalBaseLocus(
                f"base points infinitely near {point} are not defined over Q: {rep.residual}",
                rep.residual)
        for c in rep.distinct():
            children.append((FIRST, c))
    if all(h.terms.get((0, m), 0) == 0 for h in forms):
        children.append((SECOND, 0))
    for kind, c in children:
        if kind == FIRST:
            child_germ = first.translate(0, c)
            new_div = [(node_id, U)]
        else:
            child_germ = second
            new_div = [(node_id, V)]
        for i, d in divisors:
            dt = strict_transform(d, kind, c)
            if dt.constant_term() == 0:
                new_div.append((i, dt))
        child = BubblePoint._canonical(point.anchor, point.tower + ((kind, c),))
        _grow(child, child_germ, new_div, node_id, out, limit)


def _build_tree(f: PlaneMap, seed: int) -> BasePointTree:
    raw = []
    limit = max(f.degree ** 2, 4)
    for anchor, _ in proper_base_points(f, seed=seed):
        germ = proper_germ(f.components, anchor)
        _grow(BubblePoint._canonical(anchor, ()), germ, [], None, raw, limit)
    order = sorted(range(len(raw)), key=lambda i: raw[i][0].sort_key())
    label = {old: new + 1 for new, old in enumerate(order)}
    nodes = []
    for old in order:
        point, m, parent, prox = raw[old]
        nodes.append(TreeNode(label[old], point, m,
                              None if parent is None else label[parent],
                              tuple(sorted(label[i] for i in prox))))
    return BasePointTree(f.degree, tuple(nodes))


@lru_cache(maxsize=512)
def _tree_cached(f: PlaneMap, seed: int) -> BasePointTree:
    return _build_tree(f, seed)


def base_point_tree(f: PlaneMap, check: bool = True, seed: int = 0) -> BasePointTree:
    """All base points of ``f``, proper and infinitely near.

    With ``check`` the Noether equalities and proximity inequalities must hold,
    otherwise :class:`NoetherMismatch` is raised.
    """
    tree = _tree_cached(f, seed)
    if check:
        report = tree.noether()
        if not report.passed:
            raise NoetherMismatch(report)
    return tree


def b_count(f: PlaneMap) -> int:
    return len(base_point_tree(f))


def noether_check(tree: BasePointTree) -> NoetherReport:
    return tree.noether()
