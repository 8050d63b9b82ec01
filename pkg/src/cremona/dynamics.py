"""Iterates of a plane Cremona map: degrees, base-point counts, persistent
base points and finite-horizon regularizability evidence.

Two independent routes compute b(f^k):

* direct: compose symbolically and build the base-point tree of f^k;
* tracked: transport Base(f) along f^{-1} and Base(f^{-1}) along f.  As long
  as no transported point of Base(f) has landed in Base(f^{-1}),
  Base(f^k) is the disjoint union of (f^{-m})^.(Base f) for m < k.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .basepoints import BasePointTree, base_point_tree
from .bubble import BubblePoint
from .errors import CremonaError, DegreeCapExceeded, IsBasePoint, TransportFailure
from .planemap import (
    DEFAULT_DEGREE_CAP, IDENTITY, Automorphism, PlaneMap, act, compose, inverse,
)
from .transport import ArcOrbit, PartialPoint

REGULARIZABLE = "regularizable-evidence"
NOT_REGULARIZABLE = "not-regularizable-evidence"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DynamicsConfig:
    degree_horizon: int = 3
    b_horizon: int = 12
    persistence_horizon: int = 6
    degree_cap: int = DEFAULT_DEGREE_CAP
    direct_max_degree: int = 25
    seed: int = 0


# -- iterates ---------------------------------------------------------------

class Iterates:
    """Cache of f^k and f^{-k} computed symbolically on demand."""

    def __init__(self, f: PlaneMap, degree_cap: int = DEFAULT_DEGREE_CAP,
                 f_inv: Optional[PlaneMap] = None):
        self.f = f
        self.cap = degree_cap
        self._fwd = [IDENTITY, f]
        self._inv = f_inv

    @property
    def inv(self) -> PlaneMap:
        if self._inv is None:
            self._inv = inverse(self.f)
        return self._inv

    def power(self, k: int) -> PlaneMap:
        while len(self._fwd) <= k:
            self._fwd.append(compose(self.f, self._fwd[-1], self.cap))
        return self._fwd[k]

    def degree_bound(self, k: int) -> int:
        """Degree of f^k if already known, else the product bound."""
        if k < len(self._fwd):
            return self._fwd[k].degree
        return self._fwd[-1].degree * self.f.degree ** (k - len(self._fwd) + 1)


def degree_sequence(f: PlaneMap, n_max: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> List[int]:
    it = Iterates(f, degree_cap)
    return [it.power(n).degree for n in range(1, n_max + 1)]


def b_sequence_direct(f: PlaneMap, k_max: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> List[int]:
    """Brute force: the base-point tree of each symbolically composed iterate."""
    it = Iterates(f, degree_cap)
    return [len(base_point_tree(it.power(k))) for k in range(1, k_max + 1)]


# -- tracked orbits ---------------------------------------------------------

class Orbit:
    """Successive transports (g^m)^.(start) of one base point.

    Orbit points are :class:`PartialPoint` values, read only as deep as the
    comparisons made so far required.  ``length`` counts the indices known to
    be valid transports; ``hit`` is the first index at which the orbit point
    is a base point of g.
    """

    def __init__(self, start: BubblePoint, g: PlaneMap, label: str = "orbit"):
        self.start = start
        self.arcs = ArcOrbit(start, g)
        self.length = 1
        self.hit: Optional[int] = None
        self.label = label
        self.root: Optional["Orbit"] = None

    def _via_root(self, m: int, q: BubblePoint) -> Optional[bool]:
        # start is infinitely near root.start; while root.start is not a base
        # point of g^m the lift of g^m is a local isomorphism there, so the
        # m-th point lies exactly ``height`` levels above the root's m-th point
        root = self.root
        if root is None or root.length <= m:
            return None
        height = self.start.level - root.start.level
        x = root.at(m, max(0, q.level + 1 - height))
        if x.anchor != q.anchor:
            return False
        n = min(len(x.prefix), q.level)
        if x.prefix[:n] != q.tower[:n]:
            return False
        if len(x.prefix) + height > q.level:
            return False
        return None

    def at(self, m: int, depth: int = 0) -> PartialPoint:
        if m == 0:
            return PartialPoint(self.start.anchor, self.start.tower, True)
        if m >= self.length:
            raise IndexError(m)
        try:
            return self.arcs.image(m, depth)
        except CremonaError as exc:
            raise TransportFailure(m, f"{self.label}: {self.start}", exc) from exc

    def same(self, m: int, q: BubblePoint) -> bool:
        """Is the m-th orbit point equal to q?  Reads deeper only when needed."""
        verdict = self._via_root(m, q) if m else None
        if verdict is None:
            verdict = self.at(m, 0).compare(q)
        if verdict is None:
            verdict = self.at(m, q.level + 1).compare(q)
        if verdict is None:
            raise TransportFailure(m, str(self.at(m)), ValueError("orbit point read too shallowly"))
        return verdict

    def grow(self, g_tree: BasePointTree, length: int):
        while self.hit is None:
            m = self.length - 1
            if any(self.same(m, q) for q in g_tree.points):
                self.hit = m
                break
            if self.length >= length:
                break
            self.length += 1

    def describe(self, m: int) -> str:
        own = self.arcs.cache.get(m)
        if own is not None or not m or self.root is None or self.root.length <= m:
            return str(own or self.at(m, 0))
        height = self.start.level - self.root.start.level
        return f"{self.root.describe(m)} (+{height} levels)"


@dataclass
class Collision:
    """The first time a transported base point of f is a base point of f^{-1}."""

    k: int
    B: List[str]
    hits: List[Tuple[int, int]]
    shape: str
    anomaly: Optional[str] = None

    def to_json(self) -> dict:
        return asdict(self)


class Tracker:
    """Tracked structures for Base(f^{+-k}) with a direct-oracle fallback."""

    def __init__(self, f: PlaneMap, degree_cap: int = DEFAULT_DEGREE_CAP,
                 direct_max_degree: int = 25, f_inv: Optional[PlaneMap] = None):
        self.f = f
        self.iterates = Iterates(f, degree_cap, f_inv)
        self.f_inv = self.iterates.inv
        self.inv_iterates = Iterates(self.f_inv, degree_cap, f)
        self.direct_max_degree = direct_max_degree
        self.tree = base_point_tree(f)
        self.inv_tree = base_point_tree(self.f_inv)
        self.p_orbits = [Orbit(n.point, self.f_inv, "p-orbit") for n in self.tree]
        self.q_orbits = [Orbit(n.point, self.f, "q-orbit") for n in self.inv_tree]
        for orbits in (self.p_orbits, self.q_orbits):
            roots = {o.start.anchor: o for o in orbits if o.start.level == 0}
            for o in orbits:
                if o.start.level:
                    o.root = roots.get(o.start.anchor)

    def extend(self, length: int):
        for o in self.p_orbits:
            o.grow(self.inv_tree, length)
        for o in self.q_orbits:
            o.grow(self.tree, length)

    @staticmethod
    def _first_hit(orbits) -> float:
        hits = [o.hit for o in orbits if o.hit is not None]
        return min(hits) if hits else math.inf

    def exact_limit(self, forward: bool = True) -> float:
        """Largest k for which the union formula for Base(f^{+-k}) is exact."""
        return self._first_hit(self.p_orbits if forward else self.q_orbits) + 1

    def in_union(self, p: BubblePoint, k: int, forward: bool = True) -> bool:
        """Is p one of the transports (f^{-+m})^.(base point), m < k?"""
        orbits = self.p_orbits if forward else self.q_orbits
        self.extend(k)
        return any(o.same(m, p) for o in orbits for m in range(k))

    def _direct_tree(self, k: int, forward: bool) -> Optional[BasePointTree]:
        it = self.iterates if forward else self.inv_iterates
        if it.degree_bound(k) > self.direct_max_degree:
            return None
        try:
            return base_point_tree(it.power(k))
        except DegreeCapExceeded:
            return None

    def count(self, k: int) -> Tuple[Optional[int], str]:
        """b(f^k) and the method that produced it."""
        if k == 0:
            return 0, "tracked"
        self.extend(k)
        if k <= self.exact_limit():
            return k * len(self.tree), "tracked"
        tree = self._direct_tree(k, True)
        if tree is not None:
            return len(tree), "direct"
        return None, "truncated"

    def contains(self, p: BubblePoint, k: int) -> Optional[bool]:
        """Is p in Base(f^k) (k > 0) or Base(f^{-|k|}) (k < 0)?  None if unknown."""
        forward = k > 0
        n = abs(k)
        self.extend(n)
        if n <= self.exact_limit(forward):
            return self.in_union(p, n, forward)
        tree = self._direct_tree(n, forward)
        if tree is not None:
            return p in tree
        return None

    def collision(self) -> Optional[Collision]:
        h = self._first_hit(self.p_orbits)
        if h == math.inf:
            return None
        k = int(h) + 1
        qs = self.inv_tree.points
        hits = [(j + 1, i + 1) for j, o in enumerate(self.p_orbits) if o.length >= k
                for i, q in enumerate(qs) if o.same(k - 1, q)]
        labels = sorted({f"q_{i}" for _, i in hits})
        if self.tree.is_single_chain() and self.inv_tree.is_single_chain():
            anomaly = None
            q1 = self.inv_tree.node(1).point
            if self.p_orbits[0].length < k or not self.p_orbits[0].same(k - 1, q1):
                anomaly = "q_1 is not the image of p_1"
            elif labels not in (["q_1"], ["q_1", "q_2"]):
                anomaly = f"B = {labels} is neither {{q_1}} nor {{q_1, q_2}}"
            return Collision(k, labels, hits, "chain", anomaly)
        return Collision(k, labels, hits, "general")


def b_sequence_tracked(f: PlaneMap, k_max: int, degree_cap: int = DEFAULT_DEGREE_CAP,
                       direct_max_degree: int = 25, tracker: Optional[Tracker] = None
                       ) -> Tuple[List[Optional[int]], List[str]]:
    """b(f^k) for k = 1..k_max from the transported orbits; after a collision
    the direct oracle is used while the degree allows, otherwise None."""
    tr = tracker or Tracker(f, degree_cap, direct_max_degree)
    values, methods = [], []
    for k in range(1, k_max + 1):
        b, how = tr.count(k)
        values.append(b)
        methods.append(how)
    return values, methods


# -- persistence ------------------------------------------------------------

@dataclass
class PersistenceRecord:
    representative: str
    members: List[str]
    orbit: List[str]
    in_forward: List[Optional[bool]]
    in_backward: List[Optional[bool]]
    persistent: Optional[bool]
    from_step: Optional[int] = None
    note: str = ""

    def to_json(self) -> dict:
        return asdict(self)


def _classes(tr: Tracker, horizon: int) -> List[List[int]]:
    """Group Base(f) into orbits of the transport (union-find on indices)."""
    n = len(tr.tree)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    pts = tr.tree.points
    for j, o in enumerate(tr.p_orbits):
        for m in range(1, min(o.length, horizon)):
            for i, q in enumerate(pts):
                if o.same(m, q):
                    a, b = find(j), find(i)
                    parent[max(a, b)] = min(a, b)
    groups: Dict[int, List[int]] = {}
    for j in range(n):
        groups.setdefault(find(j), []).append(j)
    return [groups[r] for r in sorted(groups)]


def persistent_classes(f: PlaneMap, horizon: int, tracker: Optional[Tracker] = None,
                       **kw) -> List[PersistenceRecord]:
    """One record per transport class of Base(f).

    A class is flagged persistent when, for some N <= ceil(K/2) and every
    N <= k <= K, its representative lies in Base(f^k) and not in Base(f^{-k}).
    With K < 2 no such certificate is possible and the flag is None.
    """
    if f.degree == 1:
        return []
    tr = tracker or Tracker(f, **kw)
    tr.extend(horizon)
    records = []
    for group in _classes(tr, horizon):
        j = group[0]
        rep = tr.tree.points[j]
        fwd = [tr.contains(rep, k) for k in range(1, horizon + 1)]
        bwd = [tr.contains(rep, -k) for k in range(1, horizon + 1)]
        persistent, start, note = None, None, ""
        if horizon < 2:
            note = "horizon too small"
        else:
            persistent = False
            for N in range(1, math.ceil(horizon / 2) + 1):
                if all(fwd[k - 1] is True and bwd[k - 1] is False for k in range(N, horizon + 1)):
                    persistent, start = True, N
                    break
        records.append(PersistenceRecord(
            representative=f"p_{j + 1}",
            members=[f"p_{i + 1}" for i in group],
            orbit=[tr.p_orbits[j].describe(m) for m in range(min(tr.p_orbits[j].length, horizon))],
            in_forward=fwd, in_backward=bwd,
            persistent=persistent, from_step=start, note=note))
    return records


@dataclass
class MuEstimate:
    lower_bound: int
    upper_bound: int
    exact: bool
    slope: Optional[float]
    b_sequence: List[Optional[int]]
    methods: List[str]
    classes: List[PersistenceRecord]
    collision: Optional[Collision]
    finite_order: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    @property
    def value(self) -> int:
        return self.lower_bound

    def to_json(self) -> dict:
        return {"lower_bound": self.lower_bound, "upper_bound": self.upper_bound,
                "exact": self.exact, "slope": self.slope, "b_sequence": self.b_sequence,
                "methods": self.methods, "finite_order": self.finite_order,
                "classes": [c.to_json() for c in self.classes],
                "collision": None if self.collision is None else self.collision.to_json(),
                "notes": self.notes}


def mu_estimate(f: PlaneMap, horizon: int, tracker: Optional[Tracker] = None,
                b_horizon: Optional[int] = None, **kw) -> MuEstimate:
    """Certified lower bound for mu(f): the number of persistent classes.

    mu(f) <= b(f) always (subadditivity), so the bound is exact when every
    class persists.  A b-sequence that reaches 0 means some iterate is an
    automorphism; then b is bounded and mu = 0 exactly.
    """
    if f.degree == 1:
        return MuEstimate(0, 0, True, 0.0, [0] * horizon, ["direct"] * horizon, [], None, 1,
                          ["automorphism"])
    tr = tracker or Tracker(f, **kw)
    K = b_horizon or horizon
    seq, methods = b_sequence_tracked(f, K, tracker=tr)
    classes = persistent_classes(f, horizon, tracker=tr)
    lower = sum(1 for c in classes if c.persistent)
    upper = len(tr.tree)
    finite = next((k for k, b in enumerate(seq, 1) if b == 0), None)
    known = [(k, b) for k, b in enumerate(seq, 1) if b is not None]
    slope = None
    if len(known) >= 2:
        (k0, b0), (k1, b1) = known[-2], known[-1]
        slope = (b1 - b0) / (k1 - k0)
    notes = []
    exact = lower == upper
    if finite is not None:
        exact = True
        upper = 0
        notes.append(f"f^{finite} is an automorphism")
    if horizon < 2:
        notes.append("horizon too small for persistence certificates")
    return MuEstimate(lower, upper, exact, slope, seq, methods, classes,
                      tr.collision(), finite, notes)


@dataclass
class Verdict:
    level: str
    reasons: List[str]
    mu: MuEstimate

    def to_json(self) -> dict:
        return {"level": self.level, "reasons": self.reasons, "mu": self.mu.to_json()}


def regularizability_verdict(f: PlaneMap, horizon: int, mu: Optional[MuEstimate] = None,
                             **kw) -> Verdict:
    mu = mu or mu_estimate(f, horizon, **kw)
    if mu.lower_bound >= 1:
        reps = [c.representative for c in mu.classes if c.persistent]
        return Verdict(NOT_REGULARIZABLE,
                       [f"persistent class of {r} through horizon {horizon}" for r in reps], mu)
    if mu.finite_order is not None:
        why = ("degree 1: an automorphism" if f.degree == 1
               else f"b(f^{mu.finite_order}) = 0: bounded b sequence")
        return Verdict(REGULARIZABLE, [why], mu)
    return Verdict(INCONCLUSIVE, [f"horizon {horizon} exhausted without a certificate"], mu)


def conjugation_invariance_check(f: PlaneMap, A: Automorphism, horizon: int, **kw) -> bool:
    g = act(A, f, "conjugate")
    return mu_estimate(g, horizon, **kw).lower_bound == mu_estimate(f, horizon, **kw).lower_bound


# -- report -----------------------------------------------------------------

@dataclass
class IterationReport:
    map_id: str
    horizon: int
    degrees: List[int]
    b_tracked: List[Optional[int]]
    methods: List[str]
    b_direct: List[int]
    dynamical_degree: Optional[float]
    mu: MuEstimate
    verdict: Verdict

    def oracle_mismatches(self) -> List[int]:
        return [k for k, (a, b) in enumerate(zip(self.b_tracked, self.b_direct), 1)
                if a is not None and a != b]

    def to_json(self) -> dict:
        return {"map": self.map_id, "horizon": self.horizon, "degrees": self.degrees,
                "b_tracked": self.b_tracked, "methods": self.methods,
                "b_direct": self.b_direct, "dynamical_degree": self.dynamical_degree,
                "mu_lower_bound": self.mu.lower_bound, "mu": self.mu.to_json(),
                "verdict": self.verdict.level, "reasons": self.verdict.reasons,
                "oracle_mismatches": self.oracle_mismatches()}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "degree", "b", "method"])
        for k in range(1, len(self.b_tracked) + 1):
            deg = self.degrees[k - 1] if k <= len(self.degrees) else ""
            b = self.b_tracked[k - 1]
            w.writerow([k, deg, "" if b is None else b, self.methods[k - 1]])
        return buf.getvalue()

    def exit_code(self) -> int:
        if self.oracle_mismatches():
            return 3
        return 2 if self.verdict.level == INCONCLUSIVE else 0


def iteration_report(f: PlaneMap, map_id: str, config: DynamicsConfig = DynamicsConfig()
                     ) -> IterationReport:
    tr = Tracker(f, config.degree_cap, config.direct_max_degree)
    degrees = []
    for n in range(1, config.degree_horizon + 1):
        try:
            degrees.append(tr.iterates.power(n).degree)
        except DegreeCapExceeded:
            break
    b_tracked, methods = b_sequence_tracked(f, config.b_horizon, tracker=tr)
    b_direct = []
    for k in range(1, config.b_horizon + 1):
        tree = tr._direct_tree(k, True)
        if tree is None:
            break
        b_direct.append(len(tree))
    lam = degrees[-1] ** (1 / len(degrees)) if degrees else None
    mu = mu_estimate(f, config.persistence_horizon, tracker=tr, b_horizon=config.b_horizon)
    verdict = regularizability_verdict(f, config.persistence_horizon, mu=mu)
    return IterationReport(map_id, config.b_horizon, degrees, b_tracked, methods, b_direct,
                           lam, mu, verdict)
