"""Seeded randomized invariants over small Cremona maps.

Shared by the test-suite and the ``verify-paper`` harness.  Each instance
draws maps of degree at most 3 so that trees, inverses and compositions stay
cheap, and records any violated invariant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

from .basepoints import base_point_tree
from .errors import IsBasePoint
from .planemap import Automorphism, PlaneMap, ProjPoint, act, compose, inverse
from .registry import shear_x, shear_y, sigma
from .transport import composition_functoriality_check
from .bubble import BubblePoint


def random_cremona(rng: random.Random, bound: int = 3) -> PlaneMap:
    """A o g o B for a random small generator g (quadratic involution or a shear)."""
    g = rng.choice([sigma, lambda: shear_x(2), lambda: shear_y(2), lambda: shear_y(3)])()
    A = Automorphism.random(rng, bound=bound, max_den=2)
    B = Automorphism.random(rng, bound=bound, max_den=2)
    return act(A, act(B, g, "right"), "left")


def random_point(rng: random.Random, bound: int = 20) -> ProjPoint:
    while True:
        c = [rng.randint(-bound, bound) for _ in range(3)]
        if any(c):
            return ProjPoint.of(*c)


def check_subadditivity(f: PlaneMap, g: PlaneMap) -> List[str]:
    h = compose(f, g)
    out = []
    if h.degree > f.degree * g.degree:
        out.append(f"deg(fg)={h.degree} > {f.degree}*{g.degree}")
    bf, bg, bh = (len(base_point_tree(m)) for m in (f, g, h))
    if bh > bf + bg:
        out.append(f"b(fg)={bh} > {bf}+{bg}")
    return out


def check_tree(f: PlaneMap) -> List[str]:
    report = base_point_tree(f, check=False).noether()
    return [] if report.passed else [report.summary()]


def check_roundtrip(f: PlaneMap) -> List[str]:
    g = inverse(f)
    out = []
    if not compose(f, g).is_identity():
        out.append("f o f^-1 is not the identity")
    if not compose(g, f).is_identity():
        out.append("f^-1 o f is not the identity")
    return out


def check_functoriality(f: PlaneMap, g: PlaneMap, rng: random.Random) -> List[str]:
    for _ in range(20):
        p = BubblePoint(random_point(rng))
        try:
            ok = composition_functoriality_check(f, g, p)
        except IsBasePoint:
            continue
        return [] if ok else [f"(fg)^.({p}) != f^.(g^.({p}))"]
    return []


@dataclass
class PropertyReport:
    instances: int = 0
    failures: List[Tuple[str, int, str]] = field(default_factory=list)
    per_property: Dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures and self.instances > 0

    def to_json(self) -> dict:
        return {"instances": self.instances, "per_property": self.per_property,
                "failures": [list(f) for f in self.failures]}


def run_properties(seed: int = 0, per_property: int = 25) -> PropertyReport:
    """Four invariants, ``per_property`` seeded instances each."""
    rng = random.Random(seed)
    report = PropertyReport()
    checks: Dict[str, Callable[[random.Random], List[str]]] = {
        "subadditivity": lambda r: check_subadditivity(random_cremona(r), random_cremona(r)),
        "noether-proximity": lambda r: check_tree(random_cremona(r)),
        "roundtrip": lambda r: check_roundtrip(random_cremona(r)),
        "functoriality": lambda r: check_functoriality(random_cremona(r), random_cremona(r), r),
    }
    for name, check in checks.items():
        for i in range(per_property):
            for msg in check(rng):
                report.failures.append((name, i, msg))
            report.instances += 1
            report.per_property[name] = report.per_property.get(name, 0) + 1
    return report
