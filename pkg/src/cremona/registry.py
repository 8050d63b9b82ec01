"""Named example maps."""

from __future__ import annotations

import json
import random
from typing import Callable, Dict, List

from .planemap import IDENTITY, Automorphism, PlaneMap, compose, parse_map

PSI_TEXT = "(x^2*y*z^2 - z^5 + x^5 : x^2*(x^2*y - z^3) : x*z*(x^2*y - z^3))"
CHI_TEXT = "(x*z^5 + (y*z^2 + x^3)^2 : y*z^5 + x^3*z^3 : z^6)"
SIGMA_TEXT = "(y*z : x*z : x*y)"


def psi() -> PlaneMap:
    return parse_map(PSI_TEXT)


def chi() -> PlaneMap:
    return parse_map(CHI_TEXT)


def sigma() -> PlaneMap:
    return parse_map(SIGMA_TEXT)


def identity() -> PlaneMap:
    return IDENTITY


def shear_x(n: int) -> PlaneMap:
    """(x + y^n, y) in the chart z = 1, homogenized."""
    return parse_map(f"(x*z^{n - 1} + y^{n} : y*z^{n - 1} : z^{n})")


def shear_y(p: int) -> PlaneMap:
    """(x, y + x^p) in the chart z = 1, homogenized."""
    return parse_map(f"(x*z^{p - 1} : y*z^{p - 1} + x^{p} : z^{p})")


def chi_np(n: int, p: int) -> PlaneMap:
    return compose(shear_x(n), shear_y(p))


def random_automorphisms(seed: int, count: int) -> List[Automorphism]:
    rng = random.Random(seed)
    return [Automorphism.random(rng) for _ in range(count)]


NAMED: Dict[str, Callable[[], PlaneMap]] = {
    "psi": psi,
    "chi": chi,
    "sigma": sigma,
    "identity": identity,
}


def resolve(spec: str, n: int = 2, p: int = 3) -> PlaneMap:
    """A registry name, ``chi_np``/``shear_x``/``shear_y`` (using n, p), a JSON
    map object, or map text."""
    key = spec.strip()
    if key in NAMED:
        return NAMED[key]()
    if key == "chi_np":
        return chi_np(n, p)
    if key == "shear_x":
        return shear_x(n)
    if key == "shear_y":
        return shear_y(p)
    if key.startswith("{"):
        return PlaneMap.from_json(json.loads(key))
    return parse_map(key)
