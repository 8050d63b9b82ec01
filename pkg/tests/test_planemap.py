import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from cremona.algebra import ops
from cremona.algebra.grammar import ParseError, parse_poly as P
from cremona.errors import (
    DegreeCapExceeded, DegreeMismatch, IndeterminatePoint, InhomogeneousComponent, NotBirational,
    ZeroMap,
)
from cremona.planemap import (
    IDENTITY, Automorphism, PlaneMap, ProjPoint, act, compose, contracted_curves, evaluate,
    inverse, is_birational, jacobian, parse_map,
)
from cremona.properties import random_cremona
from cremona.registry import CHI_TEXT, PSI_TEXT, chi_np, shear_x, shear_y, sigma


def monic_set(polys):
    return {p.monic().to_str() for p in polys}


# parsing -------------------------------------------------------------------

def test_parse_sigma_and_psi(psi_map):
    s = parse_map("(y*z : x*z : x*y)")
    assert s.degree == 2 and s == sigma()
    assert psi_map.degree == 5
    assert psi_map.components[0] == P("x^2*y*z^2 - z^5 + x^5")


def test_common_factor_is_removed():
    assert parse_map("(x*z : y*z : z^2)") == IDENTITY
    assert parse_map("(x*z : y*z : z^2)").degree == 1


@pytest.mark.parametrize("text, exc", [
    ("(x : y)", ParseError),
    ("(x + y^2 : y : z)", InhomogeneousComponent),
    ("(x^2 : y : z)", DegreeMismatch),
    ("(0 : 0 : 0)", ZeroMap),
    ("(x : y : z", ParseError),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_map(text)


def test_canonical_roundtrip_and_json(psi_map):
    for f in (psi_map, sigma(), chi_np(2, 3)):
        assert parse_map(f.to_str()) == f
        data = json.loads(json.dumps(f.to_json()))
        assert data["degree"] == f.degree
        assert PlaneMap.from_json(data) == f


# composition ---------------------------------------------------------------

def test_compose_examples(psi_map):
    assert compose(sigma(), sigma()) == IDENTITY
    assert compose(psi_map, IDENTITY) == psi_map
    assert compose(IDENTITY, psi_map) == psi_map
    assert compose(psi_map, psi_map).degree == 25


def test_degree_cap(psi_map):
    with pytest.raises(DegreeCapExceeded):
        compose(psi_map, psi_map, degree_cap=20)


@settings(max_examples=100)
@given(st.integers(0, 2 ** 32))
def test_compose_associative_and_subadditive(seed):
    rng = random.Random(seed)
    f, g, h = (random_cremona(rng) for _ in range(3))
    fg = compose(f, g)
    assert fg.degree <= f.degree * g.degree
    assert compose(fg, h) == compose(f, compose(g, h))


# evaluation ----------------------------------------------------------------

def test_evaluate(psi_map):
    with pytest.raises(IndeterminatePoint):
        evaluate(psi_map, ProjPoint.of(0, 1, 0))
    assert evaluate(psi_map, ProjPoint.of(0, 0, 1)) == ProjPoint.of(1, 0, 0)
    p = ProjPoint.of(3, -2, 7)
    assert evaluate(IDENTITY, p) == p


def test_projpoint_canonical_scaling():
    assert ProjPoint.of(0, 2, 4) == ProjPoint.of(0, 1, 2)
    assert str(ProjPoint.of(0, 2, 4)) == "(0:1:2)"
    assert ProjPoint.parse("0:1:0") == ProjPoint.of(0, 1, 0)


# automorphisms ---------------------------------------------------------------

def test_act_examples(psi_map):
    I = Automorphism.identity()
    assert act(I, psi_map, "left") == psi_map
    rng = random.Random(7)
    for _ in range(3):
        A = Automorphism.random(rng)
        assert act(A, psi_map, "left").degree == 5
        assert act(A, psi_map, "right").degree == 5
    for perm in ([1, 0, 2], [1, 2, 0], [2, 0, 1]):
        assert act(Automorphism.permutation(perm), sigma(), "conjugate") == sigma()


def test_automorphism_inverse():
    A = Automorphism.random(random.Random(3))
    assert compose(A.as_map(), A.inverse().as_map()) == IDENTITY


# jacobians -------------------------------------------------------------------

def test_jacobian_examples(psi_map):
    assert jacobian(IDENTITY).is_constant() and not jacobian(IDENTITY).is_zero()
    J = jacobian(sigma())
    assert J.degree() == 3 and J.monic() == P("x*y*z")
    Jp = jacobian(psi_map)
    assert Jp.degree() == 12
    # c * x^a * (x^2 y - z^3)^b with a + 3b = 12
    C = P("x^2*y - z^3")
    b = 0
    rest = Jp
    while ops.divides(C, rest):
        rest, b = ops.exact_divide(rest, C), b + 1
    a = 12 - 3 * b
    assert b >= 1 and rest.monic() == P(f"x^{a}").monic()


@settings(max_examples=100)
@given(st.integers(0, 2 ** 32))
def test_jacobian_degree(seed):
    f = random_cremona(random.Random(seed))
    assert jacobian(f).degree() == 3 * (f.degree - 1)


# contracted curves -----------------------------------------------------------

def test_contracted_curves_of_psi(psi_map):
    curves = contracted_curves(psi_map)
    assert monic_set(c.equation for c in curves) == monic_set([P("x"), P("x^2*y - z^3")])
    assert {c.image for c in curves} == {ProjPoint.of(1, 0, 0)}
    J = jacobian(psi_map)
    assert all(ops.divides(c.equation, J) for c in curves)


def test_contracted_curves_of_inverse(psi_inv):
    curves = contracted_curves(psi_inv)
    assert monic_set(c.equation for c in curves) == monic_set([P("y"), P("z^2 - x*y")])
    assert {c.image for c in curves} == {ProjPoint.of(0, 1, 0)}


def test_contracted_curves_trivial():
    assert contracted_curves(IDENTITY) == []
    lines = contracted_curves(sigma())
    assert monic_set(c.equation for c in lines) == {"x", "y", "z"}


# inverses --------------------------------------------------------------------

def test_inverse_examples(psi_map, psi_inv):
    assert inverse(sigma()) == sigma()
    assert inverse(IDENTITY) == IDENTITY
    assert psi_inv.degree == psi_map.degree == 5
    assert compose(psi_inv, psi_map) == IDENTITY
    assert compose(psi_map, psi_inv) == IDENTITY
    assert psi_inv == parse_map("(x*y^4 - y^3*z^2 : x*y*z^3 + y^5 - z^5 : x*y^3*z - y^2*z^3)")


def test_birationality():
    assert is_birational(sigma())
    assert not is_birational(parse_map("(x^2 : y^2 : z^2)"))
    with pytest.raises(NotBirational):
        inverse(parse_map("(x^2 : y^2 : z^2)"))
    assert is_birational(chi_np(2, 3))


def test_chi_is_the_shear_composition():
    chi = parse_map(CHI_TEXT)
    assert chi == compose(shear_x(2), shear_y(3)) == chi_np(2, 3)
    assert chi.degree == 6


@pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (3, 2)])
def test_family_degrees(n, p):
    f = chi_np(n, p)
    assert f.degree == n * p
    assert inverse(f).degree == f.degree


@settings(max_examples=100)
@given(st.integers(0, 2 ** 32))
def test_inverse_roundtrip_random(seed):
    f = random_cremona(random.Random(seed))
    g = inverse(f)
    assert g.degree == f.degree
    assert compose(g, f) == IDENTITY
