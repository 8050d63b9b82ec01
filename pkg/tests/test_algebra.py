from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cremona.algebra import ops
from cremona.algebra.grammar import ParseError, parse_poly as P
from cremona.algebra.multipoly import MultiPoly
from cremona.algebra.rational import as_rational
from cremona.algebra.series import Series
from cremona.algebra.unipoly import UniPoly, rational_root_candidates, rational_roots
from cremona.registry import sigma
from cremona.planemap import compose


# strategies ----------------------------------------------------------------

small = st.integers(-4, 4)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))


@st.composite
def polys(draw, max_terms=4):
    terms = draw(st.dictionaries(exps, small.filter(bool), max_size=max_terms))
    return MultiPoly(terms)


@st.composite
def homogeneous(draw, d):
    from cremona.planemap import monomials
    mons = monomials(d)
    coeffs = draw(st.lists(small, min_size=len(mons), max_size=len(mons)))
    return MultiPoly({e: c for e, c in zip(mons, coeffs) if c})


# arithmetic ----------------------------------------------------------------

def test_difference_of_squares():
    assert P("(x+y)*(x-y)") == P("x^2 - y^2")
    assert (P("x+y") * P("x-y")).to_str() == "x^2 - y^2"


def test_add_zero_and_psi_factor():
    p = P("x^2*y - z^3")
    assert p + MultiPoly.zero() == p
    assert p * P("x^2") == P("x^4*y - x^2*z^3")


def test_parse_rationals_and_errors():
    assert P("1/2*x + 3/4").scale(4) == P("2*x + 3")
    with pytest.raises(ParseError) as err:
        P("x + * y")
    assert "position" in str(err.value) or err.value.args


@given(polys(), polys())
def test_print_parse_roundtrip(p, q):
    r = p * q + p
    assert P(r.to_str()) == r


@given(st.fractions(), st.fractions(), st.fractions(), st.fractions())
def test_rational_cross_multiplication(a, b, c, d):
    lhs = as_rational(a) + as_rational(b)
    assert Fraction(int(lhs.numerator), int(lhs.denominator)) == a + b
    if b and d:
        s = as_rational(a) / as_rational(b) + as_rational(c) / as_rational(d)
        assert s * as_rational(b) * as_rational(d) == as_rational(a) * as_rational(d) + as_rational(c) * as_rational(b)


# substitution --------------------------------------------------------------

def test_substitute_examples():
    assert P("x^2*y").substitute([P("z"), P("x"), P("y")]) == P("z^2*x")
    assert P("x+y").substitute([P("y*z"), P("x*z"), P("z")]) == P("y*z + x*z")


@given(polys(), polys(), st.lists(homogeneous(2), min_size=3, max_size=3))
def test_substitute_is_a_ring_map(p, q, images):
    sub = lambda f: f.substitute(images)
    assert sub(p * q) == sub(p) * sub(q)
    assert sub(p + q) == sub(p) + sub(q)


@given(homogeneous(2), st.lists(homogeneous(3), min_size=3, max_size=3))
def test_substitute_degree(p, images):
    r = p.substitute(images)
    if not r.is_zero():
        assert r.degree() == 6


# gcd -----------------------------------------------------------------------

def test_gcd_examples():
    assert ops.gcd_multivariate(P("x^2-y^2"), P("x-y")) == P("x-y")
    assert ops.gcd_multivariate(P("x*y*z*x"), P("x*y*z*y")) == P("x*y*z")
    s = sigma()
    s2 = [c.substitute(list(s.components)) for c in s.components]
    assert ops.gcd_many(s2) == P("x*y*z")
    assert compose(s, s).is_identity()


@given(polys(), polys())
def test_gcd_divides_both(p, q):
    g = ops.gcd_multivariate(p, q)
    for f in (p, q):
        if not f.is_zero():
            _, r = ops.divmod_poly(f, g)
            assert r.is_zero()


@given(polys(3), polys(3), polys(3))
def test_gcd_of_products_contains_common_factor(a, b, c):
    if a.is_zero() or b.is_zero() or c.is_zero():
        return
    g = ops.gcd_multivariate(a * c, b * c)
    assert ops.divides(c, g)


# derivatives ---------------------------------------------------------------

def test_partial_derivatives():
    assert P("x^5").diff(0) == P("5*x^4")
    assert P("x^2*y - z^3").diff(1) == P("x^2")
    assert P("x^2*y*z^2 - z^5 + x^5").diff(2) == P("2*x^2*y*z - 5*z^4")


# resultants ----------------------------------------------------------------

def test_resultant_examples():
    r = ops.resultant_eliminate(P("z-x"), P("z-y"), 2)
    assert r in (P("x-y"), P("y-x"))
    assert ops.resultant_eliminate(P("z^2"), P("x"), 2) == P("x^2")


def test_resultant_vanishes_at_psi_base_point(psi_map):
    f0, f1, _ = psi_map.components
    r = ops.resultant_eliminate(f0, f1, 0)          # eliminate x
    assert r.evaluate([0, 1, 0]) == 0


@given(polys(3), polys(3), polys(3))
def test_resultant_zero_iff_common_factor(a, b, c):
    """Against the gcd: a nonconstant common factor involving z kills Res_z."""
    p, q = a * c, b * c
    if p.is_zero() or q.is_zero() or p.degree_in(2) == 0 or q.degree_in(2) == 0:
        return
    shared = ops.gcd_multivariate(p, q).degree_in(2) > 0
    assert ops.resultant_eliminate(p, q, 2).is_zero() == shared


# roots ---------------------------------------------------------------------

def test_rational_roots_examples():
    assert rational_roots(UniPoly([-1, 0, 1])).distinct() == [-1, 1]
    rep = rational_roots(UniPoly([1, 0, 1]))
    assert rep.roots == [] and rep.residual.degree() == 2
    p = UniPoly([-3, 2]) ** 2 * UniPoly([-2, 0, 1])
    rep = rational_roots(p)
    assert rep.roots == [(as_rational("3/2"), 2)]
    assert rep.residual == UniPoly([-2, 0, 1])
    assert not rep.complete


@given(st.lists(st.fractions(max_denominator=5).filter(lambda q: abs(q) < 6), min_size=1, max_size=3),
       st.integers(-3, 3))
def test_rational_roots_against_candidate_enumeration(roots, shift):
    """Factor-based extraction versus the rational root theorem."""
    p = UniPoly([1])
    for r in roots:
        p = p * UniPoly([-as_rational(r), 1])
    p = p * UniPoly([shift * shift + 1, 0, 1])      # no rational roots
    by_theorem = sorted(c for c in rational_root_candidates(p) if p(c) == 0)
    found = rational_roots(p).distinct()
    assert found == sorted(set(as_rational(r) for r in roots))
    assert by_theorem == found


# orders --------------------------------------------------------------------

def test_order_at_origin_examples():
    assert ops.order_at_origin(P("x^2*z^2 - z^5 + x^5")) == 4
    assert ops.order_at_origin(P("1")) == 0
    assert ops.order_at_origin(P("x^3*z - x*z^4")) == 4


@given(polys(), polys())
def test_order_is_additive(p, q):
    if p.is_zero() or q.is_zero():
        return
    assert ops.order_at_origin(p * q) == ops.order_at_origin(p) + ops.order_at_origin(q)


# truncated series ------------------------------------------------------------

@given(st.lists(st.fractions(max_denominator=7), min_size=1, max_size=6),
       st.lists(st.fractions(max_denominator=7), min_size=1, max_size=6))
def test_series_against_naive_convolution(a, b):
    prec = 6
    A, B = Series(a, prec), Series(b, prec)
    prod = A * B
    for n in range(prec):
        naive = sum((a[i] * b[n - i] for i in range(n + 1) if i < len(a) and n - i < len(b)),
                    Fraction(0))
        assert prod[n] == as_rational(naive)
    if b[0]:
        q = A / B
        back = q * B
        for n in range(prec):
            assert back[n] == as_rational(a[n] if n < len(a) else 0)
