import random

import pytest
from hypothesis import given, settings, strategies as st

from cremona.algebra.grammar import parse_poly
from cremona.algebra.multipoly import MultiPoly
from cremona.basepoints import b_count, base_point_tree, noether_check, proper_base_points
from cremona.bubble import FIRST, SECOND, BubblePoint, LinearSystemGerm, blow_up_ascend, proper_germ
from cremona.errors import IsBasePoint, NotABasePoint
from cremona.planemap import (
    IDENTITY, Automorphism, ProjPoint, act, compose, evaluate, jacobian, parse_map,
)
from cremona.properties import random_cremona, random_point
from cremona.registry import sigma
from cremona.transport import composition_functoriality_check, push_forward_point

UV = ("u", "v")


def G(*texts):
    return LinearSystemGerm(tuple(parse_poly(t, UV) for t in texts))


P010 = ProjPoint.of(0, 1, 0)


# proper base points ------------------------------------------------------------

def test_proper_base_points(psi_map):
    assert proper_base_points(psi_map) == [(P010, 4)]
    assert proper_base_points(IDENTITY) == []
    assert proper_base_points(sigma()) == [
        (ProjPoint.of(0, 0, 1), 1), (P010, 1), (ProjPoint.of(1, 0, 0), 1)]


# blow-ups ----------------------------------------------------------------------

def test_blow_up_simple_germ():
    first, second, m = blow_up_ascend(G("u", "v", "u + v"))
    assert m == 1
    assert first.components == G("1", "v", "1 + v").components
    assert second.components == G("u", "1", "u + 1").components


def test_psi_germ_has_multiplicity_four(psi_map):
    germ = proper_germ(psi_map.components, P010)
    assert germ.order() == 4
    assert blow_up_ascend(germ)[2] == 4


def test_not_a_base_point():
    with pytest.raises(NotABasePoint):
        blow_up_ascend(G("1 + u", "v", "u"))


# trees -------------------------------------------------------------------------

def test_psi_tree(psi_map):
    t = base_point_tree(psi_map)
    assert len(t) == 9 and t.is_single_chain()
    assert all(n.point.anchor == P010 for n in t)
    assert [n.point.level for n in t] == list(range(9))
    assert t.multiplicities == [4] + [1] * 8
    assert set(t.proximity_edges()) == {(i, i - 1) for i in range(2, 10)} | {(3, 1)}
    assert t.satellite_edges() == [(3, 1)]
    rep = noether_check(t)
    assert rep.passed and rep.expected == (12, 24)


def test_inverse_tree(psi_inv):
    t = base_point_tree(psi_inv)
    assert len(t) == 9 and t.is_single_chain()
    assert t.satellite_edges() == []
    assert t.node(3).proximate == (2,)
    assert {n.point.anchor for n in t} == {ProjPoint.of(1, 0, 0)}


def test_b_counts(psi_map, psi_inv):
    assert b_count(psi_map) == b_count(psi_inv) == 9
    assert b_count(IDENTITY) == 0
    assert len(base_point_tree(IDENTITY)) == 0 and noether_check(base_point_tree(IDENTITY)).passed
    rep = noether_check(base_point_tree(sigma()))
    assert rep.passed and rep.expected == (3, 3)


def test_left_translation_keeps_the_tree(psi_map):
    A = Automorphism.random(random.Random(11))
    assert base_point_tree(act(A, psi_map, "left")).points == base_point_tree(psi_map).points


def test_dot_and_json(psi_map):
    t = base_point_tree(psi_map)
    dot = t.to_dot()
    assert dot.count("[label=") == 9
    assert "p3 -> p1 [style=dashed]" in dot
    data = t.to_json()
    assert len(data["nodes"]) == 9
    assert BubblePoint.from_json(data["nodes"][2]) == t.node(3).point


@settings(max_examples=100)
@given(st.integers(0, 2 ** 32))
def test_random_trees_satisfy_noether_and_proximity(seed):
    f = random_cremona(random.Random(seed))
    t = base_point_tree(f, check=False)
    assert noether_check(t).passed
    for n in t:
        assert len(n.proximate) <= 2
        if n.point.level:
            assert n.parent in n.proximate and t.node(n.parent).point == n.point.parent()
        inflow = sum(c.multiplicity for c in t if n.index in c.proximate)
        assert n.multiplicity >= inflow


# bubble points -----------------------------------------------------------------

def test_bubble_point_canonical_form():
    a = ProjPoint.of(1, 2, 3)
    p = BubblePoint(a, [(FIRST, 2), (SECOND, 0)])
    q = BubblePoint(a, [(FIRST, "4/2"), (SECOND, 0)])
    assert p == q and hash(p) == hash(q) and p.tower == q.tower
    assert p.level == 2 and p.parent() == BubblePoint(a, [(FIRST, 2)])
    assert p.is_infinitely_near(BubblePoint(a))
    r = BubblePoint(a, [(SECOND, 3)])                 # off u = 0: rewritten in the first chart
    assert r.is_canonical() and r.tower == ((FIRST, parse_poly("1/3").constant_term()),)
    assert BubblePoint.from_json(p.to_json()) == p


# transport ---------------------------------------------------------------------

def test_push_forward_identity():
    for p in (BubblePoint(ProjPoint.of(2, -1, 5)), BubblePoint(P010, [(FIRST, 3)])):
        assert push_forward_point(IDENTITY, p) == p


def test_push_forward_onto_infinitely_near_point():
    f = parse_map("(y*z + x^2 : x*z : z^2)")
    q = push_forward_point(f, BubblePoint(ProjPoint.of(1, 0, 0)))
    assert q.anchor == ProjPoint.of(1, 0, 0) == evaluate(f, ProjPoint.of(1, 0, 0))
    assert q.level == 3
    assert q.tower == ((FIRST, 0), (FIRST, 1), (FIRST, 0))


def test_push_forward_psi(psi_map):
    q = push_forward_point(psi_map, BubblePoint(ProjPoint.of(1, 1, 1)))
    assert q.anchor == evaluate(psi_map, ProjPoint.of(1, 1, 1)) == ProjPoint.of(1, 0, 0)
    assert q.level == 1               # (1:1:1) lies on the contracted cubic
    with pytest.raises(IsBasePoint):
        push_forward_point(psi_map, base_point_tree(psi_map).node(4).point)


@settings(max_examples=100)
@given(st.integers(0, 2 ** 32))
def test_push_forward_agrees_with_evaluate_off_contracted_curves(seed):
    rng = random.Random(seed)
    f = random_cremona(rng)
    J = jacobian(f)
    p = random_point(rng)
    if J.evaluate(p.coords) == 0:
        return
    assert push_forward_point(f, BubblePoint(p)) == BubblePoint(evaluate(f, p))


def test_functoriality_examples(psi_map):
    one = BubblePoint(ProjPoint.of(1, 1, 1))
    assert composition_functoriality_check(sigma(), sigma(), one)
    assert composition_functoriality_check(psi_map, psi_map, one)
    A = Automorphism.random(random.Random(5)).as_map()
    rng = random.Random(2)
    for _ in range(3):
        assert composition_functoriality_check(A, psi_map, BubblePoint(random_point(rng)))
