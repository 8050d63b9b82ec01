import random

from hypothesis import given, strategies as st

from cremona.bubble import FIRST, SECOND, BubblePoint
from cremona.planemap import ProjPoint
from cremona.properties import (
    check_functoriality, check_roundtrip, check_subadditivity, check_tree, random_cremona,
    run_properties,
)

seeds = st.integers(0, 2 ** 32)
coords = st.fractions(min_value=-9, max_value=9, max_denominator=9)


@given(seeds)
def test_functoriality(seed):
    rng = random.Random(seed)
    assert check_functoriality(random_cremona(rng), random_cremona(rng), rng) == []


@given(seeds)
def test_tree_and_roundtrip(seed):
    rng = random.Random(seed)
    f = random_cremona(rng)
    assert check_tree(f) == []
    assert check_roundtrip(f) == []


@given(seeds)
def test_subadditivity(seed):
    rng = random.Random(seed)
    assert check_subadditivity(random_cremona(rng), random_cremona(rng)) == []


@st.composite
def bubble_points(draw):
    anchor = draw(st.tuples(coords, coords, coords).filter(any))
    steps = draw(st.lists(st.tuples(st.sampled_from([FIRST, SECOND]), coords), max_size=4))
    return BubblePoint(ProjPoint.of(*anchor), steps)


@given(bubble_points())
def test_equality_is_canonical(p):
    # same point written with a rescaled anchor and rebuilt from its canonical tower
    scaled = ProjPoint.of(*(3 * c for c in p.anchor.coords))
    q = BubblePoint(scaled, p.tower)
    assert p == q and hash(p) == hash(q) and p.tower == q.tower
    assert p.is_canonical()
    assert BubblePoint.from_json(p.to_json()) == p


@given(bubble_points(), bubble_points(), bubble_points())
def test_equality_is_an_equivalence(p, q, r):
    assert p == p
    assert (p == q) == (q == p)
    if p == q and q == r:
        assert p == r


def test_property_report():
    rep = run_properties(seed=1, per_property=3)
    assert rep.instances == 12 and rep.passed
    assert rep.per_property == {"subadditivity": 3, "noether-proximity": 3,
                                "roundtrip": 3, "functoriality": 3}
