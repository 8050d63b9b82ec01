import random

import pytest
from hypothesis import given, strategies as st

from cremona.basepoints import base_point_tree
from cremona.dynamics import (
    INCONCLUSIVE, NOT_REGULARIZABLE, REGULARIZABLE, DynamicsConfig, Tracker,
    b_sequence_direct, b_sequence_tracked, conjugation_invariance_check, degree_sequence,
    iteration_report, mu_estimate, persistent_classes, regularizability_verdict,
)
from cremona.planemap import IDENTITY, Automorphism, act, compose
from cremona.properties import random_cremona
from cremona.registry import random_automorphisms, sigma


@pytest.fixture(scope="module")
def psi_tracker(psi_map, psi_inv):
    return Tracker(psi_map, f_inv=psi_inv)


def diagonal(a, b):
    return Automorphism(((1, 0, 0), (0, a, 0), (0, 0, b)))


# degrees and b-sequences ---------------------------------------------------------

def test_degree_sequences(psi_map):
    assert degree_sequence(sigma(), 2) == [2, 1]
    assert degree_sequence(psi_map, 2) == [5, 25]
    assert degree_sequence(IDENTITY, 3) == [1, 1, 1]


def test_direct_sequences(psi_map):
    assert b_sequence_direct(sigma(), 2) == [3, 0]
    assert b_sequence_direct(psi_map, 2) == [9, 18]
    assert b_sequence_direct(IDENTITY, 1) == [0]


def test_tracked_matches_direct_for_psi(psi_map, psi_tracker):
    tracked, methods = b_sequence_tracked(psi_map, 2, tracker=psi_tracker)
    assert tracked == b_sequence_direct(psi_map, 2)
    assert methods == ["tracked", "tracked"]


def test_tracked_sequence_of_psi_grows_linearly(psi_map, psi_tracker):
    tracked, methods = b_sequence_tracked(psi_map, 6, tracker=psi_tracker)
    assert tracked == [9 * k for k in range(1, 7)]
    assert psi_tracker.collision() is None


def test_sigma_collides_at_once():
    tr = Tracker(sigma())
    seq, _ = b_sequence_tracked(sigma(), 4, tracker=tr)
    assert seq == [3, 0, 3, 0]
    col = tr.collision()
    assert col is not None and col.k == 1
    assert col.B == ["q_1", "q_2", "q_3"] and col.anomaly is None


def test_identity_sequence():
    assert mu_estimate(IDENTITY, 4).b_sequence == [0, 0, 0, 0]


def collision_map(seed):
    """sigma twisted by a diagonal or a permutation: Base(f) meets Base(f^-1)."""
    rng = random.Random(seed)
    if rng.random() < 0.5:
        A = diagonal(rng.choice([-3, -2, 2, 3]), rng.choice([-1, 5, "1/2"]))
    else:
        A = Automorphism.permutation(rng.choice([[1, 0, 2], [1, 2, 0], [2, 1, 0]]))
    return act(A, sigma(), "left")


@given(st.integers(0, 2 ** 32), st.booleans())
def test_oracle_equivalence_random(seed, colliding):
    """Tracked counts equal direct tree builds wherever both are available."""
    f = collision_map(seed) if colliding else random_cremona(random.Random(seed))
    tracked, methods = b_sequence_tracked(f, 2)
    direct = b_sequence_direct(f, 2)
    assert tracked == direct


@given(st.integers(0, 2 ** 32))
def test_subadditivity_of_b_and_degree(seed):
    f = collision_map(seed) if seed % 3 == 0 else random_cremona(random.Random(seed))
    b = [0] + b_sequence_direct(f, 2)
    d = [1] + degree_sequence(f, 2)
    assert b[2] <= 2 * b[1]
    assert d[2] <= d[1] ** 2
    assert abs(b[2] - b[1]) <= b[1]


# persistence and mu ------------------------------------------------------------

def test_p3_persists(psi_map, psi_tracker):
    p3 = base_point_tree(psi_map).node(3).point
    assert [psi_tracker.contains(p3, i) for i in range(1, 7)] == [True] * 6
    assert [psi_tracker.contains(p3, -i) for i in range(1, 7)] == [False] * 6


def test_q3_never_a_forward_base_point(psi_inv, psi_tracker):
    q3 = base_point_tree(psi_inv).node(3).point
    assert [psi_tracker.contains(q3, i) for i in range(1, 7)] == [False] * 6


def test_persistent_classes_of_psi(psi_map, psi_tracker):
    records = persistent_classes(psi_map, 6, tracker=psi_tracker)
    p3 = next(r for r in records if "p_3" in r.members)
    assert p3.persistent is True
    assert p3.in_forward == [True] * 6 and p3.in_backward == [False] * 6


def test_persistent_classes_controls():
    assert not any(r.persistent for r in persistent_classes(sigma(), 6))
    assert mu_estimate(IDENTITY, 6).classes == []


def test_mu_estimates(psi_map, psi_tracker):
    mu = mu_estimate(psi_map, 6, tracker=psi_tracker)
    assert mu.lower_bound >= 1
    assert mu.lower_bound <= mu.upper_bound <= 9
    s = mu_estimate(sigma(), 6)
    assert s.exact and s.upper_bound == 0 and s.lower_bound == 0 and s.finite_order == 2
    a = mu_estimate(IDENTITY, 6)
    assert a.exact and a.upper_bound == 0


def test_short_horizon_is_not_a_certificate(psi_map):
    mu = mu_estimate(psi_map, 1)
    assert mu.lower_bound == 0
    assert regularizability_verdict(psi_map, 1, mu=mu).level == INCONCLUSIVE


def test_verdicts(psi_map, psi_tracker):
    v = regularizability_verdict(psi_map, 6, mu=mu_estimate(psi_map, 6, tracker=psi_tracker))
    assert v.level == NOT_REGULARIZABLE and v.reasons
    assert regularizability_verdict(sigma(), 6).level == REGULARIZABLE
    A = random_automorphisms(0, 1)[0].as_map()
    assert regularizability_verdict(A, 6).level == REGULARIZABLE


def test_verdict_is_monotone_in_the_horizon(psi_map, psi_tracker):
    levels = [regularizability_verdict(
        psi_map, h, mu=mu_estimate(psi_map, h, tracker=psi_tracker)).level for h in range(1, 7)]
    first = levels.index(NOT_REGULARIZABLE)
    assert all(l == NOT_REGULARIZABLE for l in levels[first:])


# conjugation -------------------------------------------------------------------

def test_conjugation_controls():
    A = random_automorphisms(3, 1)[0]
    assert conjugation_invariance_check(sigma(), A, 4)
    assert conjugation_invariance_check(IDENTITY, A, 4)


def test_conjugation_invariance_for_psi(psi_map):
    A = Automorphism(((1, 1, 0), (0, 1, 2), (1, 0, 1)))
    g = act(A, psi_map, "conjugate")
    assert b_sequence_direct(g, 2) == b_sequence_direct(psi_map, 2)
    assert conjugation_invariance_check(psi_map, A, 2)


def test_sandwich_equality_random():
    rng = random.Random(4)
    for _ in range(5):
        f = random_cremona(rng)
        A = Automorphism.random(rng)
        assert b_sequence_direct(act(A, f, "conjugate"), 2) == b_sequence_direct(f, 2)


# reports -----------------------------------------------------------------------

def test_iteration_report_for_sigma():
    rep = iteration_report(sigma(), "sigma", DynamicsConfig(degree_horizon=2, b_horizon=4,
                                                            persistence_horizon=4))
    assert rep.degrees == [2, 1]
    assert rep.b_tracked == [3, 0, 3, 0] and rep.b_direct == [3, 0, 3, 0]
    assert rep.oracle_mismatches() == [] and rep.exit_code() == 0
    csv_text = rep.to_csv().splitlines()
    assert csv_text[0] == "k,degree,b,method" and csv_text[1].startswith("1,2,3,")
    assert rep.to_json()["verdict"] == REGULARIZABLE
