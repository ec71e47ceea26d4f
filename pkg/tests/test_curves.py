import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fmcensus import tables
from fmcensus.curves import (
    CurvePoint,
    bulk_add,
    bulk_mul,
    bulk_points,
    arrays_to_points,
    curve_new,
    enumerate_points,
    is_supersingular,
    point_add,
    point_order,
    scalar_mul,
)
from fmcensus.errors import NotPrime, PointNotOnCurve, SingularModel
from fmcensus.fields import field_make
from fmcensus.structure import transform_coefficients

from oracles import RefCurve, RefField, short_add

# long models in every characteristic, including supersingular ones
TEST_CURVES = [
    (2, 0, 0, 1, 0, 0),
    (2, 1, 0, 0, 0, 1),
    (2, 1, 1, 0, 0, 1),
    (3, 0, 0, 0, 2, 0),
    (3, 0, 1, 0, 0, 1),
    (3, 1, 0, 0, 0, 1),
    (5, 0, 0, 0, 0, 1),
    (5, 0, 0, 0, 1, 0),
    (5, 1, 2, 3, 4, 0),
    (7, 0, 0, 0, 1, 3),
    (11, 1, 0, 0, 3, 2),
]


def _as_tuple(P: CurvePoint):
    return None if P.is_infinity else (P.x.coeffs, P.y.coeffs)


def _ref(E, k):
    ctx = field_make(E.p, k)
    return RefCurve(RefField(E.p, ctx.modulus), E.a_invariants)


# ---------------------------------------------------------------- construction


def test_j_1728_model():
    E = curve_new(5, 0, 0, 0, 1, 0)
    assert E.j == 1728 % 5 == 3


def test_j_0_model():
    assert curve_new(5, 0, 0, 0, 0, 1).j == 0


def test_singular_model_rejected():
    with pytest.raises(SingularModel):
        curve_new(5, 0, 0, 0, 0, 0)
    with pytest.raises(SingularModel):
        curve_new(2, 0, 0, 0, 0, 1)  # y^2 = x^3 + 1 is a cusp in char 2
    with pytest.raises(NotPrime):
        curve_new(4, 0, 0, 1, 0, 0)


def test_coefficients_are_reduced():
    assert curve_new(3, 0, 0, 0, -1, 0).a_invariants == (0, 0, 0, 2, 0)


# ---------------------------------------------------------------- group law


def test_two_torsion_point_doubles_to_infinity():
    E = curve_new(5, 0, 0, 0, 1, 0)
    P = E.point(0, 0)
    assert E.add(P, P).is_infinity
    assert scalar_mul(E, 2, P).is_infinity
    assert point_order(E, P) == 2


def test_flex_point_on_x3_plus_1():
    # (0, 1) is a flex of y^2 = x^3 + 1, so it has order 3, not 6
    E = curve_new(5, 0, 0, 0, 0, 1)
    P = E.point(0, 1)
    assert E.add(P, P) == E.point(0, 4)
    assert E.mul(3, P).is_infinity
    assert E.mul(6, P).is_infinity
    assert point_order(E, P) == 3


def test_point_orders_on_x3_plus_1_over_f5():
    E = curve_new(5, 0, 0, 0, 0, 1)
    orders = {(int(P.x), int(P.y)): point_order(E, P) for P in enumerate_points(E) if not P.is_infinity}
    assert orders == {(0, 1): 3, (0, 4): 3, (2, 2): 6, (2, 3): 6, (4, 0): 2}


def test_scalar_multiplication_edge_cases():
    E = curve_new(5, 0, 0, 0, 0, 1)
    P = E.point(2, 2)
    O = CurvePoint.infinity(P.ctx)
    assert E.mul(0, P).is_infinity
    assert E.mul(1, P) == P
    assert E.mul(-1, P) == E.neg(P)
    assert E.mul(-7, P) == E.neg(E.mul(7, P))
    assert point_order(E, O) == 1
    assert E.add(O, P) == P


def test_checked_operations_reject_foreign_points():
    E = curve_new(5, 0, 0, 0, 0, 1)
    bad = CurvePoint(field_make(5)(1), field_make(5)(1), field_make(5))
    with pytest.raises(PointNotOnCurve):
        point_add(E, bad, bad)
    with pytest.raises(PointNotOnCurve):
        scalar_mul(E, 3, bad)
    with pytest.raises(PointNotOnCurve):
        E.point(1, 1)


def test_negation_map_long_model():
    E = curve_new(2, 1, 0, 0, 0, 1)
    for P in enumerate_points(E, 2)[1:]:
        N = E.neg(P)
        a1, _, a3, _, _ = E.coeffs_in(P.ctx)
        assert N.x == P.x and N.y == -P.y - a1 * P.x - a3
        assert E.add(P, N).is_infinity


@pytest.mark.parametrize("p,a4,a6", [(5, 0, 1), (7, 1, 3), (11, 3, 7), (13, 2, 5)])
def test_group_law_matches_short_model_formulas(p, a4, a6):
    E = curve_new(p, 0, 0, 0, a4, a6)
    pts = enumerate_points(E)
    for P in pts:
        for Q in pts:
            want = short_add(p, a4, _ref_int(P), _ref_int(Q))
            assert _ref_int(E.add(P, Q)) == want


def _ref_int(P):
    return None if P.is_infinity else (int(P.x), int(P.y))


@pytest.mark.parametrize("a", TEST_CURVES)
@pytest.mark.parametrize("k", [1, 2])
def test_group_law_matches_reference_curve(a, k):
    E = curve_new(*a)
    ref = _ref(E, k)
    pts = enumerate_points(E, k)
    rng = random.Random(hash((a, k)))
    for _ in range(200):
        P, Q = rng.choice(pts), rng.choice(pts)
        assert _as_tuple(E.add(P, Q)) == ref.add(_as_tuple(P), _as_tuple(Q))


@pytest.mark.parametrize("a", TEST_CURVES)
def test_group_axioms_on_random_triples(a):
    E = curve_new(*a)
    pts = enumerate_points(E, 3)
    rng = random.Random(a[0] * 31 + sum(a))
    O = pts[0]
    assert O.is_infinity
    for _ in range(1000):
        P, Q, R = rng.choice(pts), rng.choice(pts), rng.choice(pts)
        assert E.add(P, Q) == E.add(Q, P)
        assert E.add(E.add(P, Q), R) == E.add(P, E.add(Q, R))
        assert E.add(P, E.neg(P)).is_infinity
        assert E.add(P, O) == P


# ---------------------------------------------------------------- enumeration and counting


def test_enumeration_examples():
    E = curve_new(5, 0, 0, 0, 1, 0)
    pts = enumerate_points(E)
    assert len(pts) == 4
    assert {_ref_int(P) for P in pts} == {None, (0, 0), (2, 0), (3, 0)}
    assert len(enumerate_points(curve_new(5, 0, 0, 0, 0, 1))) == 6


# brute force is quadratic in the field size
@pytest.mark.parametrize("a,k", [(a, k) for a in TEST_CURVES for k in (1, 2, 3) if a[0] ** k <= 400])
def test_enumeration_matches_brute_force(a, k):
    E = curve_new(*a)
    got = [_as_tuple(P) for P in enumerate_points(E, k)]
    want = _ref(E, k).points()
    assert got[0] is None
    assert sorted(got[1:]) == sorted(want[1:])
    assert got[1:] == sorted(got[1:])  # canonical order
    assert E.count_points(k) == len(want)


@pytest.mark.parametrize("a", TEST_CURVES)
def test_bulk_enumeration_matches_recurrence(a):
    E = curve_new(*a)
    for k in range(1, 7):
        if E.p**k > 200_000:
            break
        pts = bulk_points(E, k)
        assert len(pts) == E.count_points(k)
        assert len({(int(x), int(y), bool(i)) for x, y, i in zip(pts.x, pts.y, pts.inf)}) == len(pts)


@pytest.mark.parametrize("a", TEST_CURVES)
def test_bulk_group_law_matches_scalar(a):
    E = curve_new(*a)
    k = 4 if E.p < 5 else 2
    ctx = field_make(E.p, k)
    T = tables.tables_for(ctx)
    pts = bulk_points(E, k)
    rng = np.random.default_rng(sum(a))
    i = rng.integers(0, len(pts), 300)
    j = rng.integers(0, len(pts), 300)
    P, Q = pts.take(i), pts.take(j)
    S = arrays_to_points(ctx, bulk_add(E, T, P, Q))
    M = arrays_to_points(ctx, bulk_mul(E, T, 7, P))
    for s, m, p_, q_ in zip(S, M, arrays_to_points(ctx, P), arrays_to_points(ctx, Q)):
        assert s == E.add(p_, q_)
        assert m == E.mul(7, p_)


def test_trace_and_supersingularity_examples():
    E = curve_new(5, 0, 0, 0, 0, 1)
    assert E.count_points() == 6 and E.trace == 0
    assert is_supersingular(E)
    F = curve_new(5, 0, 0, 0, 1, 0)
    assert F.count_points() == 4 and F.trace == 2
    assert not is_supersingular(F)
    assert is_supersingular(curve_new(2, 0, 0, 1, 0, 0))
    assert not is_supersingular(curve_new(2, 1, 0, 0, 0, 1))


@settings(max_examples=120, deadline=None)
@given(
    st.sampled_from([2, 3, 5, 7, 11, 13, 17, 23, 31, 53, 97]),
    st.lists(st.integers(0, 96), min_size=5, max_size=5),
)
def test_hasse_bound(p, a):
    try:
        E = curve_new(p, *a)
    except SingularModel:
        return
    t = E.trace
    assert t * t <= 4 * p
    assert E.count_points() == p + 1 - t


@pytest.mark.parametrize("a", TEST_CURVES)
def test_lagrange(a):
    E = curve_new(*a)
    for k in (1, 2):
        N = E.count_points(k)
        for P in enumerate_points(E, k):
            assert N % point_order(E, P) == 0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(TEST_CURVES), st.data())
def test_j_is_invariant_under_coordinate_change(a, data):
    E = curve_new(*a)
    ctx = field_make(E.p)
    pick = st.integers(0, E.p - 1)
    u = ctx(data.draw(st.integers(1, E.p - 1)))
    r, s, t = (ctx(data.draw(pick)) for _ in range(3))
    b = transform_coefficients(E.coeffs_in(ctx), u, r, s, t)
    E2 = curve_new(E.p, *(int(c) for c in b))
    assert E2.j == E.j
    assert E2.count_points() == E.count_points()
