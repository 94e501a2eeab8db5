import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from divergent.exact import (
    EMPTY, INF, NEG_INF, Interval, OpenSet, OpenUnion, affine_image, format_endpoint, format_rational,
    geometric_set, interval, member, normalize, open_region_from_json, parse_endpoint, periodic_set,
    power_set, rational, segment_inside,
)
from divergent.oracles import critical_points, naive_member, same_union

from conftest import interval_lists, intervals, small_rationals

F = Fraction


def test_rational_parsing():
    assert rational("3/4") == F(3, 4)
    assert rational(2) == 2
    assert rational("-1/3") == F(-1, 3)
    with pytest.raises(TypeError):
        rational(0.5)
    with pytest.raises(TypeError):
        rational(True)
    assert format_rational(F(6, 4)) == "3/2"
    assert format_rational(F(5)) == "5/1"
    assert parse_endpoint("+inf") == INF and parse_endpoint("-inf") == NEG_INF
    assert format_endpoint(INF) == "+inf"


def test_interval_basics():
    iv = interval("1/2", 2)
    assert F(1) in iv and F(1, 2) not in iv and F(2) not in iv
    assert iv.width == F(3, 2) and iv.midpoint == F(5, 4)
    assert iv.middle_half() == (F(7, 8), F(13, 8))
    with pytest.raises(ValueError):
        Interval(F(1), F(1))
    ray = interval(0, "+inf")
    assert not ray.bounded and F(10**9) in ray
    assert Interval.from_json(ray.to_json()) == ray


def test_normalize_examples():
    U = normalize([interval(0, 1), interval("1/2", 2), interval(3, 4), interval(2, 3)])
    assert [(c.lo, c.hi) for c in U] == [(0, 2), (2, 3), (3, 4)]
    assert F(2) not in U and F(3) not in U
    assert OpenSet.from_json(U.to_json()) == U


def test_affine_image_examples():
    U = normalize([interval(0, 1), interval(2, 3)])
    V = affine_image(U, -2, 1)
    assert [(c.lo, c.hi) for c in V] == [(-5, -3), (-1, 1)]
    with pytest.raises(ValueError):
        affine_image(U, 0, 1)


def test_segment_inside():
    U = normalize([interval(0, 2)])
    assert segment_inside(U, F(1, 2), F(3, 2))
    assert not segment_inside(U, 0, 1)
    assert segment_inside(U, F(1), F(1))


def test_clustered_and_unbounded():
    U = geometric_set([interval("1/2", "3/4")], "1/2")
    assert U.clustered_at_zero and not U.unbounded_above
    assert F(5, 8) / 2**30 in U
    assert F(3, 4) / 2**30 not in U
    P = periodic_set([interval(0, "1/10")], 3)
    assert P.unbounded_above and F(3001, 1000) in P and F(3) not in P
    Q = power_set([interval(0, "1/2")], exponent=2)
    assert F(81) + F(1, 4) in Q and F(80) not in Q


def test_interval_above_and_near_zero():
    U = normalize([interval(1, 2), interval(5, "+inf")])
    assert U.interval_above(0) == interval(1, 2)
    assert U.interval_above(F(3, 2)) == interval(5, "+inf")
    assert U.interval_above(F(15, 2)) == interval(8, "+inf")
    V = normalize([interval("-1", "1/10"), interval("1/5", "1/3")])
    comp, x = V.interval_near_zero(F(1, 4))
    assert comp == interval("1/5", "1/3") and x == F(9, 40)


def test_region_json_round_trip():
    obj = {"components": [{"lo": "-1", "hi": "0"}],
           "stream": {"kind": "periodic", "cell": [{"lo": "0", "hi": "1/2"}], "period": "2"}}
    U = open_region_from_json(obj)
    assert isinstance(U, OpenUnion)
    V = open_region_from_json(U.to_json())
    for x in [F(-1, 2), F(1, 4), F(9, 4), F(3, 2)]:
        assert (x in U) == (x in V)


@given(interval_lists)
def test_normalize_matches_naive(ivs):
    U = normalize(ivs)
    for p in critical_points(ivs, U.components):
        assert member(p, U) == naive_member(p, ivs)
    # sorted, disjoint, and no two components overlap
    for a, b in zip(U.components, U.components[1:]):
        assert a.hi <= b.lo


@given(interval_lists)
def test_normalize_idempotent(ivs):
    U = normalize(ivs)
    assert normalize(U.components) == U
    assert normalize(reversed(ivs)) == U


@given(interval_lists, small_rationals.filter(bool), small_rationals)
def test_affine_matches_naive(ivs, scale, shift):
    U = normalize(ivs)
    V = affine_image(U, scale, shift)
    for p in critical_points(V.components):
        assert member(p, V) == member((p - shift) / scale, U)


@given(interval_lists, small_rationals, small_rationals)
def test_segment_inside_matches_sampling(ivs, a, b):
    U = normalize(ivs)
    lo, hi = min(a, b), max(a, b)
    pts = [lo, hi] + [p for p in critical_points(ivs) if lo < p < hi]
    assert segment_inside(U, lo, hi) == all(naive_member(p, ivs) for p in pts)


@given(st.lists(intervals(0, 3), min_size=1, max_size=4), st.integers(1, 4))
def test_periodic_union_membership(cell, period):
    U = periodic_set(cell, period)
    C = normalize(cell)
    reps = normalize(c.affine(F(1), F(m * period)) for m in range(12) for c in C)
    for p in critical_points(reps.components):
        if p < 10 * period:
            assert (p in U) == naive_member(p, reps.components)


def test_same_union_oracle():
    assert same_union([interval(0, 1), interval("1/2", 2)], [interval(0, 2)])
    assert not same_union([interval(0, 1), interval(1, 2)], [interval(0, 2)])
