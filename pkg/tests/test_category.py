from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from divergent.category import (
    PointComplementOracle, TranslationDenseOracle, WholeLineOracle, baire_witness,
    bump_transfer_demo, chain_failures, farey, log_form_check, remark_witness, theorem3_witness,
    wave_family_probe,
)
from divergent.category.bump import TentFunction
from divergent.errors import CapabilityError, OracleContractError
from divergent.category.baire import DenseOpenOracle, Refinement
from divergent.exact import geometric_set, interval, normalize, periodic_set
from divergent.omega import linear
from divergent.sequences import ArithmeticSequence, LogSequence, TRIANGLE, theorem2_sequence

F = Fraction


def test_whole_line_chain_halves_to_midpoint():
    chain = baire_witness([WholeLineOracle()] * 10, interval(0, 1))
    assert chain.final_point == F(1, 2)
    widths = [hi - lo for lo, hi in (s.refined for s in chain.stages)]
    assert all(b * 2 <= a for a, b in zip([F(1)] + widths, widths))


def test_point_complements_avoid_points():
    qs = [F(1, 2), F(1, 3), F(3, 8), F(5, 16)]
    oracles = [PointComplementOracle(q) for q in qs]
    chain = baire_witness(oracles, interval(0, 1))
    assert chain.final_point not in qs
    assert chain_failures(chain, oracles) == []


def test_contract_breach_is_reported():
    class Liar(DenseOpenOracle):
        def refine(self, query):
            return Refinement(query.lo, query.hi, {})

        def certify(self, ref):
            return True

    with pytest.raises(OracleContractError):
        baire_witness([Liar()], interval(0, 1))


def test_theorem3_on_dyadic_set():
    U = geometric_set([interval("1/2", "3/4")], "1/2")
    w = theorem3_witness(U, 25, interval(1, 2))
    ks = [k for k, _ in w.hits]
    assert len(set(ks)) == 25 and ks == sorted(ks)
    assert all(w.point / k in U for k in ks)
    check = log_form_check(w, U, 64)
    assert check["all_inside"] and check["approximate"]


def test_theorem3_needs_clustering():
    with pytest.raises(ValueError):
        theorem3_witness(normalize([interval(1, 2)]), 3, interval(1, 2))
    U = geometric_set([interval("1/2", "3/4")], "1/2")
    with pytest.raises(ValueError):
        theorem3_witness(U, 3, interval(0, 1))


def test_remark_witness():
    U = periodic_set([interval(0, "1/10")], 3)
    s = theorem2_sequence(linear(1))
    w = remark_witness(U, s, interval(0, "1/2"), 15)
    ns = [n for n, _ in w.hits]
    assert all(a < b for a, b in zip(ns, ns[1:]))
    assert all(w.point + s.term(n) in U for n in ns)
    assert 0 < w.point < F(1, 2)


def test_remark_rejects_enclosures_and_lasting_gaps():
    U = periodic_set([interval(0, "1/10")], 3)
    with pytest.raises(CapabilityError):
        TranslationDenseOracle(U, LogSequence(0), 0)
    with pytest.raises(CapabilityError):
        remark_witness(U, ArithmeticSequence(1), interval(0, "1/2"), 3)


def test_farey_order():
    assert list(farey(3)) == [0, F(1, 3), F(1, 2), F(2, 3), 1]


def test_wave_probe():
    U = periodic_set([interval("1/3", "2/3")], 1)
    res = wave_family_probe(U, TRIANGLE, 8, 10, 100)
    assert res.found
    assert all(n + TRIANGLE(n * res.x) in U for n in res.hits)
    frac = wave_family_probe(U, None, 8, 10, 100)
    assert frac.found


def test_tents():
    f = TentFunction(normalize([interval(0, 2), interval(3, 4)]))
    assert f(F(1)) == 1 and f(F(1, 2)) == F(1, 2) and f(F(5, 2)) == 0 and f(2) == 0
    assert f.peaks == [1, F(7, 2)]


def test_bump_demo():
    fam = [ArithmeticSequence(F(1, 2)), theorem2_sequence(linear(1)), ArithmeticSequence(1, F(1, 3))]
    demo = bump_transfer_demo(fam, 64)
    assert demo.vanishes_along_family and demo.peaks_escape


clusters = st.builds(
    lambda lo, w, r: geometric_set([interval(lo, lo + w)], r),
    st.fractions(min_value=F(1, 4), max_value=F(1, 2), max_denominator=16),
    st.fractions(min_value=F(1, 64), max_value=F(1, 8), max_denominator=64),
    st.sampled_from([F(1, 2), F(1, 3), F(2, 3)]),
)


@settings(max_examples=25)
@given(clusters, st.integers(1, 12), st.fractions(min_value=F(1, 2), max_value=4, max_denominator=8))
def test_theorem3_property(U, depth, lo):
    w = theorem3_witness(U, depth, interval(lo, lo + 1))
    ks = [k for k, _ in w.hits]
    assert len(set(ks)) == depth
    assert all(w.point / k in U for k in ks)


unbounded = st.builds(
    lambda lo, w, p: periodic_set([interval(lo, lo + w)], p),
    st.fractions(min_value=0, max_value=1, max_denominator=8),
    st.fractions(min_value=F(1, 32), max_value=F(1, 4), max_denominator=32),
    st.integers(1, 5),
)


@settings(max_examples=20)
@given(unbounded, st.integers(1, 8), st.fractions(min_value=-3, max_value=3, max_denominator=4))
def test_remark_property(U, hits, lo):
    s = theorem2_sequence(linear(1))
    w = remark_witness(U, s, interval(lo, lo + F(1, 2)), hits)
    ns = [n for n, _ in w.hits]
    assert len(ns) == hits and all(a < b for a, b in zip(ns, ns[1:]))
    assert all(w.point + s.term(n) in U for n in ns)
