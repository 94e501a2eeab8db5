"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Runs standalone too: ``python3 tests/test_acceptance.py``.
"""

import bisect
import json
import math
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from divergent.adversary import STRONG, adversarial_open_set, recheck_certificate, separation_profile
from divergent.category import remark_witness, theorem3_witness
from divergent.exact import Interval, affine_image, geometric_set, interval, member, normalize, periodic_set, power_set
from divergent.harness import run_command
from divergent.harness.io import dump_report
from divergent.omega import constant, diagonal_dominator, formula, linear, prefix_function
from divergent.oracles import CoverageOracle, critical_points, naive_member
from divergent.sequences import (
    TRIANGLE, ArithmeticSequence, SequenceFamily, TranslatedSequence, WaveSequence, coverage_functional, covers,
    theorem2_sequence,
)

F = Fraction
DATA = Path(__file__).parent / "data"


_capture = {}


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    _capture["capsys"] = capsys
    yield
    _capture.clear()


def report(number: int, passed: bool, detail: str, seconds: float):
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} ({seconds:.1f}s) {detail}"
    with _capture["capsys"].disabled():
        print("\n" + line)
    assert passed, line


def rand_rational(rng, lo, hi, den=8):
    q = rng.randint(1, den)
    return F(rng.randint(math.ceil(lo * q), math.floor(hi * q)), q)


# criterion 1

def random_formula(rng):
    kind = rng.choice(["linear", "poly", "const"])
    if kind == "linear":
        return formula("linear", {"slope": rand_rational(rng, 0, 20), "intercept": rand_rational(rng, 0, 50)})
    if kind == "poly":
        coeffs = [rand_rational(rng, 0, 5) for _ in range(rng.randint(1, 4))]
        return formula("poly", {"coeffs": coeffs})
    return formula("const", {"value": rng.randint(0, 10**6)})


def naive_value(f, n):
    """Independent evaluation from the presentation: exact rational polynomial, then floor."""
    p = f.to_json()["params"]
    if f.to_json()["name"] == "const":
        return math.floor(F(p["value"]))
    if f.to_json()["name"] == "linear":
        coeffs = [F(p["intercept"]), F(p["slope"])]
    else:
        coeffs = [F(c) for c in p["coeffs"]]
    return math.floor(sum(c * n**i for i, c in enumerate(coeffs)))


def test_criterion_1_diagonal_domination():
    t0 = time.perf_counter()
    rng = random.Random(1)
    violations = checked = 0
    for _ in range(100):
        fam = [random_formula(rng) for _ in range(rng.randint(1, 50))]
        g = diagonal_dominator(fam).prefix(1000)
        for j, f in enumerate(fam):
            for n in range(j, 1000):
                checked += 1
                if not g[n] > naive_value(f, n):
                    violations += 1
    report(1, violations == 0, f"{checked} (j, n) pairs, {violations} violations", time.perf_counter() - t0)


# criteria 2 and 3 share the runs

def random_member(rng, depth=0):
    kind = rng.choice(["arith", "theorem2", "translate"] if depth == 0 else ["arith", "theorem2"])
    if kind == "arith":
        return ArithmeticSequence(rand_rational(rng, F(1, 8), 3) or F(1, 2), rand_rational(rng, -3, 3))
    if kind == "theorem2":
        g = rng.choice([constant(rng.randint(0, 4)),
                        prefix_function(sorted(rng.randint(0, 5) for _ in range(rng.randint(1, 6))))])
        return theorem2_sequence(g)
    return TranslatedSequence(random_member(rng, 1), rand_rational(rng, -2, 2))


_ADVERSARY_RUNS = []


def adversary_runs():
    if not _ADVERSARY_RUNS:
        rng = random.Random(2)
        for _ in range(25):
            fam = SequenceFamily(tuple(random_member(rng) for _ in range(rng.randint(1, 8))))
            prof = separation_profile(fam, mode=STRONG)
            U, certs = adversarial_open_set(prof, 256)
            _ADVERSARY_RUNS.append((fam, prof, U, certs))
    return _ADVERSARY_RUNS


def brute_terms(s, top):
    limit = 10 * max(1, s.divergence_modulus(top))
    return sorted(s.term(n) for n in range(limit)), limit


def test_criterion_2_strong_vacuity():
    t0 = time.perf_counter()
    failures, members, scanned = [], 0, 0
    for fam, prof, U, certs in adversary_runs():
        intervals = [prof.interval(n) for n in range(256)]
        top = max(c.hi for c in U.components)
        for a, (s, cert) in enumerate(zip(fam, certs)):
            members += 1
            if cert.count != 0:
                failures.append(("certificate", a, cert.count))
            terms, limit = brute_terms(s, top)
            scanned += limit
            # interval k sits inside (k - 1, k + 2)
            hits = [t for t in terms if t > -1 and any(
                naive_member(t, intervals[k:k + 1]) for k in range(max(0, math.floor(t) - 2), min(256, math.floor(t) + 2)))]
            if hits:
                failures.append(("scan", a, hits[:3]))
            failures.extend(recheck_certificate(cert, prof, U))
    report(2, not failures, f"25 families, {members} members, {scanned} terms rescanned, failures {failures[:3]}",
           time.perf_counter() - t0)


def test_criterion_3_minimality():
    t0 = time.perf_counter()
    cells = bad = 0
    for fam, prof, U, _ in adversary_runs():
        top = max(c.hi for c in U.components)
        for a, s in enumerate(fam):
            terms, _ = brute_terms(s, top)
            for n in range(256):
                h = prof.cell(a, n).h
                if h <= 1:
                    continue
                cells += 1
                c = prof.base.term(n)
                r = F(1, h - 1)
                k = bisect.bisect_right(terms, c - r)
                if not (k < len(terms) and terms[k] < c + r):
                    bad += 1
    report(3, cells > 0 and bad == 0, f"{cells} cells with h > 1, {bad} without a captured term",
           time.perf_counter() - t0)


def test_criterion_4_theorem2_coverage():
    t0 = time.perf_counter()
    g = linear(1)
    s = theorem2_sequence(g)
    oracle = CoverageOracle(s, 100)
    bad = []
    for i in range(101):
        v = coverage_functional(s, i)
        if not (v >= g(i) and v == oracle.functional(i, 4 * i + 8)):
            bad.append((i, v))
    report(4, not bad, f"i = 0..100, values >= g(i) and equal to brute force; mismatches {bad[:3]}",
           time.perf_counter() - t0)


def random_clustered(rng):
    ratio = rng.choice([F(1, 2), F(1, 3), F(2, 3), F(3, 4), F(2, 5)])
    cells, lo = [], rand_rational(rng, F(1, 2), F(3, 4), 16)
    for _ in range(rng.randint(1, 4)):
        w = F(1, rng.randint(40, 200))
        cells.append(Interval(lo, lo + w))
        lo += w + F(1, rng.randint(40, 200))
    head = normalize([Interval(F(k), F(k) + F(1, 3)) for k in range(1, rng.randint(2, 6))])
    return geometric_set(cells, ratio, head=head)


def test_criterion_5_theorem3_witness():
    t0 = time.perf_counter()
    rng = random.Random(5)
    bad = []
    for t in range(10):
        U = random_clustered(rng)
        # at least 40 components shrinking toward 0
        assert len(U.snapshot(F(1, 10**40), 1).components) >= 40
        lo = rand_rational(rng, F(1, 2), 3)
        w = theorem3_witness(U, 25, Interval(lo, lo + 1))
        ks = [k for k, _ in w.hits]
        widths = [w.chain.start.width] + [hi - lo for lo, hi in (st.refined for st in w.chain.stages)]
        if len(set(ks)) != 25 or not all(member(w.point / k, U) for k in ks):
            bad.append((t, "hits"))
        if not all(b * 2 <= a for a, b in zip(widths, widths[1:])):
            bad.append((t, "widths"))
    report(5, not bad, f"10 sets, depth 25, failures {bad}", time.perf_counter() - t0)


def random_unbounded(rng):
    cell = [Interval(a, a + rand_rational(rng, F(1, 16), F(1, 2), 16) or F(1, 8))
            for a in [rand_rational(rng, 0, 1, 8)]]
    if rng.random() < 0.5:
        return periodic_set(cell, rng.randint(1, 7), offset=rand_rational(rng, 0, 5))
    return power_set(cell, exponent=rng.randint(1, 2), coefficient=rng.randint(1, 3))


def test_criterion_6_remark_witness():
    t0 = time.perf_counter()
    rng = random.Random(6)
    s = theorem2_sequence(linear(1))
    bad = []
    for t in range(10):
        U = random_unbounded(rng)
        lo = rand_rational(rng, -5, 5)
        target = Interval(lo, lo + F(1, 2))
        w = remark_witness(U, s, target, 20)
        ns = [n for n, _ in w.hits]
        ok = (len(ns) == 20 and all(a < b for a, b in zip(ns, ns[1:]))
              and all(member(w.point + s.term(n), U) for n in ns) and target.lo < w.point < target.hi)
        if not ok:
            bad.append(t)
    report(6, not bad, f"10 sets, K = 20, failures {bad}", time.perf_counter() - t0)


def test_criterion_7_bump_demo():
    t0 = time.perf_counter()
    inputs = {"family": [{"kind": "arith", "step": "2/3", "offset": "1/5"},
                         {"kind": "theorem2", "g": {"kind": "formula", "name": "const", "params": {"value": "3"}}},
                         {"kind": "translate", "r": "1/7",
                          "base": {"kind": "theorem2", "g": {"kind": "prefix", "values": [0, 1, 2]}}}]}
    rep, code = run_command("demo-bump", inputs, {"horizon": 512})
    out = rep["outputs"]
    checks = {c["check"]: c["passed"] for c in rep["verification"]}
    ok = (code == 0 and all(checks.values()) and out["vanishes_along_family"] and out["peaks_escape"]
          and len(out["peaks"]) >= 256)
    report(7, ok, f"{len(out['peaks'])} peaks up to {out['peaks'][-1]}, checks {checks}", time.perf_counter() - t0)


def test_criterion_8_oracle_equivalence():
    t0 = time.perf_counter()
    gens = [ArithmeticSequence(1), ArithmeticSequence(F(2, 3), F(1, 4)), ArithmeticSequence(F(5, 2)),
            theorem2_sequence(linear(1)), theorem2_sequence(constant(3)),
            TranslatedSequence(theorem2_sequence(linear(1)), F(-1, 3)),
            WaveSequence(F(2, 5), TRIANGLE), WaveSequence(F(3, 7), None)]
    cov_bad = cov_checked = 0
    for s in gens:
        oracle = CoverageOracle(s, 50)
        for i in range(51):
            for j in range(1, 101):
                cov_checked += 1
                cov_bad += covers(s, i, j) != oracle.covers(i, j)
    rng = random.Random(8)
    set_bad = 0
    for _ in range(10**4):
        ivs = []
        for _ in range(rng.randint(0, 8)):
            a = rand_rational(rng, -10, 10, 6)
            ivs.append(Interval(a, a + (rand_rational(rng, F(1, 6), 4, 6) or F(1, 2))))
        U = normalize(ivs)
        x = rand_rational(rng, -12, 12, 12)
        set_bad += member(x, U) != naive_member(x, ivs)
        set_bad += any(member(p, U) != naive_member(p, ivs) for p in critical_points(ivs, U.components))
        scale = rand_rational(rng, -3, 3, 4) or F(1)
        shift = rand_rational(rng, -3, 3, 4)
        V = affine_image(U, scale, shift)
        set_bad += any(member(p, V) != naive_member((p - shift) / scale, ivs) for p in critical_points(V.components))
    report(8, cov_bad == 0 and set_bad == 0,
           f"coverage {cov_checked} cases {cov_bad} mismatches; open sets 10^4 cases {set_bad} mismatches",
           time.perf_counter() - t0)


DETERMINISM_RUNS = {
    "dominate": ["--horizon", "200"],
    "envelope": ["--horizon", "50"],
    "theorem2": [],
    "coverage": [],
    "probe-c": [],
    "adversary": ["--horizon", "64"],
    "theorem3": ["--depth", "25"],
    "remark": ["--hits", "20"],
    "wave": [],
    "demo-bump": ["--horizon", "64"],
}


def _fresh_process_report(command, flags):
    proc = subprocess.run([sys.executable, "-m", "divergent.harness.cli", command,
                           "--in", str(DATA / f"{command}.json"), *flags],
                          capture_output=True, text=True, check=True)
    rep = json.loads(proc.stdout)
    rep.pop("timing")
    return dump_report(rep).encode()


def test_criterion_9_determinism():
    t0 = time.perf_counter()
    differ = [c for c, flags in DETERMINISM_RUNS.items()
              if _fresh_process_report(c, flags) != _fresh_process_report(c, flags)]
    report(9, not differ, f"{len(DETERMINISM_RUNS)} commands run twice in fresh processes, differing {differ}",
           time.perf_counter() - t0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
