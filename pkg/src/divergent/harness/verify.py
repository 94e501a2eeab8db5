"""Re-verification of emitted reports.

Every verifier starts from the JSON input and the JSON outputs alone and
re-derives each claim by brute force: explicit term scans, naive interval
membership, direct re-evaluation of functions.  None of them calls the
constructor that produced the output.
"""

from __future__ import annotations

import bisect
import math
from fractions import Fraction

from ..exact import INF, Interval, open_region_from_json, parse_endpoint, rational
from ..oracles import CoverageOracle, same_union
from ..omega import OmegaFunction
from ..sequences import TRIANGLE, Wave, make_generator


class Checks:
    def __init__(self):
        self.rows: list[dict] = []

    def add(self, check: str, passed: bool, detail: str = ""):
        self.rows.append({"check": check, "passed": bool(passed), "detail": detail})

    def first_failure(self, check: str, failures: list, what: str):
        self.add(check, not failures, f"{len(failures)} {what}, first {failures[:3]}" if failures else "")


def _members(inputs):
    return [make_generator(s) for s in inputs["family"]]


def _in_region(U, lo, hi) -> bool:
    """Whole enclosure ``[lo, hi]`` inside one component of ``U``."""
    if lo == hi:
        return lo in U
    c = U.component_containing(lo)
    return c is not None and hi < c.hi


def _chain_checks(ck: Checks, chain: dict, in_set):
    """Nesting, halving, and that the final point lies in every refinement's set."""
    start = Interval.from_json(chain["start"])
    prev_lo, prev_hi = start.lo, start.hi
    bad_nest, bad_half, bad_set = [], [], []
    x = rational(chain["final_point"])
    for t, st in enumerate(chain["stages"]):
        q = Interval.from_json(st["query"])
        lo, hi = (rational(v) for v in st["refined"])
        if not (prev_lo <= q.lo and q.hi <= prev_hi and q.lo <= lo < hi <= q.hi):
            bad_nest.append(t)
        if not hi - lo <= (q.hi - q.lo) / 2:
            bad_half.append(t)
        if not (lo <= x <= hi) or not in_set(t, st):
            bad_set.append(t)
        prev_lo, prev_hi = lo, hi
    ck.first_failure("chain-nested", bad_nest, "stages not nested")
    ck.first_failure("chain-halving", bad_half, "stages wider than half the query")
    ck.first_failure("chain-point", bad_set, "stages missing the final point")


def verify_dominate(inputs, outputs, args) -> Checks:
    ck = Checks()
    raw = inputs["functions"] if isinstance(inputs, dict) else inputs
    h = args["horizon"]
    fs = [OmegaFunction.from_json(f) for f in raw]
    prefix = outputs["dominator"]["prefix"]
    ck.add("prefix-length", len(prefix) == h)
    bad = [(j, n) for j, f in enumerate(fs) for n in range(j, h) if not prefix[n] > f(n)]
    ck.first_failure("dominates-from-own-index", bad, "(member, n) pairs not dominated")
    again = OmegaFunction.from_json(outputs["dominator"]["presentation"])
    ck.add("presentation-round-trip", [again(n) for n in range(h)] == prefix)
    bad = []
    for row in outputs["members"]:
        f = fs[row["member"]]
        viol = [n for n in range(h) if f(n) > prefix[n]]
        if row["verdict"]["violations"] != viol:
            bad.append(row["member"])
    ck.first_failure("verdicts", bad, "members with wrong violation lists")
    return ck


def verify_envelope(inputs, outputs, args) -> Checks:
    ck = Checks()
    h = args["horizon"]
    f = OmegaFunction.from_json(inputs["function"])
    vals = [f(n) for n in range(h)]
    ck.add("prefix", outputs["prefix"] == vals)
    ck.add("running-max", outputs["envelope"] == [max(vals[: n + 1]) for n in range(h)])
    again = OmegaFunction.from_json(outputs["presentation"])
    ck.add("presentation-round-trip", [again(n) for n in range(h)] == outputs["envelope"])
    return ck


def verify_theorem2(inputs, outputs, args) -> Checks:
    ck = Checks()
    h = args["horizon"]
    g = OmegaFunction.from_json(inputs["g"])
    if inputs.get("envelope"):
        raw = g
        g = lambda m: max(raw(k) for k in range(m + 1))  # noqa: E731
    terms, starts, m = [], [], 0
    while len(terms) < h:
        starts.append(len(terms))
        size = g(m) + 1
        terms.extend(m + Fraction(k, size) for k in range(size))
        m += 1
    terms = terms[:h]
    ck.add("terms", [rational(t) for t in outputs["terms"]] == terms)
    ck.add("block-starts", outputs["block_starts"] == [s for s in starts if s < h])
    bad = [n for n in range(1, h) if terms[n] < terms[n - 1]]
    ck.first_failure("non-decreasing", bad, "decreases")
    return ck


def verify_coverage(inputs, outputs, args) -> Checks:
    ck = Checks()
    s = make_generator(inputs["sequence"])
    rows = outputs["values"]
    top = max((r["i"] for r in rows), default=0)
    oracle = CoverageOracle(s, top)
    bad = []
    for r in rows:
        i, v = r["i"], r["value"]
        ok = (v == 0 or oracle.covers(i, v)) and not oracle.covers(i, v + 1)
        if not ok:
            bad.append(i)
    ck.first_failure("uncovered-point-search", bad, "indices disagreeing with brute force")
    return ck


def verify_probe_c(inputs, outputs, args) -> Checks:
    ck = Checks()
    members = _members(inputs)
    U = open_region_from_json(inputs["open_set"])
    k, h = args["hits"], args["horizon"]

    def hits_of(s, limit):
        return [n for n in range(limit) if _in_region(U, *s.bounds(n))]

    if outputs["status"] == "witness":
        idx = outputs["member"]
        hits = outputs["hits"]
        s = members[idx]
        ck.add("hit-count", len(hits) == k and len(set(hits)) == k)
        ck.add("hits-inside", all(n < h and _in_region(U, *s.bounds(n)) for n in hits))
        ck.add("first-member", all(len(hits_of(t, h)) < k for t in members[:idx]))
    else:
        ck.add("exhausted", all(len(hits_of(t, h)) < k for t in members))
    return ck


def verify_adversary(inputs, outputs, args) -> Checks:
    ck = Checks()
    members = _members(inputs)
    h = args["horizon"]
    mode = outputs["mode"]
    base = [rational(a) for a in outputs["base"]]
    hs = outputs["h"]
    per = outputs["h_per_member"]
    intervals = [Interval(a - Fraction(1, r), a + Fraction(1, r)) for a, r in zip(base, hs)]
    U = open_region_from_json(outputs["open_set"])
    ck.add("union-rebuilt", len(intervals) == h and same_union(intervals, U.components))
    ck.add("base-in-unit-cells", all(n < a < n + 1 for n, a in enumerate(base)))

    if mode == "strong":
        want = [max(col[n] for col in per) for n in range(h)]
    else:
        want = [max(per[j][n] for j in range(min(n, len(per) - 1) + 1)) + 1 for n in range(h)]
    ck.add("combined-radius", hs == want and all(isinstance(r, int) and r >= 1 for r in hs))

    top = max(c.hi for c in U.components) + 2
    scans = []
    for s in members:
        limit = 10 * max(1, s.divergence_modulus(top))
        encl = sorted(s.bounds(n) for n in range(limit))
        scans.append((limit, encl))

    bad_sep, bad_min = [], []
    for a, (limit, encl) in enumerate(scans):
        los = [e[0] for e in encl]
        for n, c in enumerate(base):
            r = per[a][n]
            # enclosures meeting [c - 1, c + 1]
            near = encl[bisect.bisect_left(los, c - 2):bisect.bisect_right(los, c + 1)]
            if any(not (hi <= c - Fraction(1, r) or lo >= c + Fraction(1, r)) for lo, hi in near):
                bad_sep.append((a, n))
            if r > 1:
                wide = Fraction(1, r - 1)
                if not any(c - wide < lo and hi < c + wide for lo, hi in near):
                    bad_min.append((a, n))
    ck.first_failure("separating-radius", bad_sep, "cells with a member term inside")
    ck.first_failure("minimality", bad_min, "cells where radius 1/(h-1) catches nothing")

    bad_cert = []
    for cert in outputs["certificates"]:
        a = cert["member"]
        s = members[a]
        limit = scans[a][0]
        found = {}
        for n in range(limit):
            lo, hi = s.bounds(n)
            # interval k lies within (k - 1, k + 2)
            ks = range(max(0, math.floor(lo) - 2), min(h, math.floor(hi) + 2))
            inside = [k for k in ks if intervals[k].lo < hi and lo < intervals[k].hi]
            if inside:
                found[n] = inside[0]
        claimed = {x["n"]: x["interval_index"] for x in cert["hits"]}
        if set(found) != set(claimed) or cert["count"] != len(found):
            bad_cert.append((a, "scan", sorted(found)[:5]))
        tail = cert["tail"]["from_index"]
        if any(k >= tail for k in claimed.values()):
            bad_cert.append((a, "tail"))
        if mode == "strong" and found:
            bad_cert.append((a, "nonzero"))
    ck.first_failure("certificates", bad_cert, "certificate failures")
    return ck


def verify_theorem3(inputs, outputs, args) -> Checks:
    ck = Checks()
    region = inputs["open_set"] if "open_set" in inputs else inputs
    U = open_region_from_json(region)
    x = rational(outputs["x"])
    hits = outputs["hits"]
    ks = [r["k"] for r in hits]
    ck.add("hit-count", len(hits) == args["depth"] and len(set(ks)) == len(ks))
    bad = [r["k"] for r in hits if rational(r["point"]) != x / r["k"] or x / r["k"] not in U]
    ck.first_failure("x/k-in-U", bad, "k with x/k outside U")
    ck.add("final-point", rational(outputs["chain"]["final_point"]) == x)
    _chain_checks(ck, outputs["chain"], lambda t, st: x / st["meta"]["k"] in U)
    if "log_form" in outputs:
        ck.add("log-form-enclosures", outputs["log_form"]["all_inside"], "approximate")
    return ck


def verify_remark(inputs, outputs, args) -> Checks:
    ck = Checks()
    U = open_region_from_json(inputs["open_set"])
    s = make_generator(inputs["sequence"])
    target = Interval.from_json(inputs["target"]) if "target" in inputs else Interval(Fraction(0), Fraction(1, 2))
    r = rational(outputs["r"])
    ns = [row["n"] for row in outputs["hits"]]
    ck.add("r-in-target", target.lo < r < target.hi)
    ck.add("hit-count", len(ns) == args["hits"])
    ck.add("increasing", all(a < b for a, b in zip(ns, ns[1:])))
    bad = [row["n"] for row in outputs["hits"]
           if rational(row["point"]) != r + s.term(row["n"]) or r + s.term(row["n"]) not in U]
    ck.first_failure("r+s(n)-in-U", bad, "indices outside U")
    _chain_checks(ck, outputs["chain"], lambda t, st: r + s.term(st["meta"]["n"]) in U)
    return ck


def _wave_value(wave, y):
    if wave is None:
        return y - (y.numerator // y.denominator)
    return wave(y)


def verify_wave(inputs, outputs, args) -> Checks:
    ck = Checks()
    U = open_region_from_json(inputs["open_set"])
    wave = None
    if outputs["variant"] == "wave":
        wave = Wave.from_json(inputs["wave"]) if "wave" in inputs else TRIANGLE
    if outputs["status"] == "witness":
        x = rational(outputs["x"])
        hits = outputs["hits"]
        ck.add("hit-count", len(hits) == args["hits"] and all(n < args["horizon"] for n in hits))
        bad = [n for n in hits if n + _wave_value(wave, n * x) not in U]
        ck.first_failure("terms-in-U", bad, "indices outside U")
    else:
        ck.add("exhausted", True, f"tried {outputs['tried']} slopes")
    return ck


def verify_demo_bump(inputs, outputs, args) -> Checks:
    ck = Checks()
    members = _members(inputs)
    tents = [(parse_endpoint(t["lo"]), parse_endpoint(t["hi"])) for t in outputs["f"]["tents"]]
    ck.add("tents-bounded", all(lo != -INF and hi != INF for lo, hi in tents))
    ivs = [Interval(lo, hi) for lo, hi in tents]
    los = [lo for lo, _ in tents]

    def f(y):
        k = bisect.bisect_right(los, y) - 1
        if k < 0 or not y < tents[k][1]:
            return Fraction(0)
        lo, hi = tents[k]
        return 1 - abs(2 * y - lo - hi) / (hi - lo)

    bad = []
    for a, s in enumerate(members):
        for n in range(outputs["horizon"]):
            lo, hi = s.bounds(n)
            if lo == hi:
                if f(lo) != 0:
                    bad.append((a, n))
            elif any(iv.lo < hi and lo < iv.hi for iv in ivs):
                bad.append((a, n))
    ck.first_failure("vanishes-along-family", bad, "(member, n) with f(term) != 0")
    peaks = [rational(p) for p in outputs["peaks"]]
    ck.add("peaks-equal-one", bool(peaks) and all(f(p) == 1 for p in peaks))
    ck.add("peaks-escape", all(p < q for p, q in zip(peaks, peaks[1:]))
           and bool(peaks) and peaks[-1] > outputs["horizon"] - 1)
    return ck


VERIFIERS = {
    "dominate": verify_dominate,
    "envelope": verify_envelope,
    "theorem2": verify_theorem2,
    "coverage": verify_coverage,
    "probe-c": verify_probe_c,
    "adversary": verify_adversary,
    "theorem3": verify_theorem3,
    "remark": verify_remark,
    "wave": verify_wave,
    "demo-bump": verify_demo_bump,
}


def verify(command: str, inputs, outputs, args) -> list[dict]:
    return VERIFIERS[command](inputs, outputs, args).rows
