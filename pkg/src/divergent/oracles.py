"""Brute-force reference implementations.

Deliberately naive and kept apart from the production paths so they can
judge them: coverage by searching for an uncovered point, and open-set
operations by comparing membership at every critical point.
"""

from __future__ import annotations

import bisect
import math
from fractions import Fraction
from typing import Sequence

from .exact import INF, NEG_INF, Interval
from .sequences import ArithmeticSequence, DivergingSequence, Theorem2Sequence, TranslatedSequence, WaveSequence


def naive_member(x, intervals: Sequence[Interval]) -> bool:
    return any(c.lo < x < c.hi for c in intervals)


def critical_points(*interval_lists: Sequence[Interval]) -> list[Fraction]:
    """Points at which two finite unions of open intervals must agree if they are equal:
    every finite endpoint, every midpoint between consecutive endpoints, and a point
    beyond each extreme."""
    ends = sorted({e for ivs in interval_lists for c in ivs for e in (c.lo, c.hi) if e not in (INF, NEG_INF)})
    if not ends:
        return [Fraction(0)]
    pts = list(ends)
    pts += [(a + b) / 2 for a, b in zip(ends, ends[1:])]
    pts += [ends[0] - 1, ends[-1] + 1]
    return pts


def same_union(a: Sequence[Interval], b: Sequence[Interval]) -> bool:
    return all(naive_member(p, a) == naive_member(p, b) for p in critical_points(a, b))


def _window_span(s: DivergingSequence) -> Fraction:
    # long enough to contain one full repetition of the gap pattern
    if isinstance(s, TranslatedSequence):
        return _window_span(s.base)
    if isinstance(s, ArithmeticSequence):
        return 2 * s.step + 2
    if isinstance(s, WaveSequence):
        return Fraction(s.period_in_n() + 3)
    return Fraction(3)


class CoverageOracle:
    """Uncovered-point search for ``U_n (a_n - r, a_n + r)`` over ``(i, i + span)``.

    Terms are enumerated once (up to ``top``).  Candidate uncovered points
    are ``a_n +- r`` and midpoints of consecutive terms: any uncovered piece
    of the window contains one of them.  Only meaningful for sequences whose
    gap pattern does not worsen beyond the window (arithmetic, block,
    periodic wave families).
    """

    def __init__(self, s: DivergingSequence, top, span=None):
        self.s = s
        self.span = Fraction(span) if span is not None else _window_span(s)
        limit = s.divergence_modulus(top + self.span + 2)
        self.terms = sorted(s.term(n) for n in range(limit))
        self.top = top

    def covers(self, i, j: int) -> bool:
        r = Fraction(1, j)
        lo_end = Fraction(i)
        hi_end = lo_end + self.span
        if hi_end + 2 > self.top + self.span + 2:
            raise ValueError("window exceeds enumerated terms")
        a = bisect.bisect_left(self.terms, lo_end - 2)
        b = bisect.bisect_right(self.terms, hi_end + 2)
        window = self.terms[a:b]
        # doubling keeps every scaled term even, so midpoints stay integral
        den = 2 * math.lcm(j, *(t.denominator for t in window))
        ints = [int(t * den) for t in window]
        R = den // j
        lo_i, hi_i = int(lo_end * den), int(hi_end * den)
        cands = [t + R for t in ints] + [t - R for t in ints]
        cands += [(x + y) // 2 for x, y in zip(ints, ints[1:])]
        cands += [lo_i + 1]
        for p in cands:
            if not (lo_i < p < hi_i):
                continue
            k = bisect.bisect_left(ints, p)
            near = min((abs(p - ints[m]) for m in (k - 1, k) if 0 <= m < len(ints)), default=None)
            if near is None or near >= R:
                return False
        return True

    def functional(self, i, j_max: int) -> int:
        """Largest ``j <= j_max`` that covers, found by bisection on the monotone predicate."""
        if not self.covers(i, 1):
            return 0
        lo, hi = 1, j_max + 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.covers(i, mid):
                lo = mid
            else:
                hi = mid
        return lo
