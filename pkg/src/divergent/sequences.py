"""Sequences diverging to infinity, with exact terms and generator-supplied moduli.

A :class:`DivergingSequence` knows its terms exactly and carries a divergence
modulus ``M(B)`` (every ``n >= M(B)`` has ``term(n) > B``).  Generators may also
supply a gap modulus (consecutive gaps eventually below any ``eps``) and a
tail gap bound (the largest gap among terms above a threshold).  Capabilities
travel with the generator; nothing is inferred from values.
"""

from __future__ import annotations

import bisect
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .enclosures import default_precision_bits, exp_enclosure, log_enclosure
from .errors import CapabilityError, MonotonicityError
from .exact import INF, Interval, OpenRegion, format_rational, rational
from .omega import UNBOUNDED, OmegaFunction

_GAP_SEARCH_CAP = 1 << 24
_TABLE_BLOCKS = 1 << 16


def _floor(q) -> int:
    return math.floor(q)


class DivergingSequence:
    """Base class.  Subclasses implement :meth:`term` and :meth:`divergence_modulus`.

    ``monotone`` is True when the generator guarantees non-decreasing terms,
    which lets searches bisect instead of scanning.  ``approximate`` marks
    sequences whose terms are only known through rational enclosures.
    """

    monotone = False
    approximate = False

    def term(self, n: int) -> Fraction:
        raise NotImplementedError

    def bounds(self, n: int) -> tuple[Fraction, Fraction]:
        """Closed rational enclosure of term ``n`` (degenerate for exact sequences)."""
        t = self.term(n)
        return t, t

    def divergence_modulus(self, bound) -> int:
        raise CapabilityError("divergence_modulus")

    def gap_modulus(self, eps) -> int:
        raise CapabilityError("gap_modulus", f"{self.kind} has no vanishing-gap witness")

    def tail_gap_bound(self, threshold) -> Fraction:
        raise CapabilityError("tail_gap_bound", f"{self.kind} has no exact tail gap bound")

    @property
    def kind(self) -> str:
        return self.to_json().get("kind", type(self).__name__)

    def to_json(self) -> dict:
        raise TypeError(f"{type(self).__name__} has no JSON presentation")

    def terms(self, count: int) -> list[Fraction]:
        return [self.term(n) for n in range(count)]

    def first_index_above(self, x) -> int:
        """Least ``n`` with ``term(n) > x`` (monotone sequences only)."""
        if not self.monotone:
            raise MonotonicityError(-1, f"{self.kind} is not presented as monotone")
        hi = self.divergence_modulus(x)
        if not self.bounds(hi)[0] > x:
            raise CapabilityError("divergence_modulus", f"unsound: term({hi}) <= {x}")
        lo = -1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.bounds(mid)[0] > x:
                hi = mid
            else:
                lo = mid
        return hi


class FunctionSequence(DivergingSequence):
    """Sequence from Python callables, for ad-hoc experiments and tests."""

    def __init__(self, term: Callable[[int], Fraction], modulus: Callable[[Fraction], int],
                 monotone: bool = False, name: str = "custom"):
        self._term = term
        self._modulus = modulus
        self.monotone = monotone
        self.name = name

    def term(self, n):
        return rational(self._term(n))

    def divergence_modulus(self, bound):
        return self._modulus(bound)

    @property
    def kind(self):
        return self.name


class ArithmeticSequence(DivergingSequence):
    """``step*n + offset`` with ``step > 0``."""

    monotone = True

    def __init__(self, step, offset=0):
        self.step = rational(step)
        self.offset = rational(offset)
        if self.step <= 0:
            raise ValueError("arithmetic step must be positive for divergence")

    def term(self, n):
        return self.step * n + self.offset

    def divergence_modulus(self, bound):
        if bound == -INF:
            return 0
        return max(0, _floor((bound - self.offset) / self.step) + 2)

    def gap_modulus(self, eps):
        if self.step < eps:
            return 0
        raise CapabilityError("gap_modulus", f"constant gap {self.step} is never below {eps}")

    def tail_gap_bound(self, threshold):
        return self.step

    def to_json(self):
        return {"kind": "arith", "step": format_rational(self.step), "offset": format_rational(self.offset)}


class Theorem2Sequence(DivergingSequence):
    """Unit blocks subdivided by a non-decreasing ``g``.

    Block ``m`` starts at index ``L(m) = sum_{k<m} (g(k)+1)`` and holds the
    ``g(m)+1`` terms ``m + r/(g(m)+1)``, ``r = 0..g(m)``.  Every gap inside or
    leaving block ``m`` equals ``1/(g(m)+1)``.
    """

    monotone = True

    def __init__(self, g: OmegaFunction):
        self.g = g
        self._proved = g.check_nondecreasing(64)
        self._checked = 64
        self._lock = threading.Lock()
        # block starts tabulated for the first _TABLE_BLOCKS blocks
        self._starts = [0]

    def _ensure_monotone(self, m: int) -> None:
        if self._proved or m < self._checked:
            return
        with self._lock:
            if m >= self._checked:
                upto = max(m + 1, 2 * self._checked)
                self.g.check_nondecreasing(upto)
                self._checked = upto

    def block_start(self, m: int) -> int:
        self._ensure_monotone(m)
        return self.g.prefix_sum(m) + m

    def block_of(self, n: int) -> int:
        """Block ``m`` with ``L(m) <= n < L(m+1)``."""
        if n < 0:
            raise ValueError("negative index")
        with self._lock:
            starts = self._starts
            while starts[-1] <= n and len(starts) <= _TABLE_BLOCKS:
                starts.append(starts[-1] + self.g(len(starts) - 1) + 1)
            m = bisect.bisect_right(starts, n) - 1 if starts[-1] > n else None
        if m is not None:
            self._ensure_monotone(m)
            return m
        lo, hi = 0, 1
        while self.block_start(hi) <= n:
            lo, hi = hi, hi * 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.block_start(mid) <= n:
                lo = mid
            else:
                hi = mid
        return lo

    def term(self, n):
        m = self.block_of(n)
        return m + Fraction(n - self.block_start(m), self.g(m) + 1)

    def divergence_modulus(self, bound):
        if bound == -INF:
            return 0
        return self.block_start(max(0, _floor(bound) + 2))

    def gap_modulus(self, eps):
        eps = rational(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        target = _floor(1 / eps)
        # gaps in block m are 1/(g(m)+1) < eps  iff  g(m) >= floor(1/eps)
        growth = self.g.growth
        if isinstance(growth, int) and growth < target:
            raise CapabilityError("gap_modulus", f"g is eventually {growth}; gaps never drop below {eps}")
        if self.g(0) >= target:
            return 0
        lo, hi = 0, 1
        while self.g(hi) < target:
            lo, hi = hi, hi * 2
            if growth is None and hi > _GAP_SEARCH_CAP:
                raise CapabilityError("gap_modulus", "g not known to be unbounded")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.g(mid) >= target:
                hi = mid
            else:
                lo = mid
        self._ensure_monotone(hi)
        return self.block_start(hi)

    def tail_gap_bound(self, threshold):
        m = self.block_of(self.first_index_above(threshold))
        return Fraction(1, self.g(m) + 1)

    def to_json(self):
        return {"kind": "theorem2", "g": self.g.to_json()}


def theorem2_sequence(g: OmegaFunction) -> Theorem2Sequence:
    """``0, 1/(g(0)+1), ..., g(0)/(g(0)+1), 1, 1 + 1/(g(1)+1), ...`` for non-decreasing ``g``."""
    return Theorem2Sequence(g)


class TranslatedSequence(DivergingSequence):
    """``base(n) + r``."""

    def __init__(self, base: DivergingSequence, shift):
        self.base = base
        self.shift = rational(shift)
        self.monotone = base.monotone
        self.approximate = base.approximate

    def term(self, n):
        return self.base.term(n) + self.shift

    def bounds(self, n):
        lo, hi = self.base.bounds(n)
        return lo + self.shift, hi + self.shift

    def divergence_modulus(self, bound):
        return self.base.divergence_modulus(bound - self.shift if bound != -INF else bound)

    def gap_modulus(self, eps):
        return self.base.gap_modulus(eps)

    def tail_gap_bound(self, threshold):
        return self.base.tail_gap_bound(rational(threshold) - self.shift)

    def to_json(self):
        return {"kind": "translate", "base": self.base.to_json(), "r": format_rational(self.shift)}


class LogSequence(DivergingSequence):
    """``x + log(n+1)`` known through enclosures of width below ``2**-precision_bits``."""

    monotone = True
    approximate = True

    def __init__(self, x=0, precision_bits: int | None = None):
        self.x = rational(x)
        self.precision_bits = precision_bits or default_precision_bits()
        self._cache: dict[int, tuple[Fraction, Fraction]] = {}
        self._lock = threading.Lock()

    def bounds(self, n):
        with self._lock:
            if n not in self._cache:
                lo, hi = log_enclosure(n + 1, self.precision_bits)
                self._cache[n] = (lo + self.x, hi + self.x)
            return self._cache[n]

    def term(self, n):
        lo, hi = self.bounds(n)
        return (lo + hi) / 2

    def divergence_modulus(self, bound):
        if bound == -INF or bound < self.x:
            return 0
        # n >= ceil(exp(B - x)) gives n + 1 > exp(B - x)
        return max(0, math.ceil(exp_enclosure(rational(bound) - self.x, self.precision_bits)[1]))

    def gap_modulus(self, eps):
        # log((n+2)/(n+1)) < 1/(n+1) < eps once n >= floor(1/eps)
        return _floor(1 / rational(eps))

    def to_json(self):
        return {"kind": "log", "x": format_rational(self.x), "precision_bits": self.precision_bits}


@dataclass(frozen=True)
class Wave:
    """Continuous piecewise-linear periodic wave with values in ``[0, 1]``.

    ``points`` are ``(t, v)`` breakpoints over one period, from ``t = 0`` to
    ``t = period`` with equal end values.  The wave must attain both 0 and 1.
    """

    period: Fraction = Fraction(1)
    points: tuple[tuple[Fraction, Fraction], ...] = (
        (Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(1)), (Fraction(1), Fraction(0)))

    def __post_init__(self):
        period = rational(self.period)
        pts = tuple((rational(t), rational(v)) for t, v in self.points)
        if period <= 0:
            raise ValueError("wave period must be positive")
        if len(pts) < 2 or pts[0][0] != 0 or pts[-1][0] != period:
            raise ValueError("breakpoints must run from 0 to the period")
        if any(b[0] <= a[0] for a, b in zip(pts, pts[1:])):
            raise ValueError("breakpoint abscissae must increase")
        if pts[0][1] != pts[-1][1]:
            raise ValueError("periodic wave must have equal end values")
        vals = [v for _, v in pts]
        if min(vals) < 0 or max(vals) > 1:
            raise ValueError("wave values must lie in [0, 1]")
        if min(vals) != 0 or max(vals) != 1:
            raise ValueError("wave is not surjective onto [0, 1]")
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "points", pts)

    def __call__(self, y) -> Fraction:
        y = rational(y)
        y = y - self.period * _floor(y / self.period)
        ts = [t for t, _ in self.points]
        i = min(bisect.bisect_right(ts, y), len(ts) - 1)
        (t0, v0), (t1, v1) = self.points[i - 1], self.points[i]
        return v0 + (v1 - v0) * (y - t0) / (t1 - t0)

    def to_json(self):
        return {"period": format_rational(self.period),
                "points": [[format_rational(t), format_rational(v)] for t, v in self.points]}

    @classmethod
    def from_json(cls, obj) -> "Wave":
        return cls(rational(obj["period"]), tuple((rational(t), rational(v)) for t, v in obj["points"]))


TRIANGLE = Wave()


def frac(q: Fraction) -> Fraction:
    return q - _floor(q)


class WaveSequence(DivergingSequence):
    """``n + h(n*x)`` for a wave ``h``, or ``n + frac(n*x)`` when ``wave`` is None.

    Terms are non-decreasing (each lies in ``[n, n+1]``) but not always
    strictly increasing.  Gaps are periodic in ``n``, so the tail gap bound is
    an exact maximum over one period.
    """

    monotone = True

    def __init__(self, x, wave: Wave | None = TRIANGLE):
        self.x = rational(x)
        self.wave = wave

    def _phase(self, n) -> Fraction:
        y = n * self.x
        return self.wave(y) if self.wave is not None else frac(y)

    def term(self, n):
        return n + self._phase(n)

    def divergence_modulus(self, bound):
        if bound == -INF:
            return 0
        return max(0, _floor(bound) + 1)

    def period_in_n(self) -> int:
        unit = self.wave.period if self.wave is not None else Fraction(1)
        return (self.x / unit).denominator

    def tail_gap_bound(self, threshold):
        p = self.period_in_n()
        return max(1 + self._phase(n + 1) - self._phase(n) for n in range(p))

    def to_json(self):
        if self.wave is None:
            return {"kind": "frac", "x": format_rational(self.x)}
        return {"kind": "wave", "x": format_rational(self.x), "wave": self.wave.to_json()}


def make_generator(obj: dict) -> DivergingSequence:
    """Build a sequence from its JSON presentation."""
    kind = obj.get("kind")
    if kind == "arith":
        return ArithmeticSequence(rational(obj["step"]), rational(obj.get("offset", "0")))
    if kind == "theorem2":
        return theorem2_sequence(OmegaFunction.from_json(obj["g"]))
    if kind == "translate":
        return TranslatedSequence(make_generator(obj["base"]), rational(obj["r"]))
    if kind == "log":
        return LogSequence(rational(obj.get("x", "0")), obj.get("precision_bits"))
    if kind == "wave":
        wave = Wave.from_json(obj["wave"]) if "wave" in obj else TRIANGLE
        return WaveSequence(rational(obj["x"]), wave)
    if kind == "frac":
        return WaveSequence(rational(obj["x"]), None)
    raise ValueError(f"unknown sequence kind {kind!r}")


@dataclass(frozen=True)
class SequenceFamily:
    """Finite, ordered family of diverging sequences."""

    members: tuple[DivergingSequence, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("a family needs at least one member")

    def __iter__(self) -> Iterator[DivergingSequence]:
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __getitem__(self, i):
        return self.members[i]

    @property
    def approximate(self) -> bool:
        return any(s.approximate for s in self.members)

    def to_json(self):
        return [s.to_json() for s in self.members]

    @classmethod
    def from_json(cls, obj) -> "SequenceFamily":
        return cls(tuple(make_generator(s) for s in obj))


def terms_in(s: DivergingSequence, window: Interval) -> list[tuple[int, Fraction]]:
    """All ``(n, term(n))`` with ``term(n)`` in the open ``window``.

    Complete because every index past ``divergence_modulus(window.hi)`` has a
    term above the window.  For enclosure-valued sequences the index is kept
    whenever its enclosure meets the window (a superset, never a miss).
    """
    if window.hi == INF:
        raise ValueError("terms_in needs a window bounded above")
    end = s.divergence_modulus(window.hi)
    if not s.bounds(end)[0] > window.hi:
        raise CapabilityError("divergence_modulus", f"unsound: term({end}) <= {window.hi}")
    start = 0
    if s.monotone and window.lo != -INF:
        start = s.first_index_above(window.lo)
        # a non-strict sequence may repeat the boundary value; enclosures may straddle it
        while start > 0 and s.bounds(start - 1)[1] > window.lo:
            start -= 1
    out = []
    for n in range(start, end):
        lo, hi = s.bounds(n)
        if lo < window.hi and hi > window.lo:
            out.append((n, s.term(n)))
    return out


def covers(s: DivergingSequence, threshold: int, j: int) -> bool:
    """Does ``U_n (a_n - 1/j, a_n + 1/j)`` contain ``(threshold, inf)``?

    Criterion for a non-decreasing sequence with radius ``r = 1/j``:
    every gap between two terms above the threshold is shorter than ``2r``
    (the tail gap bound), and the stretch between the threshold and the first
    term above it is reached either from that term or from its predecessor.
    """
    _require_monotone(s)
    r = Fraction(1, j)
    if not s.tail_gap_bound(threshold) < 2 * r:
        return False
    n0 = s.first_index_above(threshold)
    a0 = s.term(n0)
    if a0 - r <= threshold:
        return True
    if n0 == 0:
        return False
    return a0 - s.term(n0 - 1) < 2 * r


def coverage_functional(s: DivergingSequence, i: int) -> int:
    """Largest ``j >= 1`` whose radius ``1/j`` covers ``(i, inf)``, or 0 if none does."""
    if isinstance(i, bool) or int(i) != i or i < 0:
        raise ValueError("coverage functional takes a natural index")
    i = int(i)
    _require_monotone(s)
    gap = s.tail_gap_bound(i)
    j_tail = math.ceil(2 / gap) - 1
    n0 = s.first_index_above(i)
    a0 = s.term(n0)
    j_reach = _floor(1 / (a0 - i))
    if n0 > 0:
        before = s.term(n0 - 1)
        if before > a0:
            raise MonotonicityError(n0, "sequence decreases")
        j_reach = max(j_reach, math.ceil(2 / (a0 - before)) - 1)
    return max(0, min(j_tail, j_reach))


def _require_monotone(s: DivergingSequence) -> None:
    if not s.monotone:
        raise MonotonicityError(-1, f"{s.kind} is not presented as non-decreasing")
    if s.approximate:
        raise CapabilityError("tail_gap_bound", "enclosure-valued sequences have no exact gaps")


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of a finite-horizon hit-count probe; never a refutation."""

    found: bool
    horizon: int
    member: int | None = None
    hits: tuple[int, ...] = ()
    approximate: bool = False

    def to_json(self):
        if not self.found:
            return {"status": "exhausted", "horizon": self.horizon, "approximate": self.approximate}
        return {"status": "witness", "horizon": self.horizon, "member": self.member,
                "hits": list(self.hits), "approximate": self.approximate}


def term_in_set(s: DivergingSequence, n: int, U: OpenRegion) -> bool:
    """Exact membership; for enclosures, the whole enclosure must sit in one component."""
    lo, hi = s.bounds(n)
    if lo == hi:
        return lo in U
    comp = U.component_containing(lo)
    return comp is not None and hi < comp.hi


def condition_c_probe(family: SequenceFamily | Sequence[DivergingSequence], U: OpenRegion,
                      hits: int, horizon: int) -> ProbeResult:
    """First member (family order) with ``hits`` indices ``n < horizon`` whose terms lie in ``U``."""
    if hits < 1:
        raise ValueError("a probe for zero hits is vacuous")
    if not U.unbounded_above:
        raise ValueError("the probe needs a set unbounded above")
    family = family if isinstance(family, SequenceFamily) else SequenceFamily(tuple(family))
    for idx, s in enumerate(family):
        found = []
        for n in range(horizon):
            if term_in_set(s, n, U):
                found.append(n)
                if len(found) == hits:
                    return ProbeResult(True, horizon, idx, tuple(found), s.approximate)
    return ProbeResult(False, horizon, approximate=family.approximate)
