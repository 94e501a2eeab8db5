"""The open set that a finite family of diverging sequences cannot enter infinitely often.

Pipeline: pick a base sequence ``a_n`` in ``(n, n+1)`` avoiding every member
term, measure for each member the least ``h`` such that the radius-``1/h``
interval around ``a_n`` is term-free, combine those per mode, and take the
union of the resulting intervals.  Certificates list every member term that
lands in the truncated union and are re-checkable from scratch.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import VerificationError
from .exact import INF, FunctionStream, Interval, OpenSet, OpenUnion, format_rational, normalize
from .omega import OmegaFunction, diagonal_dominator
from .sequences import DivergingSequence, SequenceFamily, terms_in

STRONG = "strong"
DIAGONAL = "diagonal"
_TAIL_KIND = {STRONG: "strong-max", DIAGONAL: "diagonal"}


class CollisionError(ValueError):
    """The base sequence hits a member term, so no separating radius exists."""

    def __init__(self, member: int, n: int, term):
        self.member, self.n, self.term = member, n, term
        super().__init__(f"base term {n} collides with a term of member {member}: {term}")


def _as_family(family) -> SequenceFamily:
    return family if isinstance(family, SequenceFamily) else SequenceFamily(tuple(family))


class AvoidingBase(DivergingSequence):
    """``a_n`` = least-denominator dyadic in ``(n, n+1)`` that is no member term (least numerator on ties)."""

    monotone = True

    def __init__(self, family: SequenceFamily):
        self.family = family
        self._cache: dict[int, Fraction] = {}
        self._lock = threading.Lock()

    def forbidden(self, n: int) -> list[tuple[Fraction, Fraction]]:
        window = Interval(Fraction(n), Fraction(n + 1))
        out = []
        for s in self.family:
            out.extend(s.bounds(k) for k, _ in terms_in(s, window))
        return out

    def _choose(self, n: int) -> Fraction:
        bad = self.forbidden(n)
        d = 1
        while True:
            den = 2 ** d
            for num in range(1, den, 2):
                c = n + Fraction(num, den)
                if not any(lo <= c <= hi for lo, hi in bad):
                    return c
            d += 1

    def term(self, n):
        with self._lock:
            if n not in self._cache:
                self._cache[n] = self._choose(n)
            return self._cache[n]

    def divergence_modulus(self, bound):
        if bound == -INF:
            return 0
        return max(0, math.floor(bound) + 1)

    def to_json(self):
        return {"kind": "avoiding-base"}


def avoiding_base(family) -> AvoidingBase:
    return AvoidingBase(_as_family(family))


@dataclass(frozen=True)
class Separation:
    """Least separating index for one (member, n) cell, with the nearest term that forces it."""

    h: int
    nearest: int | None = None
    distance: Fraction | None = None


class SeparationProfile:
    """Per-member least separating indices and their combination.

    ``strong`` takes the pointwise max over the finite family; ``diagonal``
    takes ``max{h_j(n) : j <= n} + 1`` as for an enumerated family.
    """

    def __init__(self, family: SequenceFamily, base: DivergingSequence, mode: str = STRONG):
        if mode not in (STRONG, DIAGONAL):
            raise ValueError(f"mode must be {STRONG!r} or {DIAGONAL!r}")
        self.family = family
        self.base = base
        self.mode = mode
        self._cells: dict[tuple[int, int], Separation] = {}
        self._lock = threading.Lock()
        self.h_per_member = [
            OmegaFunction(lambda n, a=a: self.cell(a, n).h, {"kind": "separation", "member": a})
            for a in range(len(family))
        ]
        if mode == STRONG:
            self.h_combined = OmegaFunction(
                lambda n: max(h(n) for h in self.h_per_member), {"kind": "separation-max"})
        else:
            self.h_combined = diagonal_dominator(self.h_per_member)

    @property
    def approximate(self) -> bool:
        return self.family.approximate

    def cell(self, member: int, n: int) -> Separation:
        key = (member, n)
        with self._lock:
            if key in self._cells:
                return self._cells[key]
        sep = self._compute(member, n)
        with self._lock:
            self._cells[key] = sep
        return sep

    def _compute(self, member: int, n: int) -> Separation:
        s = self.family[member]
        a = self.base.term(n)
        best = None
        for k, t in terms_in(s, Interval(a - 1, a + 1)):
            lo, hi = s.bounds(k)
            if lo <= a <= hi:
                raise CollisionError(member, n, t)
            d = lo - a if a < lo else a - hi
            if best is None or d < best[1]:
                best = (k, d)
        if best is None:
            return Separation(1)
        return Separation(math.ceil(1 / best[1]), best[0], best[1])

    def radius(self, n: int) -> Fraction:
        return Fraction(1, self.h_combined(n))

    def interval(self, n: int) -> Interval:
        a, r = self.base.term(n), self.radius(n)
        return Interval(a - r, a + r)

    def open_union(self) -> OpenUnion:
        """The whole (untruncated) adversarial set as a lazily generated union."""
        stream = FunctionStream(
            self.interval, "up",
            # centre in (m, m+1) and radius <= 1: lo(m) > m-1 and hi(m) < m+2
            index_bound=lambda x: max(0, math.ceil(x) + 1),
            index_floor=lambda x: max(0, math.floor(x) - 1),
            descriptor={"kind": "adversary", "mode": self.mode})
        return OpenUnion(OpenSet(), stream)

    def minimality_holds(self, member: int, n: int) -> bool:
        """When ``h > 1``, the radius ``1/(h-1)`` interval really does catch a member term."""
        sep = self.cell(member, n)
        if sep.h == 1:
            return True
        s = self.family[member]
        lo, hi = s.bounds(sep.nearest)
        a = self.base.term(n)
        r = Fraction(1, sep.h - 1)
        return a - r < lo and hi < a + r


def separation_profile(family, base: DivergingSequence | None = None, mode: str = STRONG) -> SeparationProfile:
    family = _as_family(family)
    return SeparationProfile(family, base if base is not None else avoiding_base(family), mode)


@dataclass(frozen=True)
class Hit:
    n: int
    interval_index: int
    term: Fraction

    def to_json(self):
        return {"n": self.n, "interval_index": self.interval_index, "term": format_rational(self.term)}


@dataclass(frozen=True)
class AvoidanceCertificate:
    """Every term of one member inside the truncated adversarial set.

    The claim: hits only come from intervals with index below ``from_index``
    (0 in strong mode, the member's own index in diagonal mode); from there
    on the combined radius is no larger than the member's separating radius.
    """

    member: int
    mode: str
    horizon: int
    hits: tuple[Hit, ...]
    from_index: int
    approximate: bool = False

    @property
    def count(self) -> int:
        return len(self.hits)

    def to_json(self):
        return {"member": self.member, "mode": self.mode, "horizon": self.horizon,
                "hits": [h.to_json() for h in self.hits], "count": self.count,
                "tail": {"kind": _TAIL_KIND[self.mode], "from_index": self.from_index},
                "approximate": self.approximate}


def adversarial_open_set(profile: SeparationProfile, horizon: int) -> tuple[OpenSet, list[AvoidanceCertificate]]:
    """Union of the first ``horizon`` intervals plus one certificate per member."""
    intervals = [profile.interval(n) for n in range(horizon)]
    U = normalize(intervals)
    certs = []
    for a, s in enumerate(profile.family):
        seen: dict[int, Hit] = {}
        for k, iv in enumerate(intervals):
            for n, t in terms_in(s, iv):
                if n not in seen:
                    seen[n] = Hit(n, k, t)
        start = 0 if profile.mode == STRONG else a
        certs.append(AvoidanceCertificate(a, profile.mode, horizon,
                                          tuple(sorted(seen.values(), key=lambda h: h.n)),
                                          start, s.approximate))
    return U, certs


def recheck_certificate(cert: AvoidanceCertificate, profile: SeparationProfile, U: OpenSet,
                        scan_factor: int = 10) -> list[str]:
    """Independent re-check: brute membership scan plus the tail schema.  Returns failures."""
    failures = []
    s = profile.family[cert.member]
    top = max((c.hi for c in U.components), default=Fraction(0))
    limit = scan_factor * max(1, s.divergence_modulus(top))
    found = {}
    for n in range(limit):
        lo, hi = s.bounds(n)
        if lo > top:
            continue
        if lo in U if lo == hi else _meets(U, lo, hi):
            found[n] = s.term(n)
    claimed = {h.n: h.term for h in cert.hits}
    if found != claimed:
        failures.append(f"member {cert.member}: scan found {sorted(found)} but certificate claims {sorted(claimed)}")
    for h in cert.hits:
        if h.interval_index >= cert.from_index and not cert.approximate:
            failures.append(f"member {cert.member}: hit {h.n} in interval {h.interval_index} past the tail index")
    for k in range(cert.from_index, cert.horizon):
        if profile.h_combined(k) < profile.cell(cert.member, k).h:
            failures.append(f"member {cert.member}: combined radius exceeds separating radius at {k}")
    return failures


def _meets(U: OpenSet, lo, hi) -> bool:
    return any(c.lo < hi and lo < c.hi for c in U.components)


def verify_certificates(profile: SeparationProfile, U: OpenSet, certs: Sequence[AvoidanceCertificate]) -> None:
    failures = [f for c in certs for f in recheck_certificate(c, profile, U)]
    if failures:
        raise VerificationError("; ".join(failures))
