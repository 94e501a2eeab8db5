"""Exact rationals, open intervals and normalized finite unions of open intervals.

Rationals are :class:`fractions.Fraction`; infinite endpoints are the float
infinities, which compare exactly against any Fraction.  No arithmetic ever
touches a float: infinite endpoints are handled by case analysis.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
INF = math.inf
NEG_INF = -math.inf

Endpoint = Union[Fraction, float]


def rational(value) -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Accepts ints, Fractions and strings such as ``"3/4"`` or ``"-2"``.
    Floats and bools are refused so nothing inexact sneaks in.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if "." in s or "e" in s.lower():
            raise ValueError(f"rational strings must be 'p/q' or 'p', got {value!r}")
        return Fraction(s)
    raise TypeError(f"cannot make an exact rational from {type(value).__name__}: {value!r}")


def format_rational(q: Fraction) -> str:
    q = rational(q)
    return f"{q.numerator}/{q.denominator}"


def parse_endpoint(text) -> Endpoint:
    if text == "-inf":
        return NEG_INF
    if text == "+inf":
        return INF
    return rational(text)


def format_endpoint(x: Endpoint) -> str:
    if x == INF:
        return "+inf"
    if x == NEG_INF:
        return "-inf"
    return format_rational(x)


def _check_endpoint(x) -> Endpoint:
    if isinstance(x, float):
        if not math.isinf(x):
            raise TypeError(f"finite float endpoint {x!r} is not exact")
        return x
    return rational(x)


@dataclass(frozen=True)
class Interval:
    """Open interval ``(lo, hi)`` with ``lo < hi``; either end may be infinite."""

    lo: Endpoint
    hi: Endpoint

    def __post_init__(self):
        lo = _check_endpoint(self.lo)
        hi = _check_endpoint(self.hi)
        if lo == INF or hi == NEG_INF:
            raise ValueError(f"bad infinite endpoint in ({self.lo}, {self.hi})")
        if not lo < hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __contains__(self, x) -> bool:
        return self.lo < x < self.hi

    @property
    def bounded(self) -> bool:
        return self.lo != NEG_INF and self.hi != INF

    @property
    def width(self) -> Fraction:
        if not self.bounded:
            raise ValueError("unbounded interval has no width")
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        if not self.bounded:
            raise ValueError("unbounded interval has no midpoint")
        return (self.lo + self.hi) / 2

    def meets(self, other: "Interval") -> bool:
        return self.lo < other.hi and other.lo < self.hi

    def intersect(self, other: "Interval") -> "Interval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return Interval(lo, hi) if lo < hi else None

    def middle_half(self) -> tuple[Fraction, Fraction]:
        """Closed middle half ``[lo + w/4, hi - w/4]`` of a bounded interval."""
        w = self.width
        return self.lo + w / 4, self.hi - w / 4

    def affine(self, scale: Fraction, shift: Fraction) -> "Interval":
        a = _affine_endpoint(self.lo, scale, shift)
        b = _affine_endpoint(self.hi, scale, shift)
        return Interval(a, b) if scale > 0 else Interval(b, a)

    def to_json(self) -> dict:
        return {"lo": format_endpoint(self.lo), "hi": format_endpoint(self.hi)}

    @classmethod
    def from_json(cls, obj) -> "Interval":
        return cls(parse_endpoint(obj["lo"]), parse_endpoint(obj["hi"]))


def _affine_endpoint(x: Endpoint, scale: Fraction, shift: Fraction) -> Endpoint:
    if isinstance(x, float):
        return x if scale > 0 else -x
    return scale * x + shift


def interval(lo, hi) -> Interval:
    """Shorthand accepting strings/ints for endpoints."""
    conv = lambda v: v if isinstance(v, float) else (parse_endpoint(v) if isinstance(v, str) else rational(v))
    return Interval(conv(lo), conv(hi))


@dataclass(frozen=True)
class OpenSet:
    """Finite union of pairwise disjoint open intervals, sorted by left endpoint.

    Build with :func:`normalize`; the constructor only checks the invariants.
    Components may touch at an endpoint (that point is outside the set) but
    never overlap.
    """

    components: tuple[Interval, ...] = ()

    def __post_init__(self):
        comps = tuple(self.components)
        for a, b in zip(comps, comps[1:]):
            if not a.hi <= b.lo:
                raise ValueError(f"components {a} and {b} overlap or are unsorted")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "_los", [c.lo for c in comps])

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __contains__(self, x) -> bool:
        return self.component_containing(x) is not None

    def component_containing(self, x) -> Interval | None:
        i = bisect.bisect_left(self._los, x) - 1
        if i >= 0 and x < self.components[i].hi:
            return self.components[i]
        return None

    @property
    def unbounded_above(self) -> bool:
        return bool(self.components) and self.components[-1].hi == INF

    @property
    def clustered_at_zero(self) -> bool:
        """Every ``(0, eps)`` meets the set; for a finite union that needs a component straddling 0."""
        c = self.component_containing(Fraction(0))
        if c is not None:
            return True
        return any(c.lo == 0 for c in self.components)

    def measure(self) -> Fraction:
        """Sum of the lengths of the bounded components."""
        return sum((c.width for c in self.components if c.bounded), Fraction(0))

    def snapshot(self, a, b) -> "OpenSet":
        return OpenSet(tuple(c for c in self.components if c.lo < b and c.hi > a))

    def interval_above(self, c) -> Interval | None:
        """Leftmost component lying wholly above ``c``; inside a final ray, ``(floor(c)+1, inf)``."""
        i = bisect.bisect_right(self._los, c)
        if i < len(self.components):
            return self.components[i]
        if self.unbounded_above and self.components[-1].lo <= c:
            return Interval(Fraction(math.floor(c) + 1), INF)
        return None

    def interval_near_zero(self, delta) -> tuple[Interval, Fraction] | None:
        """Rightmost component meeting ``(0, delta)`` and a rational point of it inside ``(0, delta)``."""
        best = None
        for c in self.components:
            if c.lo < delta and c.hi > 0:
                best = c
        if best is None:
            return None
        lo = max(best.lo, Fraction(0))
        hi = min(best.hi, delta)
        return best, (lo + hi) / 2

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components]}

    @classmethod
    def from_json(cls, obj) -> "OpenSet":
        return normalize(Interval.from_json(c) for c in obj["components"])


def normalize(raw: Iterable[Interval]) -> OpenSet:
    """Merge overlapping open intervals into a sorted disjoint union.

    Intervals sharing only an endpoint stay separate: the shared point is in
    neither, so the union is not connected there.
    """
    items = sorted(raw, key=lambda c: (c.lo, c.hi))
    out: list[Interval] = []
    for c in items:
        if not isinstance(c, Interval):
            raise TypeError(f"expected Interval, got {c!r}")
        if out and c.lo < out[-1].hi:
            if c.hi > out[-1].hi:
                out[-1] = Interval(out[-1].lo, c.hi)
        else:
            out.append(c)
    return OpenSet(tuple(out))


def member(x, U) -> bool:
    """Exact membership of a rational in a finite or lazily generated open set."""
    return x in U


def segment_inside(U, a, b) -> bool:
    """Is the closed segment ``[a, b]`` contained in the open set ``U``?"""
    if a > b:
        a, b = b, a
    if a == b:
        return a in U
    if isinstance(U, OpenUnion) and U.stream.direction == "down" and a <= 0:
        return False
    return any(c.lo < a and b < c.hi for c in U.snapshot(a, b).components)


def affine_image(U: OpenSet, scale, shift) -> OpenSet:
    """``{scale*x + shift : x in U}``; a negative scale reverses component order."""
    scale = rational(scale)
    shift = rational(shift)
    if scale == 0:
        raise ValueError("scale must be nonzero")
    return normalize(c.affine(scale, shift) for c in U.components)


EMPTY = OpenSet()


def _least(pred, start: int = 0) -> int:
    """Least ``m >= start`` with ``pred(m)`` true, for a predicate monotone in ``m``."""
    if pred(start):
        return start
    step = 1
    lo = start
    hi = start + 1
    while not pred(hi):
        lo = hi
        step *= 2
        hi = start + step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


class ComponentStream:
    """Countably many open intervals indexed by ``m = 0, 1, 2, ...``.

    ``direction`` is ``"up"`` (components drift to +inf) or ``"down"``
    (components shrink onto 0 from the right).  Subclasses give two index
    bounds so membership scans stay finite:

    * up: ``index_bound(x)`` -- every ``m >= M`` has ``lo(m) >= x``;
      ``index_floor(x)`` -- every ``m < F`` has ``hi(m) <= x``.
    * down (``x > 0``): ``index_bound(x)`` -- every ``m >= M`` has ``hi(m) <= x``;
      ``index_floor(x)`` -- every ``m < F`` has ``lo(m) >= x``.

    Components may overlap; snapshots normalize them.
    """

    direction: str = "up"

    def component(self, m: int) -> Interval:
        raise NotImplementedError

    def index_bound(self, x) -> int:
        raise NotImplementedError

    def index_floor(self, x) -> int:
        return 0

    def to_json(self) -> dict:
        raise TypeError(f"{type(self).__name__} has no JSON presentation")

    def candidates(self, a, b) -> range:
        """Indices whose components may meet the closed range ``[a, b]``."""
        if self.direction == "up":
            return range(self.index_floor(a), self.index_bound(b) + 1)
        if a <= 0:
            raise ValueError("down streams are only scanned away from 0")
        return range(self.index_floor(b), self.index_bound(a) + 1)

    def containing(self, x) -> Interval | None:
        if self.direction == "down" and x <= 0:
            return None
        for m in self.candidates(x, x):
            c = self.component(m)
            if x in c:
                return c
        return None


class BlockStream(ComponentStream):
    """Stream made of affine copies ``scale(m) * cell + shift(m)`` of a bounded cell.

    The three serializable kinds:

    * ``periodic``: shift ``offset + m*period``, scale 1 (up)
    * ``geometric``: scale ``ratio**m`` (down when ratio < 1, up when > 1)
    * ``power``: shift ``coefficient * m**exponent``, scale 1 (up)
    """

    def __init__(self, kind: str, cell: OpenSet, **params):
        if not cell.components or not all(c.bounded for c in cell.components):
            raise ValueError("stream cell must be a nonempty bounded open set")
        self.kind = kind
        self.cell = cell
        self.params = {k: rational(v) if k != "exponent" else int(v) for k, v in params.items()}
        self._lo = cell.components[0].lo
        self._hi = cell.components[-1].hi
        if kind == "periodic":
            if self.params["period"] <= 0:
                raise ValueError("period must be positive")
            self.params.setdefault("offset", Fraction(0))
            self.direction = "up"
        elif kind == "geometric":
            r = self.params["ratio"]
            if r <= 0 or r == 1:
                raise ValueError("geometric ratio must be positive and != 1")
            if self._lo < 0:
                raise ValueError("geometric cell must lie in [0, inf)")
            self.direction = "down" if r < 1 else "up"
            if self.direction == "up" and self._lo == 0:
                raise ValueError("an expanding geometric cell must lie in (0, inf)")
        elif kind == "power":
            if self.params["exponent"] < 1 or self.params["coefficient"] <= 0:
                raise ValueError("power stream needs exponent >= 1 and coefficient > 0")
            self.direction = "up"
        else:
            raise ValueError(f"unknown stream kind {kind!r}")

    def _block(self, m: int) -> tuple[Fraction, Fraction]:
        p = self.params
        if self.kind == "periodic":
            return Fraction(1), p["offset"] + m * p["period"]
        if self.kind == "geometric":
            return p["ratio"] ** m, Fraction(0)
        return Fraction(1), p["coefficient"] * m ** p["exponent"]

    def component(self, m: int) -> Interval:
        block, k = divmod(m, len(self.cell))
        scale, shift = self._block(block)
        return self.cell.components[k].affine(scale, shift)

    def _block_lo(self, block):
        s, t = self._block(block)
        return s * self._lo + t

    def _block_hi(self, block):
        s, t = self._block(block)
        return s * self._hi + t

    def index_bound(self, x) -> int:
        n = len(self.cell)
        if self.direction == "up":
            return n * _least(lambda b: self._block_lo(b) >= x)
        return n * _least(lambda b: self._block_hi(b) <= x)

    def index_floor(self, x) -> int:
        n = len(self.cell)
        if self.direction == "up":
            # blocks before the first with hi > x are entirely <= x
            return n * _least(lambda b: self._block_hi(b) > x)
        return n * _least(lambda b: self._block_lo(b) < x)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "cell": [c.to_json() for c in self.cell.components]}
        for k, v in sorted(self.params.items()):
            out[k] = v if k == "exponent" else format_rational(v)
        return out

    @classmethod
    def from_json(cls, obj) -> "BlockStream":
        cell = normalize(Interval.from_json(c) for c in obj["cell"])
        params = {k: v for k, v in obj.items() if k not in ("kind", "cell")}
        return cls(obj["kind"], cell, **params)


class FunctionStream(ComponentStream):
    """Stream given by Python callables; used for lazily built sets such as the adversary's."""

    def __init__(self, component, direction, index_bound, index_floor=None, descriptor=None):
        self._component = component
        self.direction = direction
        self._bound = index_bound
        self._floor = index_floor
        self.descriptor = descriptor or {}

    def component(self, m):
        return self._component(m)

    def index_bound(self, x):
        return self._bound(x)

    def index_floor(self, x):
        return self._floor(x) if self._floor else 0


@dataclass(frozen=True)
class OpenUnion:
    """A finite open set together with an infinite component stream.

    This is how sets like ``U(m^2, m^2+1)`` or ``U(2^-m-1, 2^-m)`` are
    represented: membership and all derived queries stay exact and finite.
    """

    head: OpenSet
    stream: ComponentStream

    def __contains__(self, x) -> bool:
        return x in self.head or self.stream.containing(x) is not None

    def component_containing(self, x) -> Interval | None:
        return self.head.component_containing(x) or self.stream.containing(x)

    @property
    def unbounded_above(self) -> bool:
        return self.head.unbounded_above or self.stream.direction == "up"

    @property
    def clustered_at_zero(self) -> bool:
        return self.head.clustered_at_zero or self.stream.direction == "down"

    def snapshot(self, a, b) -> OpenSet:
        """All components meeting ``(a, b)``, normalized (``a > 0`` for down streams)."""
        raw = list(self.head.snapshot(a, b).components)
        for m in self.stream.candidates(a, b):
            c = self.stream.component(m)
            if c.lo < b and c.hi > a:
                raw.append(c)
        return normalize(raw)

    def interval_above(self, c) -> Interval | None:
        best = self.head.interval_above(c)
        if self.stream.direction == "up":
            for m in range(self.stream.index_floor(c), self.stream.index_bound(c + 1) + 1):
                comp = self.stream.component(m)
                if comp.lo > c and (best is None or comp.lo < best.lo):
                    best = comp
        return best

    def interval_near_zero(self, delta) -> tuple[Interval, Fraction] | None:
        found = self.head.interval_near_zero(delta)
        best = found[0] if found else None
        if self.stream.direction == "down":
            for m in range(self.stream.index_floor(delta), self.stream.index_bound(delta) + 1):
                comp = self.stream.component(m)
                if comp.lo < delta and (best is None or comp.lo > best.lo):
                    best = comp
        if best is None:
            return None
        lo = max(best.lo, Fraction(0))
        hi = min(best.hi, delta)
        return best, (lo + hi) / 2

    def to_json(self) -> dict:
        out = self.head.to_json()
        out["stream"] = self.stream.to_json()
        return out


OpenRegion = Union[OpenSet, OpenUnion]


def open_region_from_json(obj) -> OpenRegion:
    head = OpenSet.from_json({"components": obj.get("components", [])})
    if "stream" in obj:
        return OpenUnion(head, BlockStream.from_json(obj["stream"]))
    return head


def periodic_set(cell: Sequence[Interval] | OpenSet, period, offset=0, head: OpenSet = EMPTY) -> OpenUnion:
    cell = cell if isinstance(cell, OpenSet) else normalize(cell)
    return OpenUnion(head, BlockStream("periodic", cell, period=period, offset=offset))


def geometric_set(cell: Sequence[Interval] | OpenSet, ratio, head: OpenSet = EMPTY) -> OpenUnion:
    cell = cell if isinstance(cell, OpenSet) else normalize(cell)
    return OpenUnion(head, BlockStream("geometric", cell, ratio=ratio))


def power_set(cell: Sequence[Interval] | OpenSet, exponent: int = 2, coefficient=1, head: OpenSet = EMPTY) -> OpenUnion:
    cell = cell if isinstance(cell, OpenSet) else normalize(cell)
    return OpenUnion(head, BlockStream("power", cell, exponent=exponent, coefficient=coefficient))
