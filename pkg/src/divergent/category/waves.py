"""Finite-horizon probe for the families ``n + h(n*x)`` and ``n + frac(n*x)``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from ..exact import OpenRegion, format_rational
from ..sequences import TRIANGLE, Wave, WaveSequence


def farey(max_denominator: int) -> Iterator[Fraction]:
    """Farey fractions in ``[0, 1]`` with denominator ``<= max_denominator``, ascending."""
    if max_denominator < 1:
        raise ValueError("max_denominator must be >= 1")
    a, b, c, d = 0, 1, 1, max_denominator
    yield Fraction(a, b)
    while c <= max_denominator:
        k = (max_denominator + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        yield Fraction(a, b)


@dataclass(frozen=True)
class WaveProbeResult:
    found: bool
    horizon: int
    tried: int
    x: Fraction | None = None
    hits: tuple[int, ...] = ()

    def to_json(self):
        out = {"status": "witness" if self.found else "exhausted", "horizon": self.horizon, "tried": self.tried}
        if self.found:
            out["x"] = format_rational(self.x)
            out["hits"] = list(self.hits)
        return out


def count_hits(seq: WaveSequence, U: OpenRegion, horizon: int, limit: int | None = None) -> list[int]:
    hits = []
    for n in range(horizon):
        if seq.term(n) in U:
            hits.append(n)
            if limit is not None and len(hits) == limit:
                break
    return hits


def wave_family_probe(U: OpenRegion, wave: Wave | None = TRIANGLE, max_denominator: int = 16,
                      hits: int = 10, horizon: int = 100, candidates=None) -> WaveProbeResult:
    """First ``x`` (Farey order over one wave period) with ``hits`` indices ``n < horizon``
    such that ``n + h(n*x)`` lies in ``U``.  ``wave=None`` selects ``frac(n*x)``.

    Demonstrational only: success at a finite horizon says nothing about
    the infinite family.
    """
    if hits < 1:
        raise ValueError("hits must be >= 1")
    if not U.unbounded_above:
        raise ValueError("U must be unbounded above")
    period = wave.period if wave is not None else Fraction(1)
    xs = candidates if candidates is not None else (period * f for f in farey(max_denominator))
    tried = 0
    for x in xs:
        tried += 1
        found = count_hits(WaveSequence(x, wave), U, horizon, hits)
        if len(found) >= hits:
            return WaveProbeResult(True, horizon, tried, Fraction(x), tuple(found))
    return WaveProbeResult(False, horizon, tried)
