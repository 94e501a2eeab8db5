"""Tent functions over the avoiding open set: a continuous bump function that vanishes along
every member of a family yet keeps returning to 1."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

from ..adversary import STRONG, adversarial_open_set, separation_profile
from ..exact import OpenSet, format_rational
from ..sequences import SequenceFamily


@dataclass(frozen=True)
class TentFunction:
    """Piecewise-linear ``f``: a tent of height 1 over each bounded component, 0 elsewhere."""

    support: OpenSet

    def __post_init__(self):
        if not all(c.bounded for c in self.support.components):
            raise ValueError("tents need bounded components")

    def __call__(self, y) -> Fraction:
        c = self.support.component_containing(y)
        if c is None:
            return Fraction(0)
        half = c.width / 2
        return 1 - abs(y - c.midpoint) / half

    def vanishes_on(self, lo, hi) -> bool:
        """``f`` is 0 on all of ``[lo, hi]``."""
        return not any(c.lo < hi and lo < c.hi for c in self.support.components)

    @property
    def peaks(self) -> list[Fraction]:
        return [c.midpoint for c in self.support.components]

    def to_json(self):
        return {"kind": "tents", "tents": [c.to_json() for c in self.support.components]}


@dataclass(frozen=True)
class BumpDemo:
    f: TentFunction
    horizon: int
    zero_checks: tuple[dict, ...]
    peaks: tuple[Fraction, ...]
    approximate: bool

    @property
    def vanishes_along_family(self) -> bool:
        return all(z["nonzero"] == 0 for z in self.zero_checks)

    @property
    def peaks_escape(self) -> bool:
        p = self.peaks
        return (all(self.f(x) == 1 for x in p) and all(a < b for a, b in zip(p, p[1:]))
                and bool(p) and p[-1] > self.horizon - 1)

    def to_json(self):
        return {"f": self.f.to_json(), "horizon": self.horizon,
                "zero_checks": list(self.zero_checks),
                "peaks": [format_rational(p) for p in self.peaks],
                "vanishes_along_family": self.vanishes_along_family,
                "peaks_escape": self.peaks_escape, "approximate": self.approximate}


def bump_transfer_demo(family, horizon: int = 512) -> BumpDemo:
    """Tents over the strong-mode adversarial set of ``family``.

    Every member term avoids the set, so ``f(term) = 0`` along each member
    while ``f = 1`` at component midpoints marching off to infinity.
    """
    family = family if isinstance(family, SequenceFamily) else SequenceFamily(tuple(family))
    profile = separation_profile(family, mode=STRONG)
    U, _ = adversarial_open_set(profile, horizon)
    f = TentFunction(U)
    top = U.components[-1].hi
    checks = []
    for a, s in enumerate(family):
        # every index below the horizon, and every term below the top of the support
        last = max(horizon, s.divergence_modulus(top))
        nonzero = [n for n in range(last) if not f.vanishes_on(*s.bounds(n))]
        checks.append({"member": a, "checked_indices": last, "nonzero": len(nonzero),
                       "first_nonzero": nonzero[:5]})
    return BumpDemo(f, horizon, tuple(checks), tuple(f.peaks), family.approximate)
