"""Constructive Baire category: dense open sets as oracles, threaded by nested intervals.

A :class:`DenseOpenOracle` answers any bounded query interval with a closed
rational subinterval lying inside its dense open set.  :func:`baire_witness`
feeds the oracles one after another, halving the width at every stage, so the
final midpoint lies in all of the sets at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from ..errors import OracleContractError
from ..exact import Interval, format_rational


@dataclass(frozen=True)
class Refinement:
    """Closed interval ``[lo, hi]`` returned by an oracle, with its witness data."""

    lo: Fraction
    hi: Fraction
    meta: dict = field(default_factory=dict)


class DenseOpenOracle:
    """Subclasses implement :meth:`refine` and :meth:`certify`.

    ``certify`` is the independent check: given a refinement and its
    metadata it decides exactly whether all of ``[lo, hi]`` lies in the set.
    """

    descriptor: dict = {}

    def refine(self, query: Interval) -> Refinement:
        raise NotImplementedError

    def certify(self, ref: Refinement) -> bool:
        raise NotImplementedError

    def contains(self, x, meta: dict) -> bool:
        """Does the witness recorded in ``meta`` place ``x`` in the set?"""
        return self.certify(Refinement(x, x, meta))


class WholeLineOracle(DenseOpenOracle):
    """The whole line; refines to the closed middle half."""

    descriptor = {"kind": "whole-line"}

    def refine(self, query):
        lo, hi = query.middle_half()
        return Refinement(lo, hi, {})

    def certify(self, ref):
        return True


class PointComplementOracle(DenseOpenOracle):
    """``R minus {q}``: keep the larger side of the split (left on ties)."""

    def __init__(self, q):
        self.q = Fraction(q)
        self.descriptor = {"kind": "point-complement", "q": format_rational(self.q)}

    def refine(self, query):
        side = query
        if self.q in query:
            left, right = Interval(query.lo, self.q), Interval(self.q, query.hi)
            side = left if left.width >= right.width else right
        lo, hi = side.middle_half()
        return Refinement(lo, hi, {})

    def certify(self, ref):
        return not (ref.lo <= self.q <= ref.hi)


@dataclass(frozen=True)
class Stage:
    oracle: dict
    query: Interval
    refined: tuple[Fraction, Fraction]
    meta: dict

    def to_json(self):
        return {"oracle": self.oracle, "query": self.query.to_json(),
                "refined": [format_rational(self.refined[0]), format_rational(self.refined[1])],
                "meta": _meta_json(self.meta)}


def _meta_json(meta: dict) -> dict:
    out = {}
    for k, v in meta.items():
        if isinstance(v, Fraction):
            out[k] = format_rational(v)
        elif isinstance(v, Interval):
            out[k] = v.to_json()
        else:
            out[k] = v
    return out


@dataclass(frozen=True)
class BaireChain:
    start: Interval
    stages: tuple[Stage, ...]

    @property
    def final_point(self) -> Fraction:
        if not self.stages:
            return self.start.midpoint
        lo, hi = self.stages[-1].refined
        return (lo + hi) / 2

    def to_json(self):
        return {"start": self.start.to_json(), "stages": [s.to_json() for s in self.stages],
                "final_point": format_rational(self.final_point)}


def _shrink(lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    if hi - lo <= width / 2:
        return lo, hi
    w = hi - lo
    return lo + w / 4, hi - w / 4


def run_chain(start: Interval, next_oracle: Callable[[int, Stage | None], DenseOpenOracle | None]) -> tuple[BaireChain, list[DenseOpenOracle]]:
    """Thread oracles produced one at a time; ``next_oracle`` returns None to stop.

    Each stage's oracle may depend on the previous stage (its metadata picks
    the next index bound), which is how the witness searches keep their hit
    indices strictly increasing.
    """
    if not start.bounded:
        raise ValueError("a Baire chain starts from a bounded interval")
    stages: list[Stage] = []
    used: list[DenseOpenOracle] = []
    query = start
    t = 0
    while True:
        oracle = next_oracle(t, stages[-1] if stages else None)
        if oracle is None:
            break
        ref = oracle.refine(query)
        if not (query.lo < ref.lo < ref.hi < query.hi):
            raise OracleContractError(t, f"[{ref.lo}, {ref.hi}] is not a closed subinterval of {query}")
        if not oracle.certify(ref):
            raise OracleContractError(t, f"[{ref.lo}, {ref.hi}] is not inside {oracle.descriptor}")
        lo, hi = _shrink(ref.lo, ref.hi, query.width)
        stages.append(Stage(oracle.descriptor, query, (lo, hi), ref.meta))
        used.append(oracle)
        query = Interval(lo, hi)
        t += 1
    return BaireChain(start, tuple(stages)), used


def baire_witness(oracles: Sequence[DenseOpenOracle], start: Interval) -> BaireChain:
    """Nested closed intervals, one stage per oracle; the final midpoint lies in every set."""
    oracles = list(oracles)
    chain, _ = run_chain(start, lambda t, prev: oracles[t] if t < len(oracles) else None)
    return chain


def chain_failures(chain: BaireChain, oracles: Sequence[DenseOpenOracle]) -> list[str]:
    """Re-check nesting, halving and final-point membership; empty list means sound."""
    failures = []
    outer = chain.start
    x = chain.final_point
    for t, (stage, oracle) in enumerate(zip(chain.stages, oracles)):
        lo, hi = stage.refined
        if not (outer.lo < lo < hi < outer.hi):
            failures.append(f"stage {t}: not nested in {outer}")
        if (hi - lo) * 2 > outer.width:
            failures.append(f"stage {t}: width did not halve")
        if not lo <= x <= hi:
            failures.append(f"stage {t}: final point outside")
        if not oracle.certify(Refinement(lo, hi, stage.meta)):
            failures.append(f"stage {t}: refined interval not inside the oracle set")
        outer = Interval(lo, hi)
    if len(chain.stages) != len(oracles):
        failures.append("stage/oracle count mismatch")
    return failures
