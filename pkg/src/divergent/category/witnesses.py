"""Witness searches built on the Baire engine.

* multiplicative form: find ``x`` with ``x/k`` in ``U`` for many ``k``, where
  ``U`` clusters at 0 (the sets ``U_{k>=n} kU`` are dense open in ``(0, inf)``);
* translation form: find ``r`` with ``r + s(n)`` in ``U`` for many ``n``, where
  ``s`` has gaps tending to 0 and ``U`` is unbounded above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..enclosures import default_precision_bits, log_enclosure
from ..errors import CapabilityError, VerificationError
from ..exact import INF, Interval, OpenRegion, format_rational, segment_inside
from ..sequences import DivergingSequence
from .baire import BaireChain, DenseOpenOracle, Refinement, run_chain


def _component(meta_value) -> Interval:
    return meta_value if isinstance(meta_value, Interval) else Interval.from_json(meta_value)


class ScaledUnionOracle(DenseOpenOracle):
    """Oracle for ``U_{k >= n} kU`` on queries ``(p, q)`` with ``0 < p < q``.

    Picks a point ``x`` of ``U`` below ``min(q - p, p/n)`` (rightmost admissible
    component), sets ``k = floor(p/x) + 1`` so that ``kx`` lands in ``(p, q)``,
    and returns the middle half of ``k * component`` cut to the query.
    """

    def __init__(self, U: OpenRegion, n: int):
        if not U.clustered_at_zero:
            raise ValueError("scaled unions are only dense when U clusters at 0")
        if n < 1:
            raise ValueError("scaled union index starts at 1")
        self.U = U
        self.n = n
        self.descriptor = {"kind": "scaled-union", "n": n}

    def refine(self, query):
        if not query.bounded or query.lo <= 0:
            raise ValueError(f"query {query} must be bounded and lie in (0, inf)")
        p, q = query.lo, query.hi
        delta = min(q - p, p / self.n)
        comp, x = self.U.interval_near_zero(delta)
        k = math.floor(p / x) + 1
        hit = comp.affine(Fraction(k), Fraction(0)).intersect(query)
        lo, hi = hit.middle_half()
        return Refinement(lo, hi, {"k": k, "x": x, "component": comp})

    def certify(self, ref):
        k = ref.meta["k"]
        return k >= self.n and segment_inside(self.U, ref.lo / k, ref.hi / k)


def scaled_union_oracle(U: OpenRegion, n: int) -> ScaledUnionOracle:
    return ScaledUnionOracle(U, n)


class TranslationDenseOracle(DenseOpenOracle):
    """Oracle for ``{r : r + s(n) in U for some n >= t}``.

    On a query ``(alpha, beta)`` the gaps of ``s`` past index ``N0`` are below
    half the query width, so as ``n`` grows the window ``U_component - s(n)``
    creeps leftwards in steps too short to jump over the query.
    """

    def __init__(self, U: OpenRegion, s: DivergingSequence, stage: int):
        if not U.unbounded_above:
            raise ValueError("translation density needs U unbounded above")
        if s.approximate:
            raise CapabilityError("exact terms", "translation witnesses need exact sequence terms")
        self.U = U
        self.s = s
        self.t = stage
        self.descriptor = {"kind": "translation", "t": stage}

    def refine(self, query):
        if not query.bounded:
            raise ValueError("query must be bounded")
        alpha, beta = query.lo, query.hi
        eps = (beta - alpha) / 2
        n0 = max(self.t, self.s.gap_modulus(eps))
        comp = self.U.interval_above(self.s.term(n0) + beta)
        u = comp.lo
        if self.s.monotone:
            n = max(n0, self.s.first_index_above(u - beta))
        else:
            n = n0
            end = self.s.divergence_modulus(u - alpha)
            while not self.s.term(n) > u - beta:
                n += 1
                if n > end:
                    raise CapabilityError("divergence_modulus", "unsound while scanning translations")
        shift = self.s.term(n)
        window = comp.affine(Fraction(1), -shift).intersect(query)
        if window is None:
            raise CapabilityError("gap_modulus", f"window jumped over the query at index {n}")
        lo, hi = window.middle_half()
        return Refinement(lo, hi, {"n": n, "component": comp})

    def certify(self, ref):
        n = ref.meta["n"]
        shift = self.s.term(n)
        return n >= self.t and segment_inside(self.U, ref.lo + shift, ref.hi + shift)


def translation_dense_oracle(U: OpenRegion, s: DivergingSequence, stage: int) -> TranslationDenseOracle:
    return TranslationDenseOracle(U, s, stage)


@dataclass(frozen=True)
class Witness:
    """A point with its exactly verified hits and the chain that produced it.

    ``hits`` are ``(index, point)`` pairs: ``(k, x/k)`` for the multiplicative
    search, ``(n, r + s(n))`` for the translation search.
    """

    point: Fraction
    hits: tuple[tuple[int, Fraction], ...]
    chain: BaireChain
    kind: str

    def to_json(self):
        key = "k" if self.kind == "theorem3" else "n"
        name = "x" if self.kind == "theorem3" else "r"
        return {name: format_rational(self.point),
                "hits": [{key: i, "point": format_rational(p)} for i, p in self.hits],
                "chain": self.chain.to_json()}


def theorem3_witness(U: OpenRegion, depth: int, start: Interval) -> Witness:
    """``x`` in ``start`` with ``depth`` distinct ``k`` such that ``x/k`` lies in ``U``."""
    if not U.clustered_at_zero:
        raise ValueError("U must cluster at 0")
    if not start.bounded or start.lo <= 0:
        raise ValueError("start must be a bounded interval inside (0, inf)")

    def next_oracle(t, prev):
        if t >= depth:
            return None
        return ScaledUnionOracle(U, 1 if prev is None else prev.meta["k"] + 1)

    chain, _ = run_chain(start, next_oracle)
    x = chain.final_point
    hits = tuple((st.meta["k"], x / st.meta["k"]) for st in chain.stages)
    bad = [k for k, p in hits if p not in U]
    if bad:
        raise VerificationError(f"x/k outside U for k in {bad}")
    return Witness(x, hits, chain, "theorem3")


def remark_witness(U: OpenRegion, s: DivergingSequence, target: Interval, hits: int) -> Witness:
    """``r`` in ``target`` with ``hits`` strictly increasing ``n`` such that ``r + s(n)`` lies in ``U``."""
    if not target.bounded:
        raise ValueError("target must be bounded")

    def next_oracle(t, prev):
        if t >= hits:
            return None
        return TranslationDenseOracle(U, s, 0 if prev is None else prev.meta["n"] + 1)

    chain, _ = run_chain(target, next_oracle)
    r = chain.final_point
    found = tuple((st.meta["n"], r + s.term(st.meta["n"])) for st in chain.stages)
    bad = [n for n, p in found if p not in U]
    if bad:
        raise VerificationError(f"r + s(n) outside U for n in {bad}")
    return Witness(r, found, chain, "remark")


def log_form_check(witness: Witness, U: OpenRegion, precision_bits: int | None = None) -> dict:
    """Carry a multiplicative witness over to the sequences ``x + log(n+1)``.

    With ``x = -log(y)`` and ``V = -log(U)``, ``y/k`` in ``U`` means term
    ``n = k - 1`` of ``x + log(n+1)`` lies in ``V``.  Each hit is re-checked
    with log enclosures, so the verdicts are approximate.
    """
    bits = precision_bits or default_precision_bits()
    y = witness.point
    ly = log_enclosure(y, bits)
    x_lo, x_hi = -ly[1], -ly[0]
    rows = []
    for k, p in witness.hits:
        comp = U.component_containing(p)
        lk = log_enclosure(k, bits)
        t_lo, t_hi = x_lo + lk[0], x_hi + lk[1]
        # V-component (-log hi, -log lo); bound each end outward-safely
        v_lo = -INF if comp.hi == INF else -log_enclosure(comp.hi, bits)[0]
        v_hi = INF if comp.lo <= 0 else -log_enclosure(comp.lo, bits)[1]
        rows.append({"n": k - 1, "term_enclosure": [format_rational(t_lo), format_rational(t_hi)],
                     "inside": bool(v_lo < t_lo and t_hi < v_hi)})
    return {"x_enclosure": [format_rational(x_lo), format_rational(x_hi)], "precision_bits": bits,
            "hits": rows, "all_inside": all(r["inside"] for r in rows), "approximate": True}
