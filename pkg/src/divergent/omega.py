"""Functions omega -> omega, finite-horizon eventual-domination verdicts,
the diagonal dominator of a family and the running-max envelope."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import MonotonicityError
from .exact import format_rational, rational

UNBOUNDED = "unbounded"

_FORMULAS: dict[str, Callable[[dict], Callable[[int], int]]] = {}


def register_formula(name: str, factory: Callable[[dict], Callable[[int], int]]) -> None:
    """Register a named formula; ``factory(params)`` must return a total map ``int -> int``."""
    if name in ("linear", "poly", "const"):
        raise ValueError(f"{name!r} is a built-in formula")
    _FORMULAS[name] = factory


def _power_sums(m: int, degree: int) -> list[int]:
    """``[sum_{k<m} k**e for e in 0..degree]`` by the telescoping identity."""
    sums: list[int] = []
    for e in range(degree + 1):
        acc = m ** (e + 1)
        for j in range(e):
            acc -= math.comb(e + 1, j) * sums[j]
        sums.append(acc // (e + 1))
    return sums


class OmegaFunction:
    """A total map from naturals to naturals with a serializable presentation.

    ``growth`` records what is known about the tail: an int ``c`` when the
    function is eventually constant at ``c``, :data:`UNBOUNDED` when it is
    known to tend to infinity, ``None`` when nothing is known.
    """

    def __init__(self, evaluator: Callable[[int], int], presentation: dict, growth=None,
                 batch: Callable[[int], list[int]] | None = None):
        self._eval = evaluator
        self.presentation = presentation
        self.growth = growth
        self._batch = batch
        self._lock = threading.Lock()
        self._cumulative = [0]

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"omega functions are defined on naturals, got {n}")
        v = self._eval(n)
        if v < 0:
            raise ValueError(f"{self.name} takes negative value {v} at {n}")
        return v

    def __repr__(self):
        return f"OmegaFunction({self.presentation!r})"

    @property
    def name(self) -> str:
        p = self.presentation
        return p.get("name", p["kind"])

    def prefix(self, horizon: int) -> list[int]:
        if self._batch is not None:
            vals = self._batch(horizon)
            for n, v in enumerate(vals):
                if v < 0:
                    raise ValueError(f"{self.name} takes negative value {v} at {n}")
            return vals
        return [self(n) for n in range(horizon)]

    def prefix_sum(self, m: int) -> int:
        """``sum(self(k) for k < m)``; closed form where the presentation allows."""
        with self._lock:
            cum = self._cumulative
            while len(cum) <= m:
                cum.append(cum[-1] + self(len(cum) - 1))
            return cum[m]

    def check_nondecreasing(self, upto: int) -> bool:
        """Raise :class:`MonotonicityError` on a decrease below ``upto``.

        Returns True when monotonicity is proved for every index, False when
        it was only checked up to ``upto``.
        """
        prev = None
        for n in range(upto):
            v = self(n)
            if prev is not None and v < prev:
                raise MonotonicityError(n, f"{self.name}({n}) = {v} < {prev}")
            prev = v
        return False

    def to_json(self) -> dict:
        return self.presentation

    @classmethod
    def from_json(cls, obj) -> "OmegaFunction":
        kind = obj.get("kind")
        if kind == "prefix":
            return prefix_function(obj["values"])
        if kind == "formula":
            return formula(obj["name"], obj.get("params", {}))
        if kind == "envelope":
            return monotone_envelope(cls.from_json(obj["of"]))
        if kind == "dominator":
            return diagonal_dominator([cls.from_json(f) for f in obj["members"]])
        raise ValueError(f"unknown omega-function kind {kind!r}")


class _PrefixFunction(OmegaFunction):
    def __init__(self, values: Sequence[int]):
        values = [int(v) for v in values]
        if not values:
            raise ValueError("prefix presentation needs at least one value")
        if any(v < 0 for v in values):
            raise ValueError("omega-function values must be natural numbers")
        self.values = values
        last = values[-1]
        super().__init__(lambda n: values[n] if n < len(values) else last,
                         {"kind": "prefix", "values": values}, growth=last,
                         batch=lambda h: values[:h] + [last] * max(0, h - len(values)))

    def prefix_sum(self, m):
        k = min(m, len(self.values))
        return sum(self.values[:k]) + (m - k) * self.values[-1]

    def check_nondecreasing(self, upto=0):
        for n in range(1, len(self.values)):
            if self.values[n] < self.values[n - 1]:
                raise MonotonicityError(n, f"prefix value {self.values[n]} < {self.values[n - 1]}")
        return True


class _PolyFunction(OmegaFunction):
    """``floor(sum c_i n^i)`` with rational coefficients, evaluated in integers."""

    def __init__(self, coeffs: Sequence[Fraction], presentation: dict):
        coeffs = [rational(c) for c in coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            coeffs = [Fraction(0)]
        if coeffs[-1] < 0:
            raise ValueError("polynomial with negative leading coefficient leaves omega")
        self.coeffs = coeffs
        den = math.lcm(*(c.denominator for c in coeffs))
        self._den = den
        self._ints = [int(c * den) for c in coeffs]
        ints = self._ints[::-1]

        def ev(n):
            acc = 0
            for a in ints:
                acc = acc * n + a
            return acc // den

        growth = UNBOUNDED if len(coeffs) > 1 else int(math.floor(coeffs[0]))
        super().__init__(ev, presentation, growth=growth,
                         batch=lambda h: [ev(n) for n in range(h)])

    def prefix_sum(self, m):
        if self._den != 1:
            return super().prefix_sum(m)
        sums = _power_sums(m, len(self._ints) - 1)
        return sum(a * s for a, s in zip(self._ints, sums))

    def check_nondecreasing(self, upto=0):
        # beyond the Cauchy root bound of p(k+1)-p(k) the real polynomial increases
        c = self.coeffs
        d = len(c) - 1
        bound = 0
        if d >= 1:
            diff = [sum(c[j] * math.comb(j, i) for j in range(i + 1, d + 1)) for i in range(d)]
            lead = diff[-1]
            bound = 1 + max((abs(x / lead) for x in diff[:-1]), default=0)
        return super().check_nondecreasing(math.ceil(bound) + 3) or True


def prefix_function(values: Sequence[int]) -> OmegaFunction:
    """Finite prefix, extended as constant equal to the last value."""
    return _PrefixFunction(values)


def formula(name: str, params: dict | None = None) -> OmegaFunction:
    params = dict(params or {})
    pres = {"kind": "formula", "name": name,
            "params": {k: (format_rational(rational(v)) if not isinstance(v, list)
                           else [format_rational(rational(x)) for x in v])
                       for k, v in params.items()}}
    if name == "linear":
        return _PolyFunction([rational(params.get("intercept", 0)), rational(params["slope"])], pres)
    if name == "poly":
        return _PolyFunction([rational(c) for c in params["coeffs"]], pres)
    if name == "const":
        return _PolyFunction([rational(params["value"])], pres)
    if name in _FORMULAS:
        return OmegaFunction(_FORMULAS[name](params), {"kind": "formula", "name": name, "params": params})
    raise ValueError(f"unknown formula {name!r}")


def linear(slope, intercept=0) -> OmegaFunction:
    """``n -> floor(slope*n + intercept)``."""
    return formula("linear", {"slope": slope, "intercept": intercept})


def poly(*coeffs) -> OmegaFunction:
    """``n -> floor(c0 + c1*n + c2*n**2 + ...)``."""
    return formula("poly", {"coeffs": list(coeffs)})


def constant(value: int) -> OmegaFunction:
    return formula("const", {"value": value})


@dataclass(frozen=True)
class Verdict:
    """Finite-horizon evidence about ``f <=* g``."""

    horizon: int
    violations: tuple[int, ...]

    @property
    def last_violation(self) -> int | None:
        return self.violations[-1] if self.violations else None

    @property
    def empty(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"horizon": self.horizon, "violations": list(self.violations),
                "last_violation": self.last_violation}


def le_star_verdict(f: OmegaFunction, g: OmegaFunction, horizon: int) -> Verdict:
    """Indices below ``horizon`` where ``f`` strictly exceeds ``g``.

    Eventual domination itself is not decidable from values; an empty tail
    of violations is only evidence.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    fv = f.prefix(horizon)
    gv = g.prefix(horizon)
    return Verdict(horizon, tuple(i for i in range(horizon) if fv[i] > gv[i]))


def diagonal_dominator(family: Sequence[OmegaFunction]) -> OmegaFunction:
    """``g(n) = max{f_j(n) : j <= min(n, len-1)} + 1``.

    ``g(n) > f_j(n)`` for every ``n >= j``, so each member is dominated
    from its own index on.
    """
    family = list(family)
    if not family:
        raise ValueError("diagonal dominator of an empty family")
    last = len(family) - 1

    def ev(n):
        return max(family[j](n) for j in range(min(n, last) + 1)) + 1

    def batch(h):
        cols = [f.prefix(h) for f in family]
        return [max(cols[j][n] for j in range(min(n, last) + 1)) + 1 for n in range(h)]

    growths = [f.growth for f in family]
    if any(gr == UNBOUNDED for gr in growths):
        growth = UNBOUNDED
    elif all(isinstance(gr, int) for gr in growths):
        growth = max(growths) + 1
    else:
        growth = None
    return OmegaFunction(ev, {"kind": "dominator", "members": [f.to_json() for f in family]},
                         growth=growth, batch=batch)


class _Envelope(OmegaFunction):
    def __init__(self, f: OmegaFunction):
        self.inner = f
        self._running: list[int] = []
        self._run_lock = threading.Lock()
        super().__init__(self._value, {"kind": "envelope", "of": f.to_json()}, growth=f.growth,
                         batch=self._extend)

    def _extend(self, h):
        with self._run_lock:
            self._grow(h)
            return self._running[:h]

    def _grow(self, h):
        run = self._running
        while len(run) < h:
            v = self.inner(len(run))
            run.append(v if not run else max(run[-1], v))

    def _value(self, n):
        with self._run_lock:
            self._grow(n + 1)
            return self._running[n]

    def check_nondecreasing(self, upto=0):
        return True


def monotone_envelope(f: OmegaFunction) -> OmegaFunction:
    """Running maximum ``n -> max(f(0), ..., f(n))``: the least non-decreasing majorant."""
    if isinstance(f, _Envelope):
        return f
    if isinstance(f, _PrefixFunction):
        run, cur = [], -1
        for v in f.values:
            cur = max(cur, v)
            run.append(cur)
        return prefix_function(run)
    return _Envelope(f)
