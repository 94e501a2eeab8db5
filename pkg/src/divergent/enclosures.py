"""Rational enclosures of log and exp, via mpmath interval arithmetic.

These are the only inexact quantities in the package; every result built on
them carries an ``approximate`` flag.
"""

from __future__ import annotations

import os
import threading
from fractions import Fraction

from mpmath import iv

DEFAULT_PRECISION_BITS = 64
PRECISION_ENV = "DIVERGENT_PRECISION_BITS"

# mpmath's interval context keeps its precision as global state
_IV_LOCK = threading.Lock()


def default_precision_bits() -> int:
    return int(os.environ.get(PRECISION_ENV, DEFAULT_PRECISION_BITS))


def _mpf_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    if not man:
        return Fraction(0)
    value = Fraction(int(man)) * (Fraction(2) ** exp)
    return -value if sign else value


def _to_fractions(v) -> tuple[Fraction, Fraction]:
    a, b = v._mpi_
    return _mpf_to_fraction(a), _mpf_to_fraction(b)


def _iv_rational(q: Fraction):
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def _enclose(fn, q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    width = Fraction(1, 2 ** bits)
    prec = bits + 16
    while True:
        with _IV_LOCK:
            saved = iv.prec
            iv.prec = prec
            try:
                lo, hi = _to_fractions(fn(_iv_rational(q)))
            finally:
                iv.prec = saved
        if hi - lo < width:
            return lo, hi
        prec *= 2


def log_enclosure(q, bits: int | None = None) -> tuple[Fraction, Fraction]:
    """``lo <= log(q) <= hi`` with ``hi - lo < 2**-bits``; exact ``(0, 0)`` at ``q = 1``."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("log of a non-positive rational")
    if q == 1:
        return Fraction(0), Fraction(0)
    return _enclose(iv.log, q, bits or default_precision_bits())


def exp_enclosure(q, bits: int | None = None) -> tuple[Fraction, Fraction]:
    q = Fraction(q)
    if q == 0:
        return Fraction(1), Fraction(1)
    return _enclose(iv.exp, q, bits or default_precision_bits())
