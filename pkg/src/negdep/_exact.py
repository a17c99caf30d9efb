"""Exact-number helpers shared by the measure code and the checkers."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np

# integer weights whose total stays below this bound keep all pairwise
# products inside int64
INT64_SAFE_TOTAL = 2**31

FLOAT_TOL = 1e-12


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(float(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def is_exact_number(x) -> bool:
    return isinstance(x, (int, np.integer, Rational)) and not isinstance(x, bool)


def fraction_array(values) -> np.ndarray:
    out = np.empty(len(values), dtype=object)
    out[:] = [to_fraction(v) for v in values]
    return out


def integer_weights(weights) -> tuple[np.ndarray, int]:
    """Scale rational weights to integers: ``weights == ints / denom``.

    The integer array is int64 when its total is small enough for exact
    pairwise products, otherwise an object array of Python ints.
    """
    fr = [to_fraction(w) for w in np.asarray(weights, dtype=object).ravel()]
    denom = 1
    for f in fr:
        denom = math.lcm(denom, f.denominator)
    ints = [f.numerator * (denom // f.denominator) for f in fr]
    shape = np.shape(weights)
    if sum(abs(i) for i in ints) < INT64_SAFE_TOTAL:
        return np.array(ints, dtype=np.int64).reshape(shape), denom
    arr = np.empty(len(ints), dtype=object)
    arr[:] = ints
    return arr.reshape(shape), denom


def as_bool(a) -> np.ndarray:
    return np.asarray(a, dtype=bool)


def fmt_number(x) -> str:
    """Canonical text form: ``p/q`` for rationals, shortest round-trip for floats."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    f = to_fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
