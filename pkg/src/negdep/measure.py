"""Probability measures on the Boolean lattice and external fields."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from ._exact import fraction_array, integer_weights, is_exact_number, to_fraction
from .lattice import Configuration, EventSet, config_str, parse_config

RATIONAL = "rational"
FLOAT = "float"
BACKENDS = (RATIONAL, FLOAT)
FLOAT_MASS_TOL = 1e-9


class BackendError(ValueError):
    pass


def _infer_backend(values) -> str:
    arr = np.asarray(values)
    if arr.dtype.kind == "f":
        return FLOAT
    if arr.dtype.kind in "iub":
        return RATIONAL
    return RATIONAL if all(is_exact_number(v) or isinstance(v, str) for v in arr.ravel()) else FLOAT


class BinaryMeasure:
    """Exact or floating-point probability assignment on ``{0,1}^n``.

    ``weights[x]`` is the probability of configuration ``x`` (bit ``j`` of ``x``
    is variable ``j``).  Rational measures hold :class:`fractions.Fraction`
    atoms and sum to one exactly; float measures sum to one within ``1e-9``.
    Instances are immutable.
    """

    __slots__ = ("_w", "n", "backend")

    def __init__(self, weights, backend: str | None = None, *, normalize: bool = False):
        values = np.asarray(weights, dtype=object).ravel() if not isinstance(weights, np.ndarray) else weights.ravel()
        size = values.shape[0]
        n = size.bit_length() - 1
        if size == 0 or (1 << n) != size:
            raise ValueError(f"weights must have length 2**n, got {size}")
        backend = backend or _infer_backend(values)
        if backend == RATIONAL:
            w = fraction_array(list(values))
            total = sum(w, Fraction(0))
        elif backend == FLOAT:
            w = np.array([float(v) for v in values], dtype=float) if values.dtype == object else values.astype(float)
            total = float(w.sum())
        else:
            raise BackendError(f"unknown backend {backend!r}")
        if any(v < 0 for v in w):
            raise ValueError("weights must be nonnegative")
        if total == 0:
            raise ValueError("measure has empty support")
        if normalize:
            w = w / total
        elif backend == RATIONAL and total != 1:
            raise ValueError(f"rational weights sum to {total}, not 1")
        elif backend == FLOAT and abs(total - 1) > FLOAT_MASS_TOL:
            raise ValueError(f"float weights sum to {total}, not 1")
        w.setflags(write=False)
        self._w = w
        self.n = n
        self.backend = backend

    # -- basic access -------------------------------------------------------

    @property
    def weights(self) -> np.ndarray:
        return self._w

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def exact(self) -> bool:
        return self.backend == RATIONAL

    def atom(self, x) -> Fraction | float:
        if isinstance(x, str):
            if len(x) != self.n:
                raise ValueError(f"configuration {x!r} is not of length {self.n}")
            x = parse_config(x)
        elif isinstance(x, Configuration):
            x = x.bits
        return self._w[x]

    def prob(self, event) -> Fraction | float:
        """Probability of an :class:`EventSet`, a boolean indicator or a predicate on ints."""
        if isinstance(event, EventSet):
            if event.n != self.n:
                raise ValueError("event lives on a different lattice")
            ind = event.indicator()
        elif callable(event):
            ind = np.array([bool(event(x)) for x in range(self.size)])
        else:
            ind = np.asarray(event, dtype=bool)
        return self._zero() + self._w[ind].sum()

    def _zero(self):
        return Fraction(0) if self.exact else 0.0

    def support(self) -> list[int]:
        return [x for x in range(self.size) if self._w[x] != 0]

    def atoms(self) -> dict[str, Fraction | float]:
        return {config_str(x, self.n): self._w[x] for x in self.support()}

    def tensor(self) -> np.ndarray:
        """Weights as an n-dimensional array whose axis ``j`` is variable ``j``."""
        return to_tensor(self._w, self.n)

    def means(self) -> list:
        x = np.arange(self.size)
        return [self._zero() + self._w[(x >> j) & 1 == 1].sum() for j in range(self.n)]

    def covariance(self, i: int, j: int):
        x = np.arange(self.size)
        both = self._zero() + self._w[((x >> i) & (x >> j) & 1) == 1].sum()
        m = self.means()
        return both - m[i] * m[j]

    # -- conversions --------------------------------------------------------

    def to_float(self) -> "BinaryMeasure":
        if not self.exact:
            return self
        return BinaryMeasure(np.array([float(v) for v in self._w]), FLOAT, normalize=True)

    def to_rational(self) -> "BinaryMeasure":
        if self.exact:
            return self
        return BinaryMeasure(fraction_array(list(self._w)), RATIONAL, normalize=True)

    def integer_weights(self) -> tuple[np.ndarray, int]:
        if not self.exact:
            raise BackendError("integer weights exist only for rational measures")
        return integer_weights(self._w)

    def kernel_weights(self) -> np.ndarray:
        """Weights in the form the checkers consume: scaled integers or floats."""
        return self.integer_weights()[0] if self.exact else self._w

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMeasure):
            return NotImplemented
        return self.n == other.n and self.backend == other.backend and bool(np.all(self._w == other._w))

    __hash__ = None

    def allclose(self, other: "BinaryMeasure", atol: float = 1e-12) -> bool:
        if self.n != other.n:
            return False
        a = np.array([float(v) for v in self._w])
        b = np.array([float(v) for v in other._w])
        return bool(np.allclose(a, b, rtol=0, atol=atol))

    def tv_distance(self, other: "BinaryMeasure"):
        if self.n != other.n:
            raise ValueError("measures live on different lattices")
        if self.exact and other.exact:
            return sum((abs(a - b) for a, b in zip(self._w, other._w)), Fraction(0)) / 2
        return float(np.abs(self.to_float()._w - other.to_float()._w).sum() / 2)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in self.atoms().items())
        return f"BinaryMeasure(n={self.n}, {self.backend}, {{{body}}})"


def to_tensor(w: np.ndarray, n: int) -> np.ndarray:
    """Reshape ``(..., 2**n)`` weights so that trailing axis ``j`` is variable ``j``."""
    lead = w.shape[:-1]
    t = w.reshape(lead + (2,) * n)
    k = len(lead)
    return np.transpose(t, tuple(range(k)) + tuple(range(k + n - 1, k - 1, -1)))


def from_tensor(t: np.ndarray, n: int) -> np.ndarray:
    lead = t.shape[: t.ndim - n]
    k = len(lead)
    return np.transpose(t, tuple(range(k)) + tuple(range(k + n - 1, k - 1, -1))).reshape(lead + (1 << n,))


# ---------------------------------------------------------------------------
# constructors


def from_weights(weights, backend: str | None = None) -> BinaryMeasure:
    """Normalize arbitrary nonnegative weights into a measure."""
    return BinaryMeasure(weights, backend, normalize=True)


def from_atoms(atoms: Mapping, n: int | None = None, backend: str | None = None) -> BinaryMeasure:
    """Build from ``{configuration: weight}``; weights are normalized."""
    keys = list(atoms)
    if n is None:
        strs = [k for k in keys if isinstance(k, str)]
        if not strs:
            raise ValueError("n is required when atoms are keyed by integers")
        n = len(strs[0])
    w = [0] * (1 << n)
    for k, v in atoms.items():
        if isinstance(k, str):
            if len(k) != n:
                raise ValueError(f"configuration {k!r} is not of length {n}")
            k = parse_config(k)
        elif isinstance(k, Configuration):
            k = k.bits
        w[k] = v
    if backend is None:
        backend = RATIONAL if all(is_exact_number(v) or isinstance(v, str) for v in w) else FLOAT
    return BinaryMeasure(w, backend, normalize=True)


def point_mass(x, n: int | None = None) -> BinaryMeasure:
    if isinstance(x, str):
        n, x = len(x), parse_config(x)
    elif isinstance(x, Configuration):
        n, x = x.n, x.bits
    if n is None:
        raise ValueError("n is required for integer configurations")
    w = [0] * (1 << n)
    w[x] = 1
    return BinaryMeasure(w, RATIONAL)


def bernoulli(p) -> BinaryMeasure:
    return product_bernoulli([p])


def product_bernoulli(ps: Iterable) -> BinaryMeasure:
    ps = list(ps)
    exact = all(is_exact_number(p) or isinstance(p, str) for p in ps)
    ps = [to_fraction(p) if exact else float(p) for p in ps]
    if any(not 0 <= p <= 1 for p in ps):
        raise ValueError("Bernoulli parameters must lie in [0, 1]")
    w = np.array([Fraction(1) if exact else 1.0], dtype=object if exact else float)
    for p in ps:
        # the new variable takes the next (higher) bit
        w = np.concatenate([w * (1 - p), w * p])
    return BinaryMeasure(w, RATIONAL if exact else FLOAT)


def uniform(n: int) -> BinaryMeasure:
    return BinaryMeasure([Fraction(1, 1 << n)] * (1 << n), RATIONAL)


# ---------------------------------------------------------------------------
# external fields


@dataclass(frozen=True)
class ExternalField:
    """Per-variable odds reweighting ``W(j) ** X_j``.

    An entry of ``0`` or ``math.inf`` is a limit marker: it conditions the
    variable on 0 or 1 instead of reweighting it.
    """

    values: tuple

    def __init__(self, values):
        vals = []
        for v in values:
            if isinstance(v, str):
                v = math.inf if v.strip() in ("inf", "+inf", "oo") else to_fraction(v)
            if isinstance(v, float) and math.isinf(v):
                if v < 0:
                    raise ValueError("field entries must be positive")
                vals.append(math.inf)
                continue
            if v < 0:
                raise ValueError("field entries must be positive")
            vals.append(v)
        object.__setattr__(self, "values", tuple(vals))

    @classmethod
    def uniform(cls, n: int, w) -> "ExternalField":
        return cls([w] * n)

    @classmethod
    def conditioning(cls, n: int, assignment: Mapping[int, int]) -> "ExternalField":
        return cls([(math.inf if assignment[j] else 0) if j in assignment else 1 for j in range(n)])

    def __len__(self) -> int:
        return len(self.values)

    @property
    def limits(self) -> dict[int, int]:
        return {j: int(v != 0) for j, v in enumerate(self.values) if v == 0 or v == math.inf}

    @property
    def finite(self) -> dict[int, object]:
        return {j: v for j, v in enumerate(self.values) if v != 0 and v != math.inf}

    @property
    def exact(self) -> bool:
        return all(is_exact_number(v) for v in self.finite.values())

    def __str__(self) -> str:
        def show(v):
            if v == math.inf:
                return "inf"
            return str(v)

        return "(" + ", ".join(show(v) for v in self.values) + ")"
