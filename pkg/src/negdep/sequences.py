"""Log-concave and ultra-log-concave sequences, rank sequences, and abc laws."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from ._exact import FLOAT_TOL, is_exact_number, to_fraction
from .orders import OrderedJointLaw, chain_covers, stoch_relation


@dataclass(frozen=True)
class SeqVerdict:
    """Truth value plus the first offending index (``None`` when ``ok``)."""

    ok: bool
    index: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _numbers(s: Sequence) -> tuple[list, bool]:
    exact = all(is_exact_number(v) or isinstance(v, str) for v in s)
    vals = [to_fraction(v) for v in s] if exact else [float(v) for v in s]
    if any(v < 0 for v in vals):
        raise ValueError("sequence entries must be nonnegative")
    return vals, exact


def support_interval(s: Sequence) -> tuple[int, int] | None:
    nz = [i for i, v in enumerate(s) if v != 0]
    return (nz[0], nz[-1]) if nz else None


def is_log_concave(s: Sequence) -> SeqVerdict:
    """``s_k**2 >= s_{k-1} s_{k+1}`` with nonzero entries on an interval of indices."""
    vals, exact = _numbers(s)
    hull = support_interval(vals)
    if hull is None:
        return SeqVerdict(False, None, "empty support")
    lo, hi = hull
    for k in range(lo, hi + 1):
        if vals[k] == 0:
            return SeqVerdict(False, k, "support is not an interval")
    for k in range(lo + 1, hi):
        lhs, rhs = vals[k] * vals[k], vals[k - 1] * vals[k + 1]
        if lhs < rhs if exact else lhs < rhs - FLOAT_TOL * rhs:
            return SeqVerdict(False, k, "log-concavity fails")
    return SeqVerdict(True)


def ulc_normalize(a: Sequence, n: int | None = None) -> list:
    """``q_k = a_k / C(n, k)``."""
    vals, _ = _numbers(a)
    n = len(vals) - 1 if n is None else n
    if len(vals) != n + 1:
        raise ValueError(f"expected {n + 1} entries, got {len(vals)}")
    return [v / comb(n, k) for k, v in enumerate(vals)]


def is_ulc(a, n: int | None = None) -> SeqVerdict:
    """Ultra-log-concavity: log-concavity of ``a_k / C(n, k)``."""
    if isinstance(a, RankSequence):
        a = a.a
    return is_log_concave(ulc_normalize(a, n))


# ---------------------------------------------------------------------------
# sequence algebra


def convolve(s: Sequence, t: Sequence) -> list:
    s, _ = _numbers(s)
    t, _ = _numbers(t)
    out = [0 * s[0]] * (len(s) + len(t) - 1)
    for i, x in enumerate(s):
        if x == 0:
            continue
        for j, y in enumerate(t):
            out[i + j] = out[i + j] + x * y
    return out


def pointwise(s: Sequence, t: Sequence) -> list:
    if len(s) != len(t):
        raise ValueError("pointwise product needs sequences of equal length")
    s, _ = _numbers(s)
    t, _ = _numbers(t)
    return [x * y for x, y in zip(s, t)]


def reverse(s: Sequence) -> list:
    return list(s)[::-1]


def seq_algebra(op: str, s: Sequence, t: Sequence | None = None) -> list:
    if op == "convolve":
        return convolve(s, t)
    if op == "pointwise":
        return pointwise(s, t)
    if op == "reverse":
        return reverse(s)
    raise ValueError(f"unknown sequence operation {op!r}")


# ---------------------------------------------------------------------------
# rank sequences


@dataclass(frozen=True)
class RankSequence:
    """Law of the number of ones: ``a[k] = P(sum X = k)``."""

    a: tuple
    normalized: bool = True

    def __post_init__(self):
        vals, exact = _numbers(self.a)
        if self.normalized:
            total = sum(vals)
            if total == 0:
                raise ValueError("rank sequence has no mass")
            ok = total == 1 if exact else abs(total - 1) <= 1e-9
            if not ok:
                raise ValueError(f"rank sequence sums to {total}")
        object.__setattr__(self, "a", tuple(vals))

    @classmethod
    def from_weights(cls, w: Sequence) -> "RankSequence":
        vals, _ = _numbers(w)
        total = sum(vals)
        return cls(tuple(v / total for v in vals))

    @property
    def n(self) -> int:
        return len(self.a) - 1

    @property
    def q(self) -> list:
        return ulc_normalize(self.a, self.n)

    def is_ulc(self) -> SeqVerdict:
        return is_ulc(self.a, self.n)

    def is_log_concave(self) -> SeqVerdict:
        return is_log_concave(self.a)

    def __len__(self) -> int:
        return len(self.a)

    def __getitem__(self, k):
        return self.a[k]

    def __iter__(self):
        return iter(self.a)


def rank_sequence(mu) -> RankSequence:
    """Exact law of ``sum_j X_j`` under a :class:`~negdep.measure.BinaryMeasure`."""
    ranks = np.bitwise_count(np.arange(mu.size, dtype=np.uint64)).astype(np.int64)
    zero = Fraction(0) if mu.exact else 0.0
    a = [zero + mu.weights[ranks == k].sum() for k in range(mu.n + 1)]
    return RankSequence(tuple(a), normalized=mu.exact)


class LogConcaveWeights:
    """Rank weights ``q_0..q_n`` accepted by rank rescaling."""

    def __init__(self, q: Sequence, *, force: bool = False):
        vals, _ = _numbers(q)
        if not force:
            v = is_log_concave(vals)
            if not v:
                raise ValueError(f"weights are not log-concave ({v.reason} at index {v.index})")
        self.q = tuple(vals)
        self.forced = force

    def __len__(self) -> int:
        return len(self.q)

    def __iter__(self):
        return iter(self.q)

    def __repr__(self) -> str:
        return f"LogConcaveWeights({list(self.q)})"


# ---------------------------------------------------------------------------
# random sequences


def random_log_concave(rng: np.random.Generator, length: int, *, zero_ends: bool = True, max_den: int = 6) -> list[Fraction]:
    """Random rational log-concave sequence with non-increasing successive ratios.

    With ``zero_ends`` the support may be a proper sub-interval.
    """
    lo, hi = 0, length - 1
    if zero_ends and length > 1:
        if rng.random() < 0.25:
            lo = int(rng.integers(0, length))
        if rng.random() < 0.25:
            hi = int(rng.integers(lo, length))
    ratios = sorted(
        (Fraction(int(rng.integers(1, 4 * max_den)), int(rng.integers(1, max_den + 1))) for _ in range(hi - lo)),
        reverse=True,
    )
    out = [Fraction(0)] * length
    v = Fraction(int(rng.integers(1, max_den + 1)))
    out[lo] = v
    for k, r in enumerate(ratios, start=lo + 1):
        v = v * r
        out[k] = v
    return out


def random_ulc(rng: np.random.Generator, n: int, *, zero_ends: bool = True) -> RankSequence:
    """Random ULC rank sequence on ``0..n``: log-concave ``q`` times binomials."""
    q = random_log_concave(rng, n + 1, zero_ends=zero_ends)
    return RankSequence.from_weights([qk * comb(n, k) for k, qk in enumerate(q)])


def random_rank_sequence(rng: np.random.Generator, n: int, *, max_weight: int = 12) -> RankSequence:
    """Random nonnegative integer weights, normalized; ULC only by chance."""
    while True:
        w = [int(v) for v in rng.integers(0, max_weight + 1, size=n + 1)]
        if rng.random() < 0.3:
            w[int(rng.integers(0, n + 1))] = 0
        if sum(w):
            return RankSequence.from_weights(w)


# ---------------------------------------------------------------------------
# abc laws


@dataclass(frozen=True)
class AbcLaw:
    """Joint law ``P(X=i, Y=j) = K a_i b_j c_{i+j}``."""

    a: tuple
    b: tuple
    c: tuple
    joint: OrderedJointLaw

    def sum_law(self) -> OrderedJointLaw:
        """Joint law of ``(X, X+Y)``."""
        p = self.joint.probs
        out = np.zeros((p.shape[0], p.shape[0] + p.shape[1] - 1), dtype=p.dtype)
        if p.dtype == object:
            out[...] = Fraction(0)
        for i in range(p.shape[0]):
            for j in range(p.shape[1]):
                out[i, i + j] += p[i, j]
        return OrderedJointLaw(out)

    def x_given_sum(self, k: int) -> list:
        p = self.joint.probs
        return [p[i, k - i] if 0 <= k - i < p.shape[1] else 0 * p[0, 0] for i in range(p.shape[0])]

    def sum_given_x(self, i: int) -> list:
        p = self.joint.probs
        m = p.shape[0] + p.shape[1] - 1
        return [p[i, z - i] if 0 <= z - i < p.shape[1] else 0 * p[0, 0] for z in range(m)]

    def verdicts(self) -> dict[str, bool]:
        """Every statement of the abc menu, each computed from the joint law."""
        xy = stoch_relation(self.joint)
        xs = stoch_relation(self.sum_law())
        ys = stoch_relation(_y_sum_law(self))
        return {
            "X↑(X+Y)": xs.x_up_y,
            "Y↑(X+Y)": ys.x_up_y,
            "(X+Y)↑X": xs.y_up_x,
            "(X+Y)↑Y": ys.y_up_x,
            "X↓Y": xy.x_down_y,
            "Y↓X": xy.y_down_x,
            "X|sum covers": self.sum_covers(),
            "sum|X covers": self.x_covers(),
        }

    def sum_covers(self) -> bool:
        """``(X | X+Y=k+1)`` covers ``(X | X+Y=k)`` whenever both are defined."""
        p = self.joint.probs
        m = p.shape[0] + p.shape[1] - 1
        laws = [self.x_given_sum(k) for k in range(m)]
        return all(
            chain_covers(laws[k + 1], laws[k])[0]
            for k in range(m - 1)
            if any(v != 0 for v in laws[k]) and any(v != 0 for v in laws[k + 1])
        )

    def x_covers(self) -> bool:
        """``(X+Y | X=k+1)`` covers ``(X+Y | X=k)`` whenever both are defined."""
        p = self.joint.probs
        laws = [self.sum_given_x(i) for i in range(p.shape[0])]
        return all(
            chain_covers(laws[i + 1], laws[i])[0]
            for i in range(len(laws) - 1)
            if any(v != 0 for v in laws[i]) and any(v != 0 for v in laws[i + 1])
        )


def _y_sum_law(law: AbcLaw) -> OrderedJointLaw:
    p = law.joint.probs.T
    out = np.zeros((p.shape[0], p.shape[0] + p.shape[1] - 1), dtype=p.dtype)
    if p.dtype == object:
        out[...] = Fraction(0)
    for j in range(p.shape[0]):
        for i in range(p.shape[1]):
            out[j, i + j] += p[j, i]
    return OrderedJointLaw(out)


def abc_law(a: Sequence, b: Sequence, c: Sequence) -> AbcLaw:
    av, _ = _numbers(a)
    bv, _ = _numbers(b)
    cv, _ = _numbers(c)
    if len(cv) < len(av) + len(bv) - 1:
        cv = cv + [0 * cv[0]] * (len(av) + len(bv) - 1 - len(cv))
    table = [[av[i] * bv[j] * cv[i + j] for j in range(len(bv))] for i in range(len(av))]
    if not any(v != 0 for row in table for v in row):
        raise ValueError("a_i b_j c_(i+j) vanishes identically")
    return AbcLaw(tuple(av), tuple(bv), tuple(cv), OrderedJointLaw(table))
