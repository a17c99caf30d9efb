"""Measure-to-measure operations: projections, conditioning, fields, stirring."""

from __future__ import annotations

import math
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._exact import is_exact_number, to_fraction
from .measure import FLOAT, RATIONAL, BackendError, BinaryMeasure, ExternalField, from_tensor
from .sequences import LogConcaveWeights, rank_sequence

_CONFIGS_CACHE: dict[int, np.ndarray] = {}


def _configs(n: int) -> np.ndarray:
    if n not in _CONFIGS_CACHE:
        _CONFIGS_CACHE[n] = np.arange(1 << n, dtype=np.int64)
    return _CONFIGS_CACHE[n]


def _ranks(n: int) -> np.ndarray:
    return np.bitwise_count(_configs(n).astype(np.uint64)).astype(np.int64)


def _rebuild(mu: BinaryMeasure, w: np.ndarray, backend: str | None = None) -> BinaryMeasure:
    return BinaryMeasure(w, backend or mu.backend, normalize=True)


def _check_vars(mu: BinaryMeasure, idx: Iterable[int]) -> None:
    for j in idx:
        if not 0 <= j < mu.n:
            raise IndexError(f"variable {j} out of range for n={mu.n}")


# ---------------------------------------------------------------------------


def project(mu: BinaryMeasure, keep: Iterable[int]) -> BinaryMeasure:
    """Marginal law of the kept variables.

    Output variable ``i`` is ``keep[i]``; pass a sorted sequence to keep the
    original order.  Sets are sorted.
    """
    keep = sorted(keep) if isinstance(keep, (set, frozenset)) else list(keep)
    if not keep:
        raise ValueError("projection needs at least one variable")
    if len(set(keep)) != len(keep):
        raise ValueError("repeated variable in projection")
    _check_vars(mu, keep)
    if keep == list(range(mu.n)):
        return mu
    t = mu.tensor()
    drop = tuple(j for j in range(mu.n) if j not in keep)
    t = t.sum(axis=drop) if drop else t
    # after summing, remaining axes are the kept variables in increasing order
    order = sorted(keep)
    t = np.transpose(t, [order.index(j) for j in keep])
    w = from_tensor(np.ascontiguousarray(t), len(keep))
    return BinaryMeasure(w, mu.backend, normalize=not mu.exact)


def _assignment_mask(n: int, assignment: Mapping[int, int]) -> np.ndarray:
    x = _configs(n)
    ok = np.ones(1 << n, dtype=bool)
    for j, v in assignment.items():
        if v not in (0, 1):
            raise ValueError("assignments take values 0 or 1")
        ok &= ((x >> j) & 1) == v
    return ok


def _parse_assignment(mu: BinaryMeasure, assignment) -> dict[int, int]:
    if isinstance(assignment, str):
        # pattern such as "1*0" with '*' for free coordinates
        if len(assignment) != mu.n:
            raise ValueError("assignment pattern has the wrong length")
        return {j: int(c) for j, c in enumerate(assignment) if c in "01"}
    out = {int(j): int(v) for j, v in dict(assignment).items()}
    _check_vars(mu, out)
    return out


def condition(mu: BinaryMeasure, assignment, *, drop: bool = False) -> BinaryMeasure:
    """Conditional law given ``X_j = v`` for each ``(j, v)`` in ``assignment``.

    By default the fixed coordinates stay in place as deterministic variables;
    ``drop=True`` returns the law of the free coordinates only.
    """
    assignment = _parse_assignment(mu, assignment)
    ok = _assignment_mask(mu.n, assignment)
    w = np.where(ok, mu.weights, 0 * mu.weights[0])
    if not any(w != 0):
        raise ZeroDivisionError("conditioning event has probability zero")
    out = _rebuild(mu, w)
    if drop:
        free = [j for j in range(mu.n) if j not in assignment]
        if not free:
            raise ValueError("no free coordinates left after conditioning")
        return project(out, free)
    return out


def condition_project(mu: BinaryMeasure, assignment) -> BinaryMeasure:
    return condition(mu, assignment, drop=True)


def product(mu1: BinaryMeasure, mu2: BinaryMeasure) -> BinaryMeasure:
    """Independent coupling; ``mu1`` supplies the low variables."""
    if mu1.backend != mu2.backend:
        raise BackendError("product needs measures with the same backend")
    w = np.outer(mu2.weights, mu1.weights).reshape(-1)
    return BinaryMeasure(w, mu1.backend, normalize=not mu1.exact)


def relabel(mu: BinaryMeasure, perm: Sequence[int]) -> BinaryMeasure:
    """``mu'(eta) = mu(eta o perm)``: new variable ``perm[f]`` carries old variable ``f``."""
    perm = list(perm)
    if sorted(perm) != list(range(mu.n)):
        raise ValueError("relabeling must be a permutation of the variables")
    inv = [0] * mu.n
    for f, e in enumerate(perm):
        inv[e] = f
    t = np.transpose(mu.tensor(), inv)
    return BinaryMeasure(from_tensor(np.ascontiguousarray(t), mu.n), mu.backend)


def _as_field(mu: BinaryMeasure, W) -> ExternalField:
    W = W if isinstance(W, ExternalField) else ExternalField(W)
    if len(W) != mu.n:
        raise ValueError(f"field has {len(W)} entries for {mu.n} variables")
    return W


def apply_field(mu: BinaryMeasure, W) -> BinaryMeasure:
    """Reweight by ``prod_j W(j) ** x_j`` and renormalize.

    Entries ``0`` and ``inf`` condition on ``X_j = 0`` and ``X_j = 1``.  The
    result is rational when both the measure and the finite entries are exact.
    """
    W = _as_field(mu, W)
    exact = mu.exact and W.exact
    x = _configs(mu.n)
    w = mu.weights if exact else np.array([float(v) for v in mu.weights])
    keep = _assignment_mask(mu.n, W.limits)
    factors = np.empty(1 << mu.n, dtype=object if exact else float)
    factors[:] = Fraction(1) if exact else 1.0
    for j, v in W.finite.items():
        f = to_fraction(v) if exact else float(v)
        if f == 1:
            continue
        on = ((x >> j) & 1) == 1
        factors[on] = factors[on] * f
    w = np.where(keep, w * factors, 0 * factors)
    if not any(w != 0):
        raise ZeroDivisionError("reweighted measure has zero mass")
    return BinaryMeasure(w, RATIONAL if exact else FLOAT, normalize=True)


def field_then_project(mu: BinaryMeasure, W, keep: Iterable[int]) -> BinaryMeasure:
    return project(apply_field(mu, W), keep)


def symmetrize(mu: BinaryMeasure) -> BinaryMeasure:
    """Average over all coordinate permutations, computed rank by rank."""
    a = rank_sequence(mu).a
    r = _ranks(mu.n)
    w = np.empty(mu.size, dtype=object if mu.exact else float)
    for k in range(mu.n + 1):
        w[r == k] = a[k] / comb(mu.n, k)
    return BinaryMeasure(w, mu.backend, normalize=not mu.exact)


def exchangeable(a: Sequence) -> BinaryMeasure:
    """Exchangeable measure with rank sequence ``a`` (normalized on the fly)."""
    n = len(a) - 1
    exact = all(is_exact_number(v) or isinstance(v, str) for v in a)
    vals = [to_fraction(v) if exact else float(v) for v in a]
    r = _ranks(n)
    w = np.empty(1 << n, dtype=object if exact else float)
    for k in range(n + 1):
        w[r == k] = vals[k] / comb(n, k)
    return BinaryMeasure(w, RATIONAL if exact else FLOAT, normalize=True)


def _swap_index(n: int, i: int, j: int) -> np.ndarray:
    x = _configs(n)
    bi, bj = (x >> i) & 1, (x >> j) & 1
    return x ^ ((bi ^ bj) << i) ^ ((bi ^ bj) << j)


def _transposition(mu: BinaryMeasure, tau) -> tuple[int, int]:
    i, j = (int(t) for t in tau)
    _check_vars(mu, (i, j))
    if i == j:
        raise ValueError("a transposition needs two distinct variables")
    return i, j


def stir(mu: BinaryMeasure, schedule: Iterable[tuple]) -> BinaryMeasure:
    """Apply ``mu <- (1 - eps) mu + eps mu o tau`` for each ``(tau, eps)`` in order."""
    w = mu.weights
    exact = mu.exact
    for tau, eps in schedule:
        i, j = _transposition(mu, tau)
        eps_exact = is_exact_number(eps) or isinstance(eps, str)
        e = to_fraction(eps) if eps_exact else float(eps)
        if not 0 <= e <= 1:
            raise ValueError("stirring weight must lie in [0, 1]")
        if exact and not eps_exact:
            w = np.array([float(v) for v in w])
            exact = False
        if not exact:
            e = float(e)
        w = (1 - e) * w + e * w[_swap_index(mu.n, i, j)]
    return BinaryMeasure(w, RATIONAL if exact else FLOAT, normalize=not exact)


def _normalize_segments(rates=None, T=None, segments=None) -> list[tuple[float, dict]]:
    if segments is None:
        if rates is None or T is None:
            raise ValueError("give either rates with a horizon T or a list of segments")
        segments = [(T, rates)]
    out = []
    for dt, r in segments:
        dt = float(dt)
        if dt < 0:
            raise ValueError("segment durations must be nonnegative")
        rr = {}
        for tau, rate in dict(r).items():
            rate = float(rate)
            if rate < 0:
                raise ValueError("stirring rates must be nonnegative")
            if rate > 0:
                rr[tuple(tau)] = rate
        out.append((dt, rr))
    return out


def _poisson_weights(s: float, tol: float) -> np.ndarray:
    """Poisson(s) probabilities up to the first index where the tail drops below ``tol``."""
    probs = [math.exp(-s)]
    cum = probs[0]
    m = 0
    while 1.0 - cum > tol:
        m += 1
        probs.append(probs[-1] * s / m)
        cum += probs[-1]
        if m > 10_000:
            break
    return np.array(probs)


# Poisson parameter per uniformization step; keeps exp(-s) far from underflow
_MAX_STEP_MASS = 20.0


def stir_continuous(mu: BinaryMeasure, rates=None, T=None, *, segments=None, tol: float = 1e-12) -> BinaryMeasure:
    """Continuous-time stirring with piecewise-constant transposition rates.

    Either pass ``rates`` (``{(i, j): rate}``) with horizon ``T``, or
    ``segments`` as a list of ``(duration, rates)`` applied in order.  Each
    segment is solved by uniformization; the total truncation error in total
    variation is at most ``tol``.  The result is a float measure.
    """
    segs = _normalize_segments(rates, T, segments)
    w = np.array([float(v) for v in mu.weights])
    plan = []
    for dt, rr in segs:
        lam = sum(rr.values())
        if lam == 0 or dt == 0:
            continue
        steps = max(1, math.ceil(lam * dt / _MAX_STEP_MASS))
        plan.append((dt, rr, lam, steps))
    total_steps = sum(p[3] for p in plan) or 1
    for dt, rr, lam, steps in plan:
        swaps = [(_swap_index(mu.n, *_transposition(mu, tau)), r / lam) for tau, r in rr.items()]
        pw = _poisson_weights(lam * dt / steps, tol / total_steps)
        for _ in range(steps):
            acc = pw[0] * w
            v = w
            for p in pw[1:]:
                nv = v.copy()
                for idx, frac in swaps:
                    nv += frac * (v[idx] - v)
                v = nv
                acc += p * v
            w = acc
    return BinaryMeasure(w, FLOAT, normalize=True)


def truncate(mu: BinaryMeasure, a: int, b: int) -> BinaryMeasure:
    """Conditional law given ``a <= sum X <= b``."""
    r = _ranks(mu.n)
    band = (r >= a) & (r <= b)
    w = np.where(band, mu.weights, 0 * mu.weights[0])
    if not any(w != 0):
        raise ZeroDivisionError("rank band has probability zero")
    return _rebuild(mu, w)


def rank_rescale(mu: BinaryMeasure, q, *, force: bool = False) -> BinaryMeasure:
    """Reweight each configuration by ``q[rank]`` and renormalize.

    ``q`` must be log-concave (with interval support) unless ``force`` is set.
    """
    if not isinstance(q, LogConcaveWeights):
        q = LogConcaveWeights(q, force=force)
    if len(q) != mu.n + 1:
        raise ValueError(f"need {mu.n + 1} rank weights, got {len(q)}")
    exact = mu.exact and all(is_exact_number(v) for v in q.q)
    r = _ranks(mu.n)
    qs = np.empty(mu.size, dtype=object if exact else float)
    qs[:] = [q.q[k] if exact else float(q.q[k]) for k in r]
    w = mu.weights if exact else np.array([float(v) for v in mu.weights])
    w = w * qs
    if not any(w != 0):
        raise ZeroDivisionError("rank rescaling leaves zero mass")
    return BinaryMeasure(w, RATIONAL if exact else FLOAT, normalize=True)


def condition_on_rank(mu: BinaryMeasure, k: int) -> BinaryMeasure:
    return truncate(mu, k, k)
