"""Batched violation finders.

Every kernel takes a weight batch ``W`` of shape ``(B, 2**n)``.  In exact mode
rows are integers (int64 or Python ints in object arrays) and need not be
normalized: inequalities are compared after cross-multiplying by row totals.
In float mode rows are normalized here and a violation must exceed
``FLOAT_TOL``.  Each kernel returns ``None`` or a dict describing the first
violation in a fixed canonical order.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from ._exact import FLOAT_TOL
from .lattice import upset_masks, upset_matrix
from .measure import to_tensor

_PAIR_CHUNK = 1 << 20


def normalize_rows(W: np.ndarray) -> np.ndarray:
    tot = W.sum(axis=1, keepdims=True)
    safe = np.where(tot == 0, 1.0, tot)
    return W / safe


def prepare(W: np.ndarray, exact: bool) -> np.ndarray:
    W = np.atleast_2d(W)
    return W if exact else normalize_rows(W.astype(float))


def exceeds(lhs, rhs, exact: bool) -> np.ndarray:
    """Strict violation mask for an inequality that should read ``lhs <= rhs``."""
    if exact:
        return np.asarray(lhs > rhs, dtype=bool)
    return np.asarray(lhs - rhs > FLOAT_TOL, dtype=bool)


def _first(bad: np.ndarray):
    idx = np.argwhere(bad)
    return tuple(int(i) for i in idx[0]) if len(idx) else None


# ---------------------------------------------------------------------------
# projections and block tables


def project_batch(W: np.ndarray, n: int, keep) -> np.ndarray:
    """Marginal weights on ``keep`` (sorted); output bit ``i`` is ``keep[i]``."""
    keep = list(keep)
    if len(keep) == n:
        return W
    t = to_tensor(W, n)
    drop = tuple(1 + j for j in range(n) if j not in keep)
    t = t.sum(axis=drop)
    m = len(keep)
    return np.ascontiguousarray(np.transpose(t, (0,) + tuple(range(m, 0, -1)))).reshape(W.shape[0], 1 << m)


def block_table(W: np.ndarray, n: int, blocks: list[list[int]]) -> np.ndarray:
    """Reshape to ``(B, 2**|b0|, 2**|b1|, ...)``; inside a block bit ``i`` is ``block[i]``."""
    t = to_tensor(W, n)
    axes = [0]
    for b in blocks:
        axes += [1 + j for j in reversed(b)]
    t = np.transpose(t, axes)
    return np.ascontiguousarray(t).reshape((W.shape[0],) + tuple(1 << len(b) for b in blocks))


def subsets_by_size(n: int, min_size: int = 1):
    for k in range(min_size, n + 1):
        for s in combinations(range(n), k):
            yield list(s)


# ---------------------------------------------------------------------------
# lattice condition


@lru_cache(maxsize=None)
def incomparable_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.arange(1 << n, dtype=np.int64)
    xs, ys = np.meshgrid(x, x, indexing="ij")
    sel = (xs < ys) & ((xs & ~ys) != 0) & ((ys & ~xs) != 0)
    return xs[sel], ys[sel]


def lattice_violation(W: np.ndarray, n: int, exact: bool, negative: bool = True):
    """Pair ``(x, y)`` breaking the lattice inequality in the requested direction."""
    W = prepare(W, exact)
    xs, ys = incomparable_pairs(n)
    for start in range(0, len(xs), _PAIR_CHUNK):
        x, y = xs[start : start + _PAIR_CHUNK], ys[start : start + _PAIR_CHUNK]
        outer = W[:, x | y] * W[:, x & y]
        inner = W[:, x] * W[:, y]
        bad = exceeds(outer, inner, exact) if negative else exceeds(inner, outer, exact)
        hit = _first(bad)
        if hit is not None:
            r, p = hit
            return {"row": r, "x": int(x[p]), "y": int(y[p]), "join_meet": W[r, x[p] | y[p]] * W[r, x[p] & y[p]], "product": W[r, x[p]] * W[r, y[p]]}
    return None


def hereditary_lattice_violation(W: np.ndarray, n: int, exact: bool, negative: bool = True):
    W = np.atleast_2d(W)
    for keep in subsets_by_size(n, 2):
        v = lattice_violation(project_batch(W, n, keep), len(keep), exact, negative)
        if v is not None:
            v["projection"] = keep
            return v
    return None


# ---------------------------------------------------------------------------
# association


def _bipartitions(n: int):
    """Pairs ``(A, B)`` of complementary nonempty blocks with variable 0 in A."""
    for mask in range(1, (1 << n) - 1):
        if mask & 1:
            a = [j for j in range(n) if mask >> j & 1]
            b = [j for j in range(n) if not mask >> j & 1]
            yield a, b


def association_violation(W: np.ndarray, n: int, exact: bool, negative: bool = True):
    """Up-sets ``F`` on a block and ``G`` on its complement breaking the association sign."""
    W = prepare(W, exact)
    tot = W.sum(axis=1)
    for a, b in _bipartitions(n):
        P = block_table(W, n, [a, b])  # (B, 2^|a|, 2^|b|)
        UF = upset_matrix(len(a))
        UG = upset_matrix(len(b))
        joint = np.matmul(np.matmul(UF, P), UG.T)  # (B, kF, kG)
        mF = np.matmul(P.sum(axis=2), UF.T)
        mG = np.matmul(P.sum(axis=1), UG.T)
        both = joint * (tot[:, None, None] if exact else 1)
        indep = mF[:, :, None] * mG[:, None, :]
        bad = exceeds(both, indep, exact) if negative else exceeds(indep, both, exact)
        hit = _first(bad)
        if hit is not None:
            r, i, j = hit
            return {
                "row": r,
                "blocks": (a, b),
                "F": _upset_members(len(a), i),
                "G": _upset_members(len(b), j),
                "joint": joint[r, i, j],
                "marginals": (mF[r, i], mG[r, j]),
                "total": tot[r],
            }
    return None


def _upset_members(k: int, i: int) -> list[int]:
    """Members (block-local configurations) of the ``i``-th nontrivial up-set."""
    mask = int(upset_masks(k)[i + 1])
    return [x for x in range(1 << k) if mask >> x & 1]


def full_positive_association_violation(W: np.ndarray, n: int, exact: bool, chunk: int = 512):
    """Up-sets ``F, G`` on the whole lattice with ``mu(F & G) < mu(F) mu(G)``."""
    W = prepare(W, exact)
    U = upset_matrix(n)
    for r in range(W.shape[0]):
        w = W[r]
        tot = w.sum()
        mass = U @ w
        for s in range(0, U.shape[0], chunk):
            joint = (U[s : s + chunk] * w) @ U.T
            lhs = mass[s : s + chunk, None] * mass[None, :]
            rhs = joint * (tot if exact else 1)
            hit = _first(exceeds(lhs, rhs, exact))
            if hit is not None:
                i, j = hit
                return {"row": r, "F": _upset_members(n, s + i), "G": _upset_members(n, j), "joint": joint[i, j], "marginals": (mass[s + i], mass[j]), "total": tot}
    return None


# ---------------------------------------------------------------------------
# conditioning closure


def conditioned_batches(W: np.ndarray, n: int, min_free: int):
    """Yield ``(cond_vars, free_vars, batch)`` for every subset of conditioned coordinates.

    ``batch`` has shape ``(B * 2**|cond|, 2**|free|)``; row ``r * 2**|cond| + eta``
    is the (unnormalized) restriction of row ``r`` to ``X_cond = eta``.
    """
    for k in range(0, n - min_free + 1):
        for cond in combinations(range(n), k):
            cond = list(cond)
            free = [j for j in range(n) if j not in cond]
            T = block_table(W, n, [cond, free])
            yield cond, free, T.reshape(-1, 1 << len(free))


def cna_violation(W: np.ndarray, n: int, exact: bool):
    W = np.atleast_2d(W)
    for cond, free, batch in conditioned_batches(W, n, 2):
        v = association_violation(batch, len(free), exact, negative=True)
        if v is not None:
            r, eta = divmod(v["row"], 1 << len(cond))
            v.update(row=r, conditioned=cond, eta=eta, free=free)
            return v
    return None


# ---------------------------------------------------------------------------
# regression dependence


def jnrd_violation(W: np.ndarray, n: int, exact: bool):
    """A cover step ``X_f: 0 -> 1`` (others fixed) that raises the mass of an up-set of a block.

    For every nonempty block A, every ``f`` outside A and every value ``eta`` of
    the remaining coordinates, the law of ``X_A`` given ``X_f = 0, eta`` must
    dominate the law given ``X_f = 1, eta``.
    """
    W = np.atleast_2d(W)
    for a in subsets_by_size(n, 1):
        if len(a) == n:
            continue
        U = upset_matrix(len(a))
        rest = [j for j in range(n) if j not in a]
        for f in rest:
            others = [j for j in rest if j != f]
            T = block_table(W, n, [others, [f], a])  # (B, 2^|others|, 2, 2^|a|)
            p0, p1 = T[:, :, 0, :], T[:, :, 1, :]
            s0, s1 = p0.sum(axis=2), p1.sum(axis=2)
            live = (s0 != 0) & (s1 != 0)
            u0, u1 = np.matmul(p0, U.T), np.matmul(p1, U.T)
            if exact:
                bad = exceeds(u1 * s0[..., None], u0 * s1[..., None], True)
            else:
                s0f = np.where(s0 == 0, 1.0, s0)[..., None]
                s1f = np.where(s1 == 0, 1.0, s1)[..., None]
                bad = exceeds(u1 / s1f, u0 / s0f, False)
            bad &= live[..., None]
            hit = _first(bad)
            if hit is not None:
                r, eta, h = hit
                return {"row": r, "block": a, "flip": f, "others": others, "eta": eta, "H": _upset_members(len(a), h)}
    return None


# ---------------------------------------------------------------------------
# pairwise correlation and rank sequences


@lru_cache(maxsize=None)
def _bits(n: int) -> np.ndarray:
    x = np.arange(1 << n)
    return ((x[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int64)


def covariance_terms(W: np.ndarray, n: int, exact: bool):
    """Return ``(tot, means, second)`` with ``second[b, i, j] = E[X_i X_j]`` (unnormalized in exact mode)."""
    W = prepare(W, exact)
    X = _bits(n)
    tot = W.sum(axis=1)
    means = np.matmul(W, X)
    second = np.matmul(W[:, None, :] * X.T[None, :, :], X)
    return tot, means, second


def nc_violation(W: np.ndarray, n: int, exact: bool):
    """Worst positively correlated pair (first row with any violation)."""
    if n < 2:
        return None
    tot, means, second = covariance_terms(W, n, exact)
    lhs = second * (tot[:, None, None] if exact else 1)
    rhs = means[:, :, None] * means[:, None, :]
    iu = np.triu_indices(n, 1)
    diff_bad = exceeds(lhs[:, iu[0], iu[1]], rhs[:, iu[0], iu[1]], exact)
    rows = np.flatnonzero(diff_bad.any(axis=1))
    if rows.size == 0:
        return None
    r = int(rows[0])
    cov = lhs[r, iu[0], iu[1]] - rhs[r, iu[0], iu[1]]
    k = max(np.flatnonzero(diff_bad[r]), key=lambda t: cov[t])
    i, j = int(iu[0][k]), int(iu[1][k])
    value = Fraction(int(cov[k]), int(tot[r]) ** 2) if exact else float(cov[k])
    return {"row": r, "pair": (i, j), "covariance": value}


@lru_cache(maxsize=None)
def _rank_onehot(n: int) -> np.ndarray:
    r = np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)
    return (r[:, None] == np.arange(n + 1)[None, :]).astype(np.int64)


def ulc_violation(W: np.ndarray, n: int, exact: bool):
    """Rank sequence failing ultra-log-concavity (interval support included)."""
    W = prepare(W, exact)
    a = np.matmul(W, _rank_onehot(n))
    if exact:
        a = a.astype(object)
    nz = a != 0
    has = nz.any(axis=1)
    first = np.argmax(nz, axis=1)
    last = n - np.argmax(nz[:, ::-1], axis=1)
    k = np.arange(n + 1)
    inside = (k[None, :] >= first[:, None]) & (k[None, :] <= last[:, None])
    gap = inside & ~nz & has[:, None]
    hit = _first(gap)
    if hit is not None:
        return {"row": hit[0], "index": hit[1], "reason": "support is not an interval", "rank_sequence": list(a[hit[0]])}
    if n < 2:
        return None
    c = np.array([comb(n, j) for j in range(n + 1)], dtype=object if exact else float)
    mid = np.arange(1, n)
    lhs = a[:, mid - 1] * a[:, mid + 1] * (c[mid] * c[mid])
    rhs = a[:, mid] * a[:, mid] * (c[mid - 1] * c[mid + 1])
    hit = _first(exceeds(lhs, rhs, exact) & has[:, None])
    if hit is not None:
        return {"row": hit[0], "index": int(mid[hit[1]]), "reason": "log-concavity fails", "rank_sequence": list(a[hit[0]])}
    return None
