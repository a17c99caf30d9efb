"""Stochastic order relations between laws on totally ordered sets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._exact import FLOAT_TOL, is_exact_number, to_fraction
from .report import PropertyReport, fails, holds


def _exact_all(values) -> bool:
    return all(is_exact_number(v) or isinstance(v, str) for v in np.asarray(values, dtype=object).ravel())


def _as_numbers(values, exact: bool) -> np.ndarray:
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object if exact else float)
    flat = arr.ravel()
    out.ravel()[:] = [to_fraction(v) for v in flat] if exact else [float(v) for v in flat]
    return out


def _ge(a, b, exact: bool, scale=1.0) -> bool:
    """``a >= b`` exactly, or within the float tolerance relative to ``scale``."""
    return a >= b if exact else a >= b - FLOAT_TOL * max(1.0, float(scale))


def tails(p) -> list:
    """``t[j] = sum(p[j:])``; ``t[len(p)] = 0``."""
    out = [0] * (len(p) + 1)
    acc = 0
    for j in range(len(p) - 1, -1, -1):
        acc = acc + p[j]
        out[j] = acc
    return out


def chain_dominates(p: Sequence, q: Sequence, exact: bool | None = None) -> tuple[bool, int | None]:
    """Whether law ``p`` dominates ``q`` on ``0 < 1 < ... < m-1``.

    Both are weight vectors (not necessarily normalized).  Returns the first
    threshold ``j`` with ``P(X >= j) < Q(Y >= j)`` when domination fails.
    """
    if len(p) != len(q):
        raise ValueError("laws live on chains of different length")
    exact = _exact_all(list(p) + list(q)) if exact is None else exact
    p, q = list(_as_numbers(p, exact)), list(_as_numbers(q, exact))
    tp, tq = tails(p), tails(q)
    sp, sq = tp[0], tq[0]
    for j in range(1, len(p)):
        # cross-multiplied comparison of normalized tails
        if not _ge(tp[j] * sq, tq[j] * sp, exact, sp * sq):
            return False, j
    return True, None


def chain_covers(p: Sequence, q: Sequence, exact: bool | None = None) -> tuple[bool, int | None]:
    """Whether ``p`` covers ``q`` on a chain: a coupling with ``0 <= X - Y <= 1``.

    On a chain the quantile coupling is simultaneously monotone for both
    comparisons, so this holds iff ``X >= Y`` and ``Y >= X - 1`` stochastically.
    """
    ok, j = chain_dominates(p, q, exact)
    if not ok:
        return False, j
    shifted = list(p[1:]) + [0 * p[0]]
    ok, j = chain_dominates(q, shifted, exact)
    return ok, (None if ok else j)


@dataclass(frozen=True)
class OrderedJointLaw:
    """Joint law of ``(X, Y)`` with values in finite totally ordered sets.

    ``probs[i, j]`` is the (possibly unnormalized) weight of
    ``(support_x[i], support_y[j])``; supports are listed in increasing order.
    """

    support_x: tuple
    support_y: tuple
    probs: np.ndarray

    def __init__(self, probs, support_x=None, support_y=None):
        exact = _exact_all(probs)
        arr = _as_numbers(probs, exact)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("a joint law needs a nonempty 2-d table")
        if any(v < 0 for v in arr.ravel()):
            raise ValueError("probabilities must be nonnegative")
        total = sum(arr.ravel(), Fraction(0) if exact else 0.0)
        if total == 0:
            raise ValueError("joint law has no mass")
        sx = tuple(range(arr.shape[0])) if support_x is None else tuple(support_x)
        sy = tuple(range(arr.shape[1])) if support_y is None else tuple(support_y)
        if (len(sx), len(sy)) != arr.shape:
            raise ValueError("support sizes do not match the table")
        if list(sx) != sorted(sx) or list(sy) != sorted(sy):
            raise ValueError("supports must be listed in increasing order")
        arr = arr / total
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)
        object.__setattr__(self, "support_x", sx)
        object.__setattr__(self, "support_y", sy)

    @property
    def exact(self) -> bool:
        return self.probs.dtype == object

    def transpose(self) -> "OrderedJointLaw":
        return OrderedJointLaw(self.probs.T, self.support_y, self.support_x)

    def marginal_x(self) -> list:
        return list(self.probs.sum(axis=1))

    def marginal_y(self) -> list:
        return list(self.probs.sum(axis=0))


@dataclass(frozen=True)
class StochRelations:
    """``x_up_y`` means the conditional law of X given Y=y increases with y."""

    x_up_y: bool
    x_down_y: bool
    y_up_x: bool
    y_down_x: bool

    def as_dict(self) -> dict[str, bool]:
        return {"X↑Y": self.x_up_y, "X↓Y": self.x_down_y, "Y↑X": self.y_up_x, "Y↓X": self.y_down_x}


def _increasing_in_columns(table: np.ndarray, exact: bool) -> tuple[bool, bool]:
    """Is the row variable stochastically increasing / decreasing in the column variable?"""
    cols = [table[:, j] for j in range(table.shape[1]) if any(v != 0 for v in table[:, j])]
    up = down = True
    for a in range(len(cols)):
        for b in range(a + 1, len(cols)):
            up = up and chain_dominates(cols[b], cols[a], exact)[0]
            down = down and chain_dominates(cols[a], cols[b], exact)[0]
    return up, down


def stoch_relation(law: OrderedJointLaw) -> StochRelations:
    """Evaluate the four monotone-regression relations of a joint law."""
    x_up, x_down = _increasing_in_columns(law.probs, law.exact)
    y_up, y_down = _increasing_in_columns(law.probs.T, law.exact)
    return StochRelations(x_up, x_down, y_up, y_down)


def asymmetric_increase_table() -> OrderedJointLaw:
    """Binary X against four-valued Y where Y increases in X but not conversely."""
    cells = [[9, 4, 6, 1], [1, 6, 4, 9]]
    return OrderedJointLaw([[Fraction(c, 40) for c in row] for row in cells])


def check_markov_monotone(joint, links: Sequence[OrderedJointLaw] | None = None) -> PropertyReport:
    """Verify the monotone Markov-chain parity rule on a joint law of ``Y_1..Y_m``.

    ``joint`` is an m-dimensional weight array indexed by the (ordered) values
    of each ``Y_k``.  The report holds when the law is Markov, every link is
    monotone, and the endpoint relation matches the parity of decreasing links.
    """
    exact = _exact_all(joint)
    arr = _as_numbers(joint, exact)
    m = arr.ndim
    if m < 2:
        raise ValueError("a chain needs at least two variables")
    arr = arr / arr.sum()
    pairs = [_pair_marginal(arr, k, k + 1) for k in range(m - 1)]
    if links is not None:
        if len(links) != m - 1:
            raise ValueError("one link per consecutive pair is required")
        for k, (link, pm) in enumerate(zip(links, pairs)):
            if link.probs.shape != pm.shape or not _table_equal(link.probs, pm, exact):
                raise ValueError(f"link {k} is inconsistent with the joint law")
    markov = _markov_violation(arr, exact)
    if markov is not None:
        return fails("markov-monotone", {"markov_violation": markov})
    directions = []
    for k, pm in enumerate(pairs):
        rel = stoch_relation(OrderedJointLaw(pm))
        # Y_{k+1} as a function of Y_k: rows are Y_k, so use the transpose relation
        if rel.y_up_x:
            directions.append("up")
        elif rel.y_down_x:
            directions.append("down")
        else:
            return fails("markov-monotone", {"non_monotone_link": k})
    parity = directions.count("down") % 2
    end = stoch_relation(OrderedJointLaw(_pair_marginal(arr, 0, m - 1)))
    predicted = "down" if parity else "up"
    observed = end.y_down_x if parity else end.y_up_x
    if not observed:
        return fails("markov-monotone", {"directions": directions, "predicted": predicted})
    return holds("markov-monotone", directions=directions, endpoints=predicted)


def _pair_marginal(arr: np.ndarray, i: int, j: int) -> np.ndarray:
    others = tuple(k for k in range(arr.ndim) if k not in (i, j))
    return arr.sum(axis=others) if others else arr


def _table_equal(a, b, exact: bool) -> bool:
    if exact:
        return bool(np.all(a == b))
    return bool(np.allclose(a.astype(float), b.astype(float), atol=1e-12))


def _markov_violation(arr: np.ndarray, exact: bool):
    """First ``(k, index)`` where past and future fail to be independent given ``Y_k``."""
    m = arr.ndim
    for k in range(1, m - 1):
        t = np.moveaxis(arr, k, 0)
        for v in range(t.shape[0]):
            slab = t[v]
            mass = slab.sum()
            if mass == 0:
                continue
            past = slab.sum(axis=tuple(range(k, m - 1))) if k < m - 1 else slab
            fut = slab.sum(axis=tuple(range(k)))
            outer = np.multiply.outer(past, fut)
            lhs = slab * mass
            if exact:
                bad = np.argwhere(lhs != outer)
            else:
                bad = np.argwhere(np.abs((lhs - outer).astype(float)) > FLOAT_TOL)
            if len(bad):
                return {"given": k, "value": v, "cell": tuple(int(i) for i in bad[0])}
    return None
