"""Deciders for the negative-dependence hierarchy and stochastic orders.

Every checker returns a :class:`~negdep.report.PropertyReport`.  Rational
measures are decided exactly; float measures tolerate ``1e-12`` slack.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product as iproduct

import numpy as np

from . import _kernels as K
from ._exact import FLOAT_TOL, integer_weights
from .coupling import cover_flow, dominance_flow
from .lattice import (
    MAX_UPSET_RANK,
    RankError,
    _cylinder_containment,
    _minimal_masks,
    _ternary_codes,
    config_str,
    upset_masks,
    upset_masses,
)
from .measure import BinaryMeasure, ExternalField
from .orders import check_markov_monotone, stoch_relation  # noqa: F401  (re-exported)
from .report import PropertyReport, Verdict, fails, holds

MAX_LATTICE_RANK = 12
MAX_HEREDITARY_RANK = 10
MAX_FLOW_RANK = 12
MAX_FULL_PA_RANK = 5
MAX_BKR_ALL_EVENTS = 3
MAX_BKR_UPSETS = 5
PLUS_BASES = ("nc", "hnlc", "jnrd", "cna", "ulc")
FIELD_RANGE = (1e-3, 1e3)


def _limit(mu: BinaryMeasure, bound: int, what: str) -> None:
    if mu.n > bound:
        raise RankError(f"{what} supports n <= {bound}, got n = {mu.n}")


def _weights(mu: BinaryMeasure) -> np.ndarray:
    return mu.kernel_weights()[None, :]


def _cfg(x: int, n: int) -> str:
    return config_str(int(x), n)


def _num(v, exact: bool, scale=1):
    if exact:
        return Fraction(int(v), int(scale))
    return float(v)


# ---------------------------------------------------------------------------
# lattice conditions


def check_lattice(mu: BinaryMeasure, sign: str = "negative", hereditary: bool = False) -> PropertyReport:
    """Lattice condition over all pairs of configurations; optionally for every projection."""
    negative = _sign(sign)
    prop = ("h-" if hereditary else "") + ("nlc" if negative else "plc")
    _limit(mu, MAX_HEREDITARY_RANK if hereditary else MAX_LATTICE_RANK, prop)
    W = _weights(mu)
    if hereditary:
        v = K.hereditary_lattice_violation(W, mu.n, mu.exact, negative)
    else:
        v = K.lattice_violation(W, mu.n, mu.exact, negative)
    if v is None:
        return holds(prop)
    keep = v.get("projection", list(range(mu.n)))
    return fails(prop, _lattice_witness(mu, v, keep))


def _lattice_witness(mu: BinaryMeasure, v: dict, keep: list[int]) -> dict:
    from .ops import project

    nu = project(mu, keep) if len(keep) < mu.n else mu
    m = len(keep)
    x, y = int(v["x"]), int(v["y"])
    return {
        "projection": [int(j) for j in keep],
        "x": _cfg(x, m),
        "y": _cfg(y, m),
        "join": _cfg(x | y, m),
        "meet": _cfg(x & y, m),
        "join_meet_product": nu.atom(x | y) * nu.atom(x & y),
        "pair_product": nu.atom(x) * nu.atom(y),
    }


def _sign(sign: str) -> bool:
    if sign not in ("negative", "positive"):
        raise ValueError("sign must be 'negative' or 'positive'")
    return sign == "negative"


# ---------------------------------------------------------------------------
# association


def _assoc_witness(v: dict, exact: bool) -> dict:
    a, b = v["blocks"]
    tot = v["total"]
    return {
        "A": a,
        "B": b,
        "F": [_cfg(x, len(a)) for x in v["F"]],
        "G": [_cfg(x, len(b)) for x in v["G"]],
        "P(F and G)": _num(v["joint"], exact, tot) if exact else float(v["joint"]),
        "P(F)": _num(v["marginals"][0], exact, tot) if exact else float(v["marginals"][0]),
        "P(G)": _num(v["marginals"][1], exact, tot) if exact else float(v["marginals"][1]),
    }


def check_association(mu: BinaryMeasure, sign: str = "negative", disjoint_only: bool = True) -> PropertyReport:
    """Association over up-set indicators.

    The negative sign always uses up-sets on complementary blocks.  The
    positive sign with ``disjoint_only=False`` quantifies over every pair of
    up-sets of the whole lattice (limited to ``n <= 5``).
    """
    negative = _sign(sign)
    if negative or disjoint_only:
        prop = "na" if negative else "pa-disjoint"
        _limit(mu, MAX_UPSET_RANK, prop)
        if mu.n < 2:
            return holds(prop)
        v = K.association_violation(_weights(mu), mu.n, mu.exact, negative)
        return holds(prop) if v is None else fails(prop, _assoc_witness(v, mu.exact))
    _limit(mu, MAX_FULL_PA_RANK, "pa")
    v = K.full_positive_association_violation(_weights(mu), mu.n, mu.exact)
    if v is None:
        return holds("pa")
    tot = v["total"]
    return fails(
        "pa",
        {
            "F": [_cfg(x, mu.n) for x in v["F"]],
            "G": [_cfg(x, mu.n) for x in v["G"]],
            "P(F and G)": _num(v["joint"], mu.exact, tot) if mu.exact else float(v["joint"]),
            "P(F)": _num(v["marginals"][0], mu.exact, tot) if mu.exact else float(v["marginals"][0]),
            "P(G)": _num(v["marginals"][1], mu.exact, tot) if mu.exact else float(v["marginals"][1]),
        },
    )


def check_cna(mu: BinaryMeasure) -> PropertyReport:
    """Negative association of every conditional law given some coordinates."""
    _limit(mu, MAX_UPSET_RANK, "cna")
    if mu.n < 2:
        return holds("cna")
    v = K.cna_violation(_weights(mu), mu.n, mu.exact)
    if v is None:
        return holds("cna")
    w = _assoc_witness(v, mu.exact)
    # blocks are local to the free coordinates
    free = v["free"]
    w["A"] = [free[i] for i in v["blocks"][0]]
    w["B"] = [free[i] for i in v["blocks"][1]]
    w["conditioning"] = {int(c): int(v["eta"] >> i & 1) for i, c in enumerate(v["conditioned"])}
    return fails("cna", w)


def check_jnrd(mu: BinaryMeasure) -> PropertyReport:
    """Joint negative regression dependence, checked across every cover step."""
    _limit(mu, MAX_UPSET_RANK, "jnrd")
    if mu.n < 2:
        return holds("jnrd")
    v = K.jnrd_violation(_weights(mu), mu.n, mu.exact)
    if v is None:
        return holds("jnrd")
    return fails("jnrd", _jnrd_witness(v))


def _jnrd_witness(v: dict) -> dict:
    a = v["block"]
    return {
        "block": a,
        "flip": v["flip"],
        "fixed": {int(c): int(v["eta"] >> i & 1) for i, c in enumerate(v["others"])},
        "upset": [_cfg(x, len(a)) for x in v["H"]],
    }


def check_nc(mu: BinaryMeasure) -> PropertyReport:
    """Pairwise negative correlation; the witness is the most positive pair."""
    if mu.n < 2:
        raise ValueError("pairwise correlation needs n >= 2")
    v = K.nc_violation(_weights(mu), mu.n, mu.exact)
    if v is None:
        return holds("nc")
    return fails("nc", {"pair": list(v["pair"]), "covariance": v["covariance"]})


def check_ulc(mu: BinaryMeasure) -> PropertyReport:
    """Ultra-log-concavity of the rank sequence."""
    v = K.ulc_violation(_weights(mu), mu.n, mu.exact)
    if v is None:
        return holds("ulc")
    return fails("ulc", {"index": v["index"], "reason": v["reason"]})


# ---------------------------------------------------------------------------
# "+" properties


_BASE_KERNELS = {
    "nc": K.nc_violation,
    "hnlc": lambda W, n, exact: K.hereditary_lattice_violation(W, n, exact, True),
    "jnrd": K.jnrd_violation,
    "cna": K.cna_violation,
    "ulc": K.ulc_violation,
}

# bases whose violations are invariant under projection (nc, which only sees
# pairs) or already quantify over projections (hnlc), or are inherited by
# projections (cna) need only the full set of coordinates
_NEEDS_PROJECTIONS = {"jnrd", "ulc"}
# bases not closed under conditioning also combine finite fields with limits
_NEEDS_MIXED = {"nc", "hnlc", "ulc"}
_ROW_CHUNK = 2048


def grid_levels(n: int) -> int:
    return min(9, max(2, int(math.floor(256 ** (1.0 / n) + 1e-9))))


def field_grid(n: int) -> np.ndarray:
    lv = np.geomspace(FIELD_RANGE[0], FIELD_RANGE[1], grid_levels(n))
    return np.array(list(iproduct(lv, repeat=n)), dtype=float)


def random_fields(n: int, samples: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    lo, hi = np.log(FIELD_RANGE[0]), np.log(FIELD_RANGE[1])
    return np.exp(rng.uniform(lo, hi, size=(samples, n)))


def partial_assignments(n: int) -> list[dict[int, int]]:
    """Every partial 0/1 assignment, the empty one first."""
    out = []
    for code in range(3**n):
        a, c = {}, code
        for j in range(n):
            c, d = divmod(c, 3)
            if d < 2:
                a[j] = d
        out.append(a)
    out.sort(key=len)
    return out


def _assignment_masks(n: int, assignments) -> np.ndarray:
    x = np.arange(1 << n)
    M = np.ones((len(assignments), 1 << n), dtype=bool)
    for i, a in enumerate(assignments):
        for j, v in a.items():
            M[i] &= ((x >> j) & 1) == v
    return M


def _field_factors(n: int, F: np.ndarray) -> np.ndarray:
    bits = K._bits(n).astype(float)
    return np.exp(np.log(F) @ bits.T)


def _field_tuple(finite_row=None, assignment=None, n=0) -> tuple:
    vals = [1] * n if finite_row is None else [float(v) for v in finite_row]
    for j, v in (assignment or {}).items():
        vals[j] = math.inf if v else 0
    return tuple(vals)


def check_plus(mu: BinaryMeasure, base: str, samples: int = 100, seed: int = 0) -> PropertyReport:
    """Search external fields followed by projections for a violation of ``base``.

    Candidates: every conditioning limit (exact), a log-uniform grid of fields
    over ``[1e-3, 1e3]``, and ``samples`` seeded random fields.  For bases not
    closed under conditioning each finite field is also combined with every
    conditioning.  The verdict is ``fails`` with a re-checkable witness, or
    ``inconclusive`` with the number of evaluations; never ``holds``.
    """
    if base not in PLUS_BASES:
        raise ValueError(f"unknown base property {base!r}; expected one of {PLUS_BASES}")
    _limit(mu, MAX_UPSET_RANK, base + "+")
    n = mu.n
    prop = base + "+"
    kernel = _BASE_KERNELS[base]
    min_keep = 1 if base == "ulc" else 2
    if n < min_keep:
        return PropertyReport(prop, Verdict.INCONCLUSIVE, budget_used=0)
    if base in _NEEDS_PROJECTIONS:
        projections = list(K.subsets_by_size(n, min_keep))
    else:
        projections = [list(range(n))]
    budget = 0

    def run(W: np.ndarray, exact: bool, describe):
        nonlocal budget
        live = np.flatnonzero(W.sum(axis=1) != 0)
        for start in range(0, len(live), _ROW_CHUNK):
            rows = live[start : start + _ROW_CHUNK]
            batch = W[rows]
            for keep in projections:
                budget += len(rows)
                v = kernel(K.project_batch(batch, n, keep), len(keep), exact)
                if v is not None:
                    return {"field": describe(int(rows[v["row"]])), "projection": keep, "base_witness": _clean(v)}
        return None

    assignments = partial_assignments(n)
    masks = _assignment_masks(n, assignments)
    W0 = mu.kernel_weights()
    Wa = np.where(masks, W0[None, :], 0 * W0[0])
    hit = run(Wa, mu.exact, lambda r: _field_tuple(None, assignments[r], n))
    if hit is None:
        F = np.vstack([field_grid(n), random_fields(n, samples, seed)]) if samples else field_grid(n)
        base_w = np.array([float(v) for v in mu.weights])
        Wf = base_w[None, :] * _field_factors(n, F)
        hit = run(Wf, False, lambda r: _field_tuple(F[r], None, n))
        if hit is None and base in _NEEDS_MIXED:
            cond = assignments[1:]
            cmask = masks[1:]
            for i, (a, m) in enumerate(zip(cond, cmask)):
                if n - len(a) < min_keep:
                    continue
                Wd = np.where(m[None, :], Wf, 0.0)
                hit = run(Wd, False, lambda r, a=a: _field_tuple(F[r], a, n))
                if hit is not None:
                    break
    if hit is not None:
        return PropertyReport(prop, Verdict.FAILS, witness=hit, budget_used=budget)
    return PropertyReport(prop, Verdict.INCONCLUSIVE, budget_used=budget)


def _clean(v: dict) -> dict:
    out = {}
    for k, val in v.items():
        if k == "row":
            continue
        if isinstance(val, np.generic):
            val = val.item()
        out[k] = val
    return out


def recheck_plus_witness(mu: BinaryMeasure, base: str, witness: dict) -> bool:
    """Independently confirm a ``check_plus`` witness with the plain checkers."""
    from .ops import apply_field, project

    W = ExternalField(witness["field"])
    nu = project(apply_field(mu, W), witness["projection"])
    report = {
        "nc": check_nc,
        "hnlc": lambda m: check_lattice(m, "negative", hereditary=True),
        "jnrd": check_jnrd,
        "cna": check_cna,
        "ulc": check_ulc,
    }[base](nu)
    return report.fails


# ---------------------------------------------------------------------------
# stochastic orders


def _common_integer_scale(mu: BinaryMeasure, nu: BinaryMeasure):
    ints, _ = integer_weights(np.concatenate([mu.weights, nu.weights]))
    return ints[: mu.size], ints[mu.size :]


def stochastic_dominates(mu: BinaryMeasure, nu: BinaryMeasure, mode: str = "auto") -> PropertyReport:
    """Whether ``mu(A) >= nu(A)`` for every up-set ``A``.

    ``mode`` is ``enumerate`` (``n <= 6``), ``flow`` (``n <= 12``) or ``auto``.
    """
    if mu.n != nu.n:
        raise ValueError("measures live on lattices of different rank")
    n = mu.n
    exact = mu.exact and nu.exact
    if mode == "auto":
        mode = "enumerate" if n <= MAX_UPSET_RANK else "flow"
    if mode == "enumerate":
        _limit(mu, MAX_UPSET_RANK, "dominance by enumeration")
        if exact:
            a, b = _common_integer_scale(mu, nu)
            ma, mb = upset_masses(a, n), upset_masses(b, n)
            bad = mb > ma
        else:
            ma = upset_masses(mu.to_float().weights, n)
            mb = upset_masses(nu.to_float().weights, n)
            bad = mb - ma > FLOAT_TOL
        idx = np.flatnonzero(bad)
        if idx.size == 0:
            return holds("dominates", mode=mode)
        mask = int(upset_masks(n)[idx[0]])
        members = [_cfg(x, n) for x in range(1 << n) if mask >> x & 1]
        return fails("dominates", {"upset": members, "mu": _mass(mu, mask), "nu": _mass(nu, mask)}, mode=mode)
    if mode != "flow":
        raise ValueError(f"unknown mode {mode!r}")
    _limit(mu, MAX_FLOW_RANK, "dominance by flow")
    mw = mu.weights if exact else mu.to_float().weights
    nw = nu.weights if exact else nu.to_float().weights
    ok, up_mask, res = dominance_flow(mw, nw, n, exact)
    if ok:
        return holds("dominates", mode=mode)
    members = [_cfg(x, n) for x in range(1 << n) if up_mask >> x & 1]
    return fails(
        "dominates",
        {"upset": members, "mu": _mass(mu, up_mask), "nu": _mass(nu, up_mask), "max_flow": res.flow_value, "scale": res.total},
        mode=mode,
    )


def _mass(mu: BinaryMeasure, mask: int):
    ind = np.array([bool(mask >> x & 1) for x in range(mu.size)])
    return mu.prob(ind)


def stochastic_covers(mu: BinaryMeasure, nu: BinaryMeasure) -> PropertyReport:
    """Whether a coupling exists with ``X == Y`` or ``X`` covering ``Y``."""
    if mu.n != nu.n:
        raise ValueError("measures live on lattices of different rank")
    _limit(mu, MAX_FLOW_RANK, "covers")
    exact = mu.exact and nu.exact
    mw = mu.weights if exact else mu.to_float().weights
    nw = nu.weights if exact else nu.to_float().weights
    ok, wit, _ = cover_flow(mw, nw, mu.n, exact)
    n = mu.n
    if ok:
        scale = wit["scale"]
        coupling = {(_cfg(x, n), _cfg(y, n)): (Fraction(int(f), int(scale)) if exact else f) for (x, y), f in wit["coupling"].items()}
        return holds("covers", coupling=coupling)
    scale = wit["scale"]
    conv = (lambda v: Fraction(int(v), int(scale))) if exact else float
    return fails(
        "covers",
        {
            "hall_set": [_cfg(x, n) for x in wit["hall_set"]],
            "neighbourhood": [_cfg(y, n) for y in wit["neighbourhood"]],
            "mu_mass": conv(wit["mu_mass"]),
            "nu_mass": conv(wit["nu_mass"]),
        },
    )


def conditional_rank_monotone(mu: BinaryMeasure, cover: bool = False) -> PropertyReport:
    """Compare the conditional laws given consecutive (nonempty) rank levels."""
    from .ops import truncate
    from .sequences import rank_sequence

    _limit(mu, MAX_UPSET_RANK, "rank monotonicity")
    prop = "rank-cover" if cover else "rank-dominance"
    levels = [k for k, a in enumerate(rank_sequence(mu).a) if a != 0]
    for lo, hi in zip(levels, levels[1:]):
        upper, lower = truncate(mu, hi, hi), truncate(mu, lo, lo)
        r = stochastic_covers(upper, lower) if cover else stochastic_dominates(upper, lower)
        if r.fails:
            return fails(prop, {"levels": (lo, hi), "inner": r.witness})
    return holds(prop, levels=levels)


def check_upset_edge_correlation(mu: BinaryMeasure) -> PropertyReport:
    """Every up-set has nonnegative covariance with at least one variable."""
    _limit(mu, MAX_UPSET_RANK, "edge correlation")
    n = mu.n
    x = np.arange(mu.size)
    if mu.exact:
        w, _ = integer_weights(mu.weights)
        tot = w.sum()
    else:
        w, tot = mu.to_float().weights, 1.0
    mA = upset_masses(w, n)
    some_ok = np.zeros(mA.shape[0], dtype=bool)
    for e in range(n):
        bit = ((x >> e) & 1).astype(w.dtype) if w.dtype != object else ((x >> e) & 1)
        we = w * bit
        me = we.sum()
        meA = upset_masses(we, n)
        lhs, rhs = meA * tot, me * mA
        some_ok |= (lhs >= rhs) if mu.exact else (lhs - rhs >= -FLOAT_TOL)
    bad = np.flatnonzero(~some_ok)
    if bad.size == 0:
        return holds("upset-edge-correlation")
    mask = int(upset_masks(n)[bad[0]])
    return fails("upset-edge-correlation", {"upset": [_cfg(y, n) for y in range(mu.size) if mask >> y & 1]})


# ---------------------------------------------------------------------------
# disjoint occurrence


def _box_masses_upsets(w: np.ndarray, n: int):
    """``mass[a, b]`` of the box product for every pair of up-sets."""
    masks = upset_masks(n)
    size = 1 << n
    members = ((masks[:, None] >> np.arange(size, dtype=np.uint64)[None, :]) & np.uint64(1)).astype(bool)
    mins = _minimal_masks(masks, n)
    x = np.arange(size)
    out = np.empty((len(masks), len(masks)), dtype=w.dtype)
    for a in range(len(masks)):
        box = np.zeros_like(members)
        m = int(mins[a])
        for s in range(size):
            if m >> s & 1:
                ys = x[(x & s) == 0]
                box[:, ys | s] |= members[:, ys]
        out[a] = box.astype(w.dtype) @ w
    return members, out


def _box_masses_all(w: np.ndarray, n: int):
    """``mass[a, b]`` of the box product for every pair of events."""
    size = 1 << n
    events = np.array([[bool(e >> x & 1) for x in range(size)] for e in range(1 << size)])
    tern = _ternary_codes(n)
    free_code = np.array([sum(2 * 3**j for j in range(n) if not (s >> j) & 1) for s in range(size)])
    cont = np.array([_cylinder_containment(ev, n) for ev in events])  # (E, 3**n)
    full = size - 1
    mass = np.zeros((len(events), len(events)), dtype=w.dtype)
    for omega in range(size):
        s = np.arange(size)
        ca = cont[:, free_code[s] + tern[omega & s]]  # (E, S)
        t = full & ~s
        cb = cont[:, free_code[t] + tern[omega & t]]
        box = (ca.astype(np.int64) @ cb.T.astype(np.int64)) > 0
        mass = mass + box.astype(w.dtype) * w[omega]
    return events, mass


def check_bkrna(mu: BinaryMeasure, mode: str = "upsets_only") -> PropertyReport:
    """Box inequality ``mu(A box B) <= mu(A) mu(B)`` over all events or all up-sets."""
    n = mu.n
    if mode == "all_events":
        _limit(mu, MAX_BKR_ALL_EVENTS, "box inequality over all events")
    elif mode == "upsets_only":
        _limit(mu, MAX_BKR_UPSETS, "box inequality over up-sets")
    else:
        raise ValueError("mode must be 'all_events' or 'upsets_only'")
    if mu.exact:
        w, _ = integer_weights(mu.weights)
        tot = w.sum()
    else:
        w, tot = mu.to_float().weights, 1.0
    members, box = _box_masses_upsets(w, n) if mode == "upsets_only" else _box_masses_all(w, n)
    single = members.astype(w.dtype) @ w
    lhs = box * tot
    rhs = single[:, None] * single[None, :]
    bad = np.argwhere(lhs > rhs if mu.exact else lhs - rhs > FLOAT_TOL)
    if len(bad) == 0:
        return holds("bkr", mode=mode)
    a, b = (int(i) for i in bad[0])
    conv = (lambda v: Fraction(int(v), int(tot))) if mu.exact else float
    return fails(
        "bkr",
        {
            "A": [_cfg(x, n) for x in np.flatnonzero(members[a])],
            "B": [_cfg(x, n) for x in np.flatnonzero(members[b])],
            "P(A box B)": conv(box[a, b]),
            "P(A)": conv(single[a]),
            "P(B)": conv(single[b]),
        },
        mode=mode,
    )
