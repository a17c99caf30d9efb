"""Constructors for the standard families of negatively dependent measures.

Edge models use one variable per edge, in edge-list order.  The exclusion
process uses one variable per vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence, Union

import numpy as np

from ._exact import is_exact_number, to_fraction
from .lattice import RankError
from .measure import FLOAT, RATIONAL, BinaryMeasure, bernoulli, from_atoms, point_mass
from .ops import exchangeable, product, rank_rescale, stir_continuous, truncate
from .sequences import LogConcaveWeights, RankSequence, rank_sequence

MAX_EDGES = 16
MAX_EXCLUSION_VERTICES = 12


@dataclass(frozen=True)
class GraphSpec:
    """Finite multigraph with optional per-edge weights and rates."""

    vertices: int
    edges: tuple
    weights: tuple | None = None
    rates: tuple | None = None

    def __init__(self, vertices: int, edges, weights=None, rates=None):
        edges = tuple((int(u), int(v)) for u, v in edges)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < vertices and 0 <= v < vertices):
                raise ValueError(f"edge ({u}, {v}) uses a vertex outside 0..{vertices - 1}")
        for name, vals in (("weights", weights), ("rates", rates)):
            if vals is not None and len(vals) != len(edges):
                raise ValueError(f"{name} must have one entry per edge")
        if weights is not None and any(to_fraction(w) <= 0 if _exact(w) else float(w) <= 0 for w in weights):
            raise ValueError("edge weights must be positive")
        if rates is not None and any(float(r) < 0 for r in rates):
            raise ValueError("edge rates must be nonnegative")
        object.__setattr__(self, "vertices", int(vertices))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", None if weights is None else tuple(weights))
        object.__setattr__(self, "rates", None if rates is None else tuple(rates))

    @property
    def m(self) -> int:
        return len(self.edges)

    def components(self, edge_mask: int) -> int:
        """Number of connected components of ``(V, edges in mask)``, isolated vertices included."""
        parent = list(range(self.vertices))
        count = self.vertices
        for i, (u, v) in enumerate(self.edges):
            if edge_mask >> i & 1:
                ru, rv = _find(parent, u), _find(parent, v)
                if ru != rv:
                    parent[ru] = rv
                    count -= 1
        return count

    def is_acyclic(self, edge_mask: int) -> bool:
        return self.components(edge_mask) == self.vertices - bin(edge_mask).count("1")

    def is_connected(self) -> bool:
        return self.components((1 << self.m) - 1) == 1


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _exact(v) -> bool:
    return is_exact_number(v) or isinstance(v, str)


def complete_graph(k: int) -> GraphSpec:
    return GraphSpec(k, list(combinations(range(k), 2)))


def path_graph(k: int) -> GraphSpec:
    return GraphSpec(k, [(i, i + 1) for i in range(k - 1)])


def cycle_graph(k: int) -> GraphSpec:
    return GraphSpec(k, [(i, (i + 1) % k) for i in range(k)])


def _edge_limit(g: GraphSpec) -> None:
    if g.m > MAX_EDGES:
        raise RankError(f"edge enumeration supports at most {MAX_EDGES} edges, got {g.m}")
    if g.m == 0:
        raise ValueError("graph has no edges")


def _measure_from_list(w: list, exact: bool) -> BinaryMeasure:
    return BinaryMeasure(w, RATIONAL if exact else FLOAT, normalize=True)


# ---------------------------------------------------------------------------
# spanning trees and forests


def spanning_tree_measure(g: GraphSpec) -> BinaryMeasure:
    """Spanning trees weighted by the product of their edge weights."""
    _edge_limit(g)
    if not g.is_connected():
        raise ValueError("graph is disconnected; it has no spanning tree")
    weights = g.weights if g.weights is not None else (1,) * g.m
    exact = all(_exact(w) for w in weights)
    ws = [to_fraction(w) if exact else float(w) for w in weights]
    out = [Fraction(0) if exact else 0.0] * (1 << g.m)
    for tree in combinations(range(g.m), g.vertices - 1):
        mask = sum(1 << i for i in tree)
        if g.is_acyclic(mask):
            val = Fraction(1) if exact else 1.0
            for i in tree:
                val *= ws[i]
            out[mask] = val
    return _measure_from_list(out, exact)


def forest_measure(g: GraphSpec, band: tuple[int, int] | None = None) -> BinaryMeasure:
    """Uniform measure on acyclic edge sets, optionally restricted to a size band."""
    _edge_limit(g)
    w = [1 if g.is_acyclic(mask) else 0 for mask in range(1 << g.m)]
    mu = _measure_from_list(w, True)
    if band is not None:
        mu = truncate(mu, band[0], band[1])
    return mu


def subdivided_parallel_graph(g: GraphSpec, edge: int, r: int, s: int) -> tuple[GraphSpec, list[list[int]]]:
    """Replace ``edge`` by ``r`` parallel paths of ``s`` edges each.

    Returns the new graph and, for every original edge, the list of new edge
    indices making up each path (a single index for untouched edges).
    """
    u, v = g.edges[edge]
    new_edges: list[tuple[int, int]] = []
    paths: list[list[int]] = []
    nv = g.vertices
    for i, (a, b) in enumerate(g.edges):
        if i != edge:
            paths.append([len(new_edges)])
            new_edges.append((a, b))
            continue
        group = []
        for _ in range(r):
            prev = u
            path = []
            for step in range(s):
                nxt = v if step == s - 1 else nv
                if step < s - 1:
                    nv += 1
                path.append(len(new_edges))
                new_edges.append((prev, nxt))
                prev = nxt
            group.append(path)
        paths.append(group)
    return GraphSpec(nv, new_edges), paths


# ---------------------------------------------------------------------------
# random cluster


def random_cluster_measure(g: GraphSpec, p, q) -> BinaryMeasure:
    """``mu(eta) proportional to prod_e p_e^eta_e (1-p_e)^(1-eta_e) * q^N(eta)``.

    ``N`` counts connected components with isolated vertices included.
    """
    _edge_limit(g)
    ps = list(p) if isinstance(p, (list, tuple, np.ndarray)) else [p] * g.m
    if len(ps) != g.m:
        raise ValueError("need one p per edge")
    exact = all(_exact(v) for v in ps) and _exact(q)
    conv = to_fraction if exact else float
    ps = [conv(v) for v in ps]
    q = conv(q)
    if any(not 0 < v < 1 for v in ps):
        raise ValueError("edge probabilities must lie strictly between 0 and 1")
    if q <= 0:
        raise ValueError("q must be positive")
    out = []
    for mask in range(1 << g.m):
        val = q ** g.components(mask)
        for i, pe in enumerate(ps):
            val *= pe if mask >> i & 1 else 1 - pe
        out.append(val)
    return _measure_from_list(out, exact)


# ---------------------------------------------------------------------------
# urns


def urn_measure(urns: int, balls: int, p: Sequence | None = None) -> BinaryMeasure:
    """Law of the indicators "urn i is non-empty" after ``balls`` IID drops.

    ``P(all urns in T empty) = (1 - p(T))**balls``; exact occupancy
    probabilities follow by Moebius inversion over supersets.
    """
    if urns < 1 or balls < 0:
        raise ValueError("need at least one urn and a nonnegative ball count")
    p = [Fraction(1, urns)] * urns if p is None else list(p)
    if len(p) != urns:
        raise ValueError("need one probability per urn")
    exact = all(_exact(v) for v in p)
    p = [to_fraction(v) if exact else float(v) for v in p]
    if any(v < 0 for v in p) or (sum(p) != 1 if exact else abs(sum(p) - 1) > 1e-9):
        raise ValueError("urn probabilities must form a probability vector")
    size = 1 << urns
    # g[T] = P(every urn in T is empty)
    g = []
    for T in range(size):
        pt = sum((p[i] for i in range(urns) if T >> i & 1), Fraction(0) if exact else 0.0)
        g.append((1 - pt) ** balls)
    # superset Moebius: h[Z] = P(empty set is exactly Z)
    h = list(g)
    for i in range(urns):
        bit = 1 << i
        for T in range(size):
            if not T & bit:
                h[T] -= h[T | bit]
    full = size - 1
    w = [h[full ^ x] for x in range(size)]  # configuration x lists the non-empty urns
    if not exact:
        w = [max(v, 0.0) for v in w]
    return _measure_from_list(w, exact)


# ---------------------------------------------------------------------------
# exclusion


def exclusion_measure(g: GraphSpec, eta0, t: float, tol: float = 1e-12) -> BinaryMeasure:
    """Law at time ``t`` of simple exclusion started from ``eta0``.

    Endpoints of edge ``e`` swap at the times of a Poisson process of rate
    ``rates[e]`` (default 1).  The result is a float measure accurate to
    ``tol`` in total variation.
    """
    if g.vertices > MAX_EXCLUSION_VERTICES:
        raise RankError(f"exclusion supports at most {MAX_EXCLUSION_VERTICES} vertices")
    if t < 0:
        raise ValueError("time must be nonnegative")
    if isinstance(eta0, (list, tuple, np.ndarray)):
        eta0 = sum(int(b) << j for j, b in enumerate(eta0))
    start = point_mass(eta0, g.vertices) if not isinstance(eta0, str) else point_mass(eta0)
    if start.n != g.vertices:
        raise ValueError("initial configuration has the wrong number of sites")
    rates = g.rates if g.rates is not None else (1,) * g.m
    table: dict[tuple[int, int], float] = {}
    for (u, v), r in zip(g.edges, rates):
        key = (min(u, v), max(u, v))
        table[key] = table.get(key, 0.0) + float(r)
    if t == 0 or not table:
        return start.to_float()
    return stir_continuous(start, table, t, tol=tol)


# ---------------------------------------------------------------------------
# class S trees


@dataclass(frozen=True)
class Leaf:
    p: object

    @property
    def leaves(self) -> int:
        return 1


@dataclass(frozen=True)
class Node:
    left: "TreeNode"
    right: "TreeNode"
    q: tuple

    def __post_init__(self):
        q = tuple(self.q.q if isinstance(self.q, LogConcaveWeights) else self.q)
        if len(q) != self.leaves + 1:
            raise ValueError(f"node sequence needs {self.leaves + 1} entries, got {len(q)}")
        LogConcaveWeights(q)
        object.__setattr__(self, "q", q)

    @property
    def leaves(self) -> int:
        return self.left.leaves + self.right.leaves


TreeNode = Union[Leaf, Node]


@dataclass
class TreeMeasure:
    """A class-S measure with the rank sequence recorded at every node (post-order)."""

    measure: BinaryMeasure
    node_rank_sequences: list[RankSequence] = field(default_factory=list)


def tree_class_measure(T: TreeNode, record: bool = False):
    """Bottom-up product and rank rescaling; left subtrees supply the low variables."""
    seqs: list[RankSequence] = []

    def build(node) -> BinaryMeasure:
        if isinstance(node, Leaf):
            mu = bernoulli(node.p)
        else:
            mu = rank_rescale(product(build(node.left), build(node.right)), node.q)
        if record:
            seqs.append(rank_sequence(mu))
        return mu

    mu = build(T)
    return TreeMeasure(mu, seqs) if record else mu


def random_tree(rng: np.random.Generator, leaves: int, *, max_den: int = 6) -> TreeNode:
    """Random class-S tree with rational Bernoulli leaves in (0, 1).

    Node sequences are random log-concave sequences, redrawn until their
    support meets the rank support of the product below them.
    """
    return _random_subtree(rng, leaves, max_den)[0]


def _random_subtree(rng, leaves: int, max_den: int):
    from .sequences import random_log_concave, support_interval

    if leaves == 1:
        den = int(rng.integers(2, max_den + 1))
        return Leaf(Fraction(int(rng.integers(1, den)), den)), (0, 1)
    k = int(rng.integers(1, leaves))
    left, (l1, h1) = _random_subtree(rng, k, max_den)
    right, (l2, h2) = _random_subtree(rng, leaves - k, max_den)
    lo, hi = l1 + l2, h1 + h2
    while True:
        q = random_log_concave(rng, leaves + 1, zero_ends=True)
        a, b = support_interval(q)
        if a <= hi and b >= lo:
            return Node(left, right, tuple(q)), (max(a, lo), min(b, hi))


# ---------------------------------------------------------------------------
# exchangeable


def exchangeable_measure(a) -> BinaryMeasure:
    """Exchangeable measure whose rank sequence is ``a`` (must be normalized)."""
    if not isinstance(a, RankSequence):
        a = RankSequence(tuple(a))
    return exchangeable(a.a)


# ---------------------------------------------------------------------------
# worked examples


_EX_ORDER = ["000", "001", "010", "011", "100", "101", "110", "111"]


def field_sensitive_cna_measure(eps=0) -> BinaryMeasure:
    """Three-variable CNA measure that a one-site field pushes into positive correlation.

    Atoms for ``X1 X2 X3`` in lexicographic order are
    ``16, 8, 8, 4, 12 + eps, 4, 4, 1`` (normalized).  CNA holds exactly for
    ``0 <= eps <= 4/5``; the field ``(lam, 1, 1)`` makes ``X2, X3`` positively
    correlated when ``lam < 4 eps / (4 - eps)``.
    """
    eps = to_fraction(eps) if _exact(eps) else float(eps)
    return from_atoms(dict(zip(_EX_ORDER, [16, 8, 8, 4, 12 + eps, 4, 4, 1])))


def field_sensitive_threshold(eps) -> Fraction:
    """Largest field value at variable 0 keeping ``Cov(X2, X3) <= 0`` in the measure above."""
    eps = to_fraction(eps)
    return 4 * eps / (4 - eps)


def na_without_nlc_measure(eps) -> BinaryMeasure:
    """Negatively associated measure whose lattice condition fails for small ``eps``.

    Atoms ``0, 1, 1, 10 eps, 1, 1, 10 eps, eps`` in lexicographic ``X1 X2 X3``
    order.  The pair ``011, 110`` violates the negative lattice condition
    exactly when ``eps < 1/100``.
    """
    eps = to_fraction(eps) if _exact(eps) else float(eps)
    return from_atoms(dict(zip(_EX_ORDER, [0, 1, 1, 10 * eps, 1, 1, 10 * eps, eps])))


def five_point_measure() -> BinaryMeasure:
    """Uniform on ``000, 001, 010, 100, 110``."""
    return from_atoms({c: 1 for c in ["000", "001", "010", "100", "110"]})


def binomial_rank_sequence(n: int, p) -> RankSequence:
    p = to_fraction(p)
    return RankSequence(tuple(comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(n + 1)))


def rank_sum_sequence(mu: BinaryMeasure, subset: Sequence[int]) -> list:
    """Law of ``sum_{e in subset} X_e``."""
    subset = list(subset)
    x = np.arange(mu.size)
    cnt = np.zeros(mu.size, dtype=np.int64)
    for e in subset:
        cnt += (x >> e) & 1
    zero = Fraction(0) if mu.exact else 0.0
    return [zero + mu.weights[cnt == k].sum() for k in range(len(subset) + 1)]


def cylinder_moments(mu: BinaryMeasure) -> dict[int, tuple[float, float]]:
    """For every nonempty vertex set ``S`` (bitmask): ``(E prod X_v, prod E X_v)``."""
    x = np.arange(mu.size)
    w = np.array([float(v) for v in mu.weights])
    means = [float(w[(x >> j) & 1 == 1].sum()) for j in range(mu.n)]
    out = {}
    for S in range(1, mu.size):
        joint = float(w[(x & S) == S].sum())
        prod_ = math.prod(means[j] for j in range(mu.n) if S >> j & 1)
        out[S] = (joint, prod_)
    return out
