"""Monotone and covering couplings as maximum-flow feasibility problems."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np

from ._exact import integer_weights

_SOURCE, _SINK = "s", "t"
_FLOAT_FLOW_TOL = 1e-9


@dataclass
class FlowResult:
    feasible: bool
    flow_value: object
    total: object
    source_side: set
    flow: dict


def _capacities(mu_w, nu_w, exact: bool):
    """Common-scale capacities: integers in exact mode, normalized floats otherwise."""
    if exact:
        ints, _ = integer_weights(np.concatenate([mu_w, nu_w]))
        m = len(mu_w)
        a, b = [int(v) for v in ints[:m]], [int(v) for v in ints[m:]]
        return a, b, sum(a)
    a = np.asarray(mu_w, dtype=float)
    b = np.asarray(nu_w, dtype=float)
    return list(a / a.sum()), list(b / b.sum()), 1.0


def _solve(G: nx.DiGraph, total, exact: bool) -> FlowResult:
    value, flow = nx.maximum_flow(G, _SOURCE, _SINK)
    feasible = value == total if exact else value >= total - _FLOAT_FLOW_TOL
    side = set()
    if not feasible:
        _, (side, _) = nx.minimum_cut(G, _SOURCE, _SINK)
    return FlowResult(bool(feasible), value, total, set(side), flow)


def dominance_flow(mu_w, nu_w, n: int, exact: bool) -> tuple[bool, int | None, FlowResult]:
    """Decide ``mu >= nu`` via a downward transport of ``mu`` onto ``nu``.

    Mass may only move from a configuration to ones below it, so a feasible
    flow of full value is a monotone coupling.  When infeasible, the lattice
    nodes on the sink side of a minimum cut form an up-set ``U`` with
    ``mu(U) < nu(U)``; it is returned as a bitmask over configurations.
    """
    a, b, total = _capacities(mu_w, nu_w, exact)
    G = nx.DiGraph()
    for x in range(1 << n):
        if a[x]:
            G.add_edge(_SOURCE, ("u", x), capacity=a[x])
        if b[x]:
            G.add_edge(("u", x), _SINK, capacity=b[x])
        for j in range(n):
            if x >> j & 1:
                G.add_edge(("u", x), ("u", x ^ (1 << j)))  # no capacity: unbounded
    G.add_nodes_from([_SOURCE, _SINK])
    res = _solve(G, total, exact)
    if res.feasible:
        return True, None, res
    down = {node[1] for node in res.source_side if isinstance(node, tuple)}
    up_mask = 0
    for x in range(1 << n):
        if x not in down:
            up_mask |= 1 << x
    return False, up_mask, res


def cover_flow(mu_w, nu_w, n: int, exact: bool) -> tuple[bool, dict, FlowResult]:
    """Decide whether ``mu`` covers ``nu``: a coupling with ``X == Y`` or ``X`` covering ``Y``.

    Returns ``(feasible, witness, result)``.  The witness is the coupling
    ``{(x, y): mass}`` when feasible, otherwise a set ``L`` of configurations
    with ``mu(L) > nu(N(L))`` where ``N(L)`` is everything ``L`` may move to.
    """
    a, b, total = _capacities(mu_w, nu_w, exact)
    G = nx.DiGraph()
    G.add_nodes_from([_SOURCE, _SINK])
    for x in range(1 << n):
        if a[x]:
            G.add_edge(_SOURCE, ("L", x), capacity=a[x])
            targets = [x] + [x ^ (1 << j) for j in range(n) if x >> j & 1]
            for y in targets:
                if b[y]:
                    G.add_edge(("L", x), ("R", y))
    for y in range(1 << n):
        if b[y]:
            G.add_edge(("R", y), _SINK, capacity=b[y])
    res = _solve(G, total, exact)
    if res.feasible:
        coupling = {}
        for u, out in res.flow.items():
            if isinstance(u, tuple) and u[0] == "L":
                for v, f in out.items():
                    if f:
                        coupling[(u[1], v[1])] = f
        return True, {"coupling": coupling, "scale": total}, res
    left = sorted(node[1] for node in res.source_side if isinstance(node, tuple) and node[0] == "L")
    reach = set()
    for x in left:
        reach.update([x] + [x ^ (1 << j) for j in range(n) if x >> j & 1])
    return False, {
        "hall_set": left,
        "neighbourhood": sorted(reach),
        "mu_mass": sum(a[x] for x in left),
        "nu_mass": sum(b[y] for y in reach),
        "scale": total,
    }, res
