"""JSON file formats for measures, graphs and reports.

Every top-level object carries ``"version": 1``.  Rationals are written as
``"p/q"`` strings, floats in shortest round-trip form.
"""

from __future__ import annotations

import json
import math
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from ._exact import fmt_number, to_fraction
from .lattice import config_str, parse_config
from .measure import FLOAT, RATIONAL, BinaryMeasure
from .models import GraphSpec

FORMAT_VERSION = 1


class FormatError(ValueError):
    """Raised for structurally invalid measure or graph files."""


class NormalizationWarning(UserWarning):
    pass


# ---------------------------------------------------------------------------
# numbers and generic values


def encode_number(x) -> str | float | int:
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    return fmt_number(x)


def decode_number(v, backend: str = RATIONAL):
    if isinstance(v, bool):
        raise FormatError(f"expected a number, got {v!r}")
    if backend == FLOAT:
        if isinstance(v, str):
            return float(to_fraction(v)) if "/" in v else float(v)
        if isinstance(v, (int, float)):
            return float(v)
    else:
        if isinstance(v, (int, str)):
            return to_fraction(v)
        if isinstance(v, float):
            # the float's exact binary value; loud rather than silent rounding
            return Fraction(v)
    raise FormatError(f"expected a number, got {v!r}")


def to_jsonable(obj: Any) -> Any:
    """Recursively convert reports and witnesses into JSON-compatible values."""
    if isinstance(obj, dict):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj, key=repr) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, BinaryMeasure):
        return measure_to_dict(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):  # enums
        return obj.value
    if isinstance(obj, (int, float, Fraction, np.integer, np.floating, np.bool_)):
        return encode_number(obj)
    return str(obj)


def _key(k) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, tuple):
        return ",".join(str(to_jsonable(v)) for v in k)
    return str(to_jsonable(k))


def dumps(obj: Any) -> str:
    """Canonical single-line JSON: sorted keys, no extra whitespace."""
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


# ---------------------------------------------------------------------------
# measures


def measure_to_dict(mu: BinaryMeasure, *, sparse: bool = False, labels: list[str] | None = None) -> dict:
    d: dict[str, Any] = {"version": FORMAT_VERSION, "kind": "measure", "n": mu.n, "backend": mu.backend}
    if sparse:
        d["atoms"] = [[config_str(x, mu.n), encode_number(mu.weights[x])] for x in mu.support()]
    else:
        d["probs"] = [encode_number(v) for v in mu.weights]
    if labels is not None:
        if len(labels) != mu.n:
            raise ValueError("need one label per variable")
        d["labels"] = list(labels)
    return d


def measure_from_dict(d: dict) -> BinaryMeasure:
    if not isinstance(d, dict):
        raise FormatError("measure file must hold a JSON object")
    _check_version(d, "measure")
    try:
        n = int(d["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError("measure file needs an integer field 'n'") from exc
    if n < 0:
        raise FormatError("n must be nonnegative")
    backend = d.get("backend", RATIONAL)
    if backend not in (RATIONAL, FLOAT):
        raise FormatError(f"unknown backend {backend!r}")
    has_dense, has_sparse = "probs" in d, "atoms" in d
    if has_dense == has_sparse:
        raise FormatError("exactly one of 'probs' (dense) or 'atoms' (sparse) must be present")
    zero = Fraction(0) if backend == RATIONAL else 0.0
    if has_dense:
        raw = d["probs"]
        if not isinstance(raw, list) or len(raw) != 1 << n:
            raise FormatError(f"'probs' must be a list of 2**n = {1 << n} numbers")
        w = [decode_number(v, backend) for v in raw]
    else:
        w = [zero] * (1 << n)
        seen = set()
        for item in d["atoms"]:
            if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], str) and len(item[0]) == n):
                raise FormatError(f"bad sparse atom {item!r}")
            try:
                x = parse_config(item[0])
            except ValueError as exc:
                raise FormatError(str(exc)) from exc
            if x in seen:
                raise FormatError(f"configuration {item[0]} listed twice")
            seen.add(x)
            w[x] = decode_number(item[1], backend)
    if any(v < 0 for v in w):
        raise FormatError("weights must be nonnegative")
    total = sum(w, zero)
    if total == 0:
        raise FormatError("measure has empty support")
    if (total != 1) if backend == RATIONAL else abs(total - 1) > 1e-12:
        warnings.warn(f"weights sum to {fmt_number(total)}; normalizing", NormalizationWarning, stacklevel=2)
    if "labels" in d and (not isinstance(d["labels"], list) or len(d["labels"]) != n):
        raise FormatError("'labels' must list one name per variable")
    return BinaryMeasure(w, backend, normalize=True)


def save_measure(mu: BinaryMeasure, path, *, sparse: bool = False, labels: list[str] | None = None) -> None:
    Path(path).write_text(dumps(measure_to_dict(mu, sparse=sparse, labels=labels)) + "\n")


def load_measure(path) -> BinaryMeasure:
    return measure_from_dict(_read_json(path))


# ---------------------------------------------------------------------------
# graphs


def graph_to_dict(g: GraphSpec) -> dict:
    d: dict[str, Any] = {"version": FORMAT_VERSION, "kind": "graph", "vertices": g.vertices, "edges": [list(e) for e in g.edges]}
    if g.weights is not None:
        d["weights"] = [encode_number(w) for w in g.weights]
    if g.rates is not None:
        d["rates"] = [encode_number(r) for r in g.rates]
    return d


def graph_from_dict(d: dict) -> GraphSpec:
    if not isinstance(d, dict):
        raise FormatError("graph file must hold a JSON object")
    _check_version(d, "graph")
    try:
        k = int(d["vertices"])
        edges = [(int(u), int(v)) for u, v in d["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError("graph file needs 'vertices' and an 'edges' list of pairs") from exc
    weights = d.get("weights")
    rates = d.get("rates")
    try:
        return GraphSpec(
            k,
            edges,
            None if weights is None else [decode_number(w) for w in weights],
            None if rates is None else [decode_number(r, FLOAT) for r in rates],
        )
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def save_graph(g: GraphSpec, path) -> None:
    Path(path).write_text(dumps(graph_to_dict(g)) + "\n")


def load_graph(path) -> GraphSpec:
    return graph_from_dict(_read_json(path))


# ---------------------------------------------------------------------------
# line-delimited records


def record(kind: str, payload: dict) -> dict:
    return {"version": FORMAT_VERSION, "kind": kind, **payload}


def write_records(fp, records: Iterable[dict]) -> None:
    for r in records:
        fp.write(dumps(r) + "\n")


def read_records(fp) -> list[dict]:
    out = []
    for line in fp:
        line = line.strip()
        if line:
            out.append(json.loads(line))
    return out


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc


def _check_version(d: dict, kind: str) -> None:
    if d.get("version", FORMAT_VERSION) != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {d.get('version')!r}")
    if d.get("kind", kind) != kind:
        raise FormatError(f"expected a {kind} file, got kind {d.get('kind')!r}")
