"""Worked-example reproduction and seeded counterexample search.

A search draws candidate measures, keeps those satisfying a hypothesis and
tests a conclusion on them.  Hypotheses of the "+" kind cannot be certified
by sampling, so a failed conclusion under such a hypothesis is recorded as a
*suspect* and never as a counterexample.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from .lattice import RankError
from .measure import BinaryMeasure, ExternalField, from_weights, product_bernoulli
from .models import (
    GraphSpec,
    complete_graph,
    cycle_graph,
    exclusion_measure,
    field_sensitive_cna_measure,
    field_sensitive_threshold,
    five_point_measure,
    forest_measure,
    na_without_nlc_measure,
    path_graph,
    random_cluster_measure,
    random_tree,
    rank_sum_sequence,
    spanning_tree_measure,
    tree_class_measure,
    urn_measure,
)
from .ops import apply_field, condition, exchangeable, product, project
from .orders import asymmetric_increase_table, stoch_relation
from .properties import (
    check_association,
    check_cna,
    check_jnrd,
    check_lattice,
    check_plus,
    check_ulc,
    conditional_rank_monotone,
    recheck_plus_witness,
    stochastic_covers,
    stochastic_dominates,
)
from .report import PropertyReport, Verdict, fails, holds
from .sequences import is_ulc, random_rank_sequence, random_ulc

MAX_SEARCH_RANK = 6
MAX_PLUS_SEARCH_RANK = 4
DEFAULT_INNER_SAMPLES = 20
CHUNK = 250

STRATEGIES = ("atoms", "boundary", "zoo", "tree", "exchangeable")
_DEFAULT_MIX = {"atoms": 0.3, "boundary": 0.35, "zoo": 0.15, "tree": 0.1, "exchangeable": 0.1}


# ---------------------------------------------------------------------------
# candidate generation


@dataclass
class Candidate:
    index: int
    strategy: str
    measure: BinaryMeasure
    meta: dict = field(default_factory=dict)


def _small_fraction(rng, max_den: int = 6) -> Fraction:
    den = int(rng.integers(2, max_den + 1))
    return Fraction(int(rng.integers(1, den)), den)


def _gen_atoms(rng, m: int) -> BinaryMeasure:
    while True:
        w = rng.integers(1, 10, size=1 << m)
        w[rng.random(1 << m) < 0.3] = 0
        if w.sum():
            return from_weights([int(v) for v in w])


def _gen_boundary(rng, m: int) -> BinaryMeasure:
    size = 1 << m
    k = int(rng.integers(2, size))
    support = rng.choice(size, size=k, replace=False)
    w = [0] * size
    flat = rng.random() < 0.5
    for x in support:
        w[int(x)] = 1 if flat else int(rng.integers(1, 4))
    return from_weights(w)


def _random_graph(rng, m: int) -> GraphSpec:
    """Connected multigraph with exactly ``m`` edges."""
    k = int(rng.integers(2, m + 2))
    edges = [(int(rng.integers(0, v)), v) for v in range(1, k)]
    while len(edges) < m:
        u, v = (int(a) for a in rng.choice(k, size=2, replace=False))
        edges.append((min(u, v), max(u, v)))
    order = rng.permutation(m)
    return GraphSpec(k, [edges[i] for i in order])


def _gen_zoo(rng, m: int) -> tuple[BinaryMeasure, dict]:
    kind = ["spanning-tree", "forest", "random-cluster", "urns", "exchangeable-ulc"][int(rng.integers(0, 5))]
    if kind == "spanning-tree":
        g = _random_graph(rng, m)
        g = GraphSpec(g.vertices, g.edges, [int(rng.integers(1, 4)) for _ in range(m)])
        mu = spanning_tree_measure(g)
    elif kind == "forest":
        mu = forest_measure(_random_graph(rng, m))
    elif kind == "random-cluster":
        g = _random_graph(rng, m)
        mu = random_cluster_measure(g, [_small_fraction(rng) for _ in range(m)], _small_fraction(rng, 4) if rng.random() < 0.8 else 1)
    elif kind == "urns":
        raw = [int(v) for v in rng.integers(1, 5, size=m)]
        mu = urn_measure(m, int(rng.integers(1, m + 2)), [Fraction(v, sum(raw)) for v in raw])
    else:
        mu = exchangeable(random_ulc(rng, m).a)
    if rng.random() < 0.5:
        mu = apply_field(mu, ExternalField([Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 5))) for _ in range(m)]))
    return mu, {"model": kind}


def generate_candidate(index: int, n: int, seed: int, strategies=None, min_rank: int = 2) -> Candidate:
    """The ``index``-th candidate of a search; depends only on its arguments."""
    rng = np.random.default_rng([seed, index])
    strategies = tuple(strategies or STRATEGIES)
    probs = np.array([_DEFAULT_MIX.get(s, 0.1) for s in strategies])
    strategy = strategies[int(rng.choice(len(strategies), p=probs / probs.sum()))]
    m = int(rng.integers(min_rank, n + 1))
    meta: dict[str, Any] = {}
    if strategy == "atoms":
        mu = _gen_atoms(rng, m)
    elif strategy == "boundary":
        mu = _gen_boundary(rng, m)
    elif strategy == "zoo":
        mu, meta = _gen_zoo(rng, m)
    elif strategy == "tree":
        mu = tree_class_measure(random_tree(rng, m))
    elif strategy == "exchangeable":
        seq = random_ulc(rng, m) if rng.random() < 0.5 else random_rank_sequence(rng, m)
        mu = exchangeable(seq.a)
    elif strategy == "ulc-pair":
        mu, meta = _gen_ulc_pair(rng, m)
    elif strategy == "model-instance":
        mu, meta = _gen_model_instance(rng, m)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return Candidate(index, strategy, mu, meta)


def _gen_ulc_pair(rng, m: int) -> tuple[BinaryMeasure, dict]:
    """Product of two exchangeable measures; its rank law is the convolution."""
    k = int(rng.integers(1, m))
    a = random_ulc(rng, k) if rng.random() < 0.8 else random_rank_sequence(rng, k)
    b = random_ulc(rng, m - k) if rng.random() < 0.8 else random_rank_sequence(rng, m - k)
    return product(exchangeable(a.a), exchangeable(b.a)), {"split": k}


def _gen_model_instance(rng, m: int) -> tuple[BinaryMeasure, dict]:
    kind = ["rc-k3", "rc-k4", "urns", "exclusion"][int(rng.integers(0, 4))]
    if kind.startswith("rc"):
        g = complete_graph(3 if kind == "rc-k3" else 4)
        ps = [_small_fraction(rng) for _ in range(g.m)]
        q = _small_fraction(rng, 5) if rng.random() < 0.8 else 1
        return random_cluster_measure(g, ps, q), {"model": kind, "p": ps, "q": q}
    if kind == "urns":
        raw = [int(v) for v in rng.integers(1, 5, size=m)]
        balls = int(rng.integers(1, 2 * m + 1))
        return urn_measure(m, balls, [Fraction(v, sum(raw)) for v in raw]), {"model": kind, "balls": balls}
    k = max(m, 2)
    g = [path_graph, cycle_graph, complete_graph][int(rng.integers(0, 3))](k) if k > 2 else path_graph(k)
    eta0 = [int(v) for v in rng.integers(0, 2, size=k)]
    t = float(rng.choice([0.1, 0.5, 1.0, 3.0]))
    return exclusion_measure(g, eta0, t), {"model": kind, "eta0": eta0, "t": t}


# ---------------------------------------------------------------------------
# conjecture specifications


def _na(mu):
    return check_association(mu, "negative")


def _hnlc(mu):
    return check_lattice(mu, "negative", hereditary=True)


def _plus(base: str, exact_first: Callable | None = None):
    def run(mu, samples, seed):
        if exact_first is not None:
            r = exact_first(mu)
            if r.fails:
                return r
        return check_plus(mu, base, samples=samples, seed=seed)

    run.plus_base = base
    return run


def _exact(fn):
    def run(mu, samples, seed):
        return fn(mu)

    return run


def _nd_cover(mu):
    n = mu.n
    last = n - 1
    p1 = mu.prob(lambda x: x >> last & 1)
    if p1 == 0 or p1 == 1:
        return holds("nd-cover", vacuous=True)
    lo = condition(mu, {last: 0}, drop=True)
    hi = condition(mu, {last: 1}, drop=True)
    r = stochastic_covers(lo, hi)
    return r if r.holds else fails("nd-cover", r.witness)


def _disjoint_pa(mu):
    return check_association(mu, "positive", disjoint_only=True)


def _full_pa(mu):
    return check_association(mu, "positive", disjoint_only=False)


def _split_ulc(mu: BinaryMeasure, k: int) -> PropertyReport:
    left, right = project(mu, range(k)), project(mu, range(k, mu.n))
    if product(left, right) != mu:
        return fails("ulc-pair", {"reason": "not a product across the split", "split": k})
    for side, nu in (("left", left), ("right", right)):
        r = check_ulc(nu)
        if r.fails:
            return fails("ulc-pair", {"side": side, "inner": r.witness})
    return holds("ulc-pair")


def _all_subset_sums_ulc(mu: BinaryMeasure) -> PropertyReport:
    for S in range(1, mu.size):
        subset = [j for j in range(mu.n) if S >> j & 1]
        seq = rank_sum_sequence(mu, subset)
        v = is_ulc(seq)
        if not v:
            return fails("subset-sums-ulc", {"subset": subset, "sequence": seq, "index": v.index, "reason": v.reason})
    return holds("subset-sums-ulc")


@dataclass(frozen=True)
class ConjectureSpec:
    """A conjectured implication together with the candidates used to probe it.

    ``hypothesis`` and ``conclusion`` take ``(measure, samples, seed)`` and
    may also need ``meta`` from the candidate (``uses_meta``).  When
    ``plus_hypothesis`` is set the hypothesis can only be falsified, so
    failures are demoted to suspects.
    """

    id: str
    statement: str
    hypothesis: Callable
    conclusion: Callable
    strategies: tuple = STRATEGIES
    plus_hypothesis: bool = False
    plus_conclusion: str | None = None
    uses_meta: bool = False
    min_rank: int = 2
    # stronger "+" hypothesis of the original statement, probed on any counterexample
    stated_plus: str | None = None


def _always(mu, samples, seed):
    return holds("model-instance")


SPECS: dict[str, ConjectureSpec] = {
    s.id: s
    for s in [
        ConjectureSpec(
            "horizontal",
            "h-NLC+ implies CNA+ (the reverse arrows are theorems)",
            _plus("hnlc", _hnlc),
            _plus("cna", check_cna),
            plus_hypothesis=True,
        ),
        ConjectureSpec("hnlc-implies-na", "h-NLC implies NA", _exact(_hnlc), _exact(_na)),
        ConjectureSpec("always-ulc", "NA implies ULC", _exact(_na), _exact(check_ulc)),
        ConjectureSpec(
            "ulc-examples",
            "subset sums in RC (q <= 1), urn and exclusion models are ULC",
            _always,
            _exact(_all_subset_sums_ulc),
            strategies=("model-instance",),
        ),
        ConjectureSpec(
            "ulc-implies-na",
            "ULC+ implies CNA",
            _plus("ulc", check_ulc),
            _exact(check_cna),
            plus_hypothesis=True,
        ),
        ConjectureSpec(
            "ulc-convolve",
            "the convolution of ULC sequences is ULC",
            lambda mu, samples, seed, meta: _split_ulc(mu, meta["split"]),
            _exact(check_ulc),
            strategies=("ulc-pair",),
            uses_meta=True,
        ),
        ConjectureSpec(
            "rank-cover",
            "CNA implies the law given rank k+1 dominates the law given rank k",
            _exact(check_cna),
            _exact(conditional_rank_monotone),
            stated_plus="cna",
        ),
        ConjectureSpec(
            "nd-cover",
            "CNA+ implies the law given X_last = 0 covers the law given X_last = 1",
            _plus("cna", check_cna),
            _exact(_nd_cover),
            plus_hypothesis=True,
        ),
        ConjectureSpec(
            "question-disjoint-pa",
            "positive association on disjoint supports implies full positive association",
            _exact(_disjoint_pa),
            _exact(_full_pa),
        ),
        ConjectureSpec(
            "figure1-strictness",
            "CNA implies h-NLC+ (expected false: any counterexample is a strictness witness)",
            _exact(check_cna),
            _plus("hnlc"),
            min_rank=3,
            plus_conclusion="hnlc",
        ),
    ]
}


def get_spec(spec) -> ConjectureSpec:
    if isinstance(spec, ConjectureSpec):
        return spec
    try:
        return SPECS[spec]
    except KeyError:
        raise ValueError(f"unknown conjecture id {spec!r}; expected one of {sorted(SPECS)}") from None


def _call(fn, spec: ConjectureSpec, cand: Candidate, samples: int, seed: int) -> PropertyReport:
    if spec.uses_meta and fn is spec.hypothesis:
        return fn(cand.measure, samples, seed, cand.meta)
    return fn(cand.measure, samples, seed)


def evaluate(spec, cand: Candidate, inner_samples: int = DEFAULT_INNER_SAMPLES, seed: int = 0) -> tuple[str, dict | None]:
    """Classify a candidate as ``skip``, ``pass``, ``suspect`` or ``counterexample``."""
    spec = get_spec(spec)
    inner_seed = seed * 1_000_003 + cand.index
    h = _call(spec.hypothesis, spec, cand, inner_samples, inner_seed)
    if h.fails:
        return "skip", None
    c = _call(spec.conclusion, spec, cand, inner_samples, inner_seed)
    if not c.fails:
        return "pass", None
    certified = h.holds and not spec.plus_hypothesis
    return ("counterexample" if certified else "suspect"), {"hypothesis": h.verdict.value, "conclusion": c.property, "witness": c.witness}


# ---------------------------------------------------------------------------
# search


@dataclass
class SearchReport:
    conjecture: str
    n: int
    budget: int
    seed: int
    tested: int = 0
    skipped: int = 0
    evaluated: int = 0
    counterexample: dict | None = None
    suspects: list = field(default_factory=list)
    wall_seconds: float = 0.0
    inner_samples: int = DEFAULT_INNER_SAMPLES

    @property
    def found(self) -> bool:
        return self.counterexample is not None

    @property
    def status(self) -> str:
        return "found" if self.found else "none-found"

    def to_dict(self) -> dict:
        from .io import measure_to_dict, record, to_jsonable

        ce = None
        if self.counterexample is not None:
            ce = dict(self.counterexample)
            ce["measure"] = measure_to_dict(ce["measure"])
            ce = to_jsonable(ce)
        return record(
            "search",
            {
                "conjecture": self.conjecture,
                "n": self.n,
                "budget": self.budget,
                "seed": self.seed,
                "inner_samples": self.inner_samples,
                "status": self.status,
                "tested": self.tested,
                "skipped": self.skipped,
                "evaluated": self.evaluated,
                "suspects": list(self.suspects),
                "counterexample": ce,
                "wall_seconds": round(self.wall_seconds, 3),
            },
        )

    def summary(self) -> str:
        s = f"{self.conjecture} n<={self.n} budget={self.budget} seed={self.seed}: {self.status}"
        s += f" (tested {self.tested}, skipped {self.skipped}, suspects {len(self.suspects)}, {self.wall_seconds:.1f}s)"
        if self.found:
            s += f" at candidate {self.counterexample['index']}"
        return s


def _run_chunk(args) -> list[tuple[int, str, str, dict | None, dict]]:
    spec_id, n, seed, lo, hi, inner = args
    spec = get_spec(spec_id)
    out = []
    for i in range(lo, hi):
        cand = generate_candidate(i, n, seed, spec.strategies, spec.min_rank)
        outcome, info = evaluate(spec, cand, inner, seed)
        if outcome == "counterexample":
            out.append((i, outcome, cand.strategy, info, {"measure": cand.measure, "meta": cand.meta}))
        else:
            out.append((i, outcome, cand.strategy, None, {}))
    return out


def default_workers() -> int:
    env = os.environ.get("NEGDEP_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"NEGDEP_WORKERS must be an integer, got {env!r}") from None
    return 1


def search(spec, n: int, budget: int, seed: int = 0, workers: int | None = None, *, inner_samples: int = DEFAULT_INNER_SAMPLES) -> SearchReport:
    """Evaluate candidates ``0 .. budget-1`` and stop at the first counterexample.

    Candidate ``i`` is drawn from ``default_rng([seed, i])`` with a lattice
    rank between the conjecture's minimum and ``n``, so the report does not depend
    on the number of workers.
    """
    spec = get_spec(spec)
    nested_plus = spec.plus_hypothesis or spec.plus_conclusion is not None
    limit = MAX_PLUS_SEARCH_RANK if nested_plus else MAX_SEARCH_RANK
    if n > limit:
        raise RankError(f"search for {spec.id} supports n <= {limit}, got {n}")
    if n < spec.min_rank:
        raise ValueError(f"search for {spec.id} needs n >= {spec.min_rank}")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    workers = default_workers() if workers is None else max(1, int(workers))
    report = SearchReport(spec.id, n, budget, seed, inner_samples=inner_samples)
    t0 = time.perf_counter()
    jobs = [(spec.id, n, seed, lo, min(lo + CHUNK, budget), inner_samples) for lo in range(0, budget, CHUNK)]

    def consume(results) -> bool:
        for i, outcome, strategy, info, extra in results:
            report.evaluated += 1
            if outcome == "skip":
                report.skipped += 1
                continue
            report.tested += 1
            if outcome == "suspect":
                report.suspects.append(i)
            elif outcome == "counterexample":
                report.counterexample = {"index": i, "strategy": strategy, **extra, **info}
                return True
        return False

    if workers == 1:
        for job in jobs:
            if consume(_run_chunk(job)):
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # chunks come back in submission order; later chunks are discarded
            for results in pool.map(_run_chunk, jobs):
                if consume(results):
                    break
    if report.found and spec.stated_plus is not None:
        r = check_plus(report.counterexample["measure"], spec.stated_plus, samples=100, seed=seed)
        report.counterexample["stated_hypothesis"] = {"property": r.property, "verdict": r.verdict.value, "witness": r.witness}
    report.wall_seconds = time.perf_counter() - t0
    return report


def verify_counterexample(report) -> bool:
    """Re-check a serialized (or in-memory) counterexample from scratch."""
    from .io import measure_from_dict

    d = report.to_dict() if isinstance(report, SearchReport) else report
    ce = d.get("counterexample")
    if not ce:
        return False
    spec = get_spec(d["conjecture"])
    mu = measure_from_dict(ce["measure"])
    cand = Candidate(int(ce["index"]), ce.get("strategy", ""), mu, ce.get("meta") or {})
    h = _call(spec.hypothesis, spec, cand, d.get("inner_samples", DEFAULT_INNER_SAMPLES), 0)
    if not h.holds or spec.plus_hypothesis:
        return False
    if spec.plus_conclusion is not None:
        w = ce["witness"]
        witness = {"field": [math.inf if v == "inf" else (0 if v == 0 else float(v)) for v in w["field"]], "projection": w["projection"]}
        return recheck_plus_witness(mu, spec.plus_conclusion, witness)
    return _call(spec.conclusion, spec, cand, 0, 0).fails


# ---------------------------------------------------------------------------
# implication battery

FIGURE1_ROWS = ("na", "cna", "jnrd", "hnlc", "cna+", "jnrd+", "hnlc+")
# (a, b): a holds forces b to hold, equivalently b failing forces a to fail
_ARROWS = [("cna", "jnrd"), ("jnrd", "hnlc"), ("cna", "na"), ("cna+", "jnrd+"), ("jnrd+", "hnlc+"), ("cna+", "cna"), ("jnrd+", "jnrd"), ("hnlc+", "hnlc")]
MAX_FIGURE1_RANK = 5


@dataclass
class Figure1Table:
    verdicts: dict
    reports: dict
    consistent: bool
    violations: list

    def __str__(self) -> str:
        cells = "  ".join(f"{k}={self.verdicts[k]}" for k in FIGURE1_ROWS)
        return cells + ("" if self.consistent else f"  INCONSISTENT {self.violations}")


def verify_figure1(mu: BinaryMeasure, samples: int = 100, seed: int = 0) -> Figure1Table:
    """Decide the four exact properties and probe the three "+" properties.

    A pattern contradicting a proved implication is flagged; for the "+"
    rows a failure is a certified violation while "inconclusive" means no
    violation was found.  The "+" probes share candidate fields, so a
    failure of a weaker "+" property forces a failure of CNA+ on the same
    candidate.
    """
    if mu.n > MAX_FIGURE1_RANK:
        raise RankError(f"verify_figure1 supports n <= {MAX_FIGURE1_RANK}")
    reports = {
        "na": _na(mu),
        "cna": check_cna(mu),
        "jnrd": check_jnrd(mu),
        "hnlc": _hnlc(mu),
        "cna+": check_plus(mu, "cna", samples=samples, seed=seed),
        "jnrd+": check_plus(mu, "jnrd", samples=samples, seed=seed),
        "hnlc+": check_plus(mu, "hnlc", samples=samples, seed=seed),
    }
    verdicts = {k: r.verdict for k, r in reports.items()}
    violations = []
    for a, b in _ARROWS:
        if verdicts[b] is Verdict.FAILS and verdicts[a] is not Verdict.FAILS:
            violations.append(f"{b} fails but {a} does not")
    return Figure1Table(verdicts, reports, not violations, violations)


# ---------------------------------------------------------------------------
# worked examples


@dataclass
class Check:
    name: str
    expected: Any
    observed: Any

    @property
    def ok(self) -> bool:
        return self.expected == self.observed


@dataclass
class ExampleReport:
    example: str
    checks: list
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        from .io import record, to_jsonable

        return record(
            "example",
            {
                "example": self.example,
                "passed": self.passed,
                "checks": [{"name": c.name, "expected": to_jsonable(c.expected), "observed": to_jsonable(c.observed), "ok": c.ok} for c in self.checks],
                "details": to_jsonable(self.details),
            },
        )

    def summary(self) -> str:
        lines = [f"{self.example}: {'pass' if self.passed else 'FAIL'}"]
        for c in self.checks:
            lines.append(f"  [{'ok' if c.ok else 'MISMATCH'}] {c.name}: expected {_show(c.expected)}, observed {_show(c.observed)}")
        for k, v in self.details.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


def _show(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_show(x) for x in v) + "]"
    return str(v)


EXAMPLES = ("ex1", "ex2", "stoch-table", "s33-five-point", "figure1-demo")


def cna_threshold(family: Callable[[Fraction], BinaryMeasure], lo: Fraction, hi: Fraction, steps: int = 40) -> tuple[Fraction, Fraction]:
    """Bracket ``[a, b]`` with CNA holding at ``a`` and failing at ``b`` (bisection)."""
    if not check_cna(family(lo)).holds or check_cna(family(hi)).holds:
        raise ValueError("CNA must hold at lo and fail at hi")
    for _ in range(steps):
        mid = (lo + hi) / 2
        if check_cna(family(mid)).holds:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _ex1() -> ExampleReport:
    checks = []
    for eps in (Fraction(0), Fraction(2, 5), Fraction(4, 5)):
        checks.append(Check(f"CNA at eps={eps}", True, check_cna(field_sensitive_cna_measure(eps)).holds))
    eps = Fraction(1, 2)
    lam = eps / (2 * (1 - eps))
    nu = apply_field(field_sensitive_cna_measure(eps), ExternalField([lam, 1, 1]))
    cov = nu.covariance(1, 2)
    checks.append(Check(f"Cov(X2,X3) > 0 after field ({lam},1,1) at eps=1/2", True, cov > 0))
    checks.append(Check("h-NLC fails after that field", True, _hnlc(nu).fails))
    checks.append(Check("CNA fails at eps=1", False, check_cna(field_sensitive_cna_measure(1)).holds))
    # the sharp field threshold: covariance vanishes exactly at 4 eps / (4 - eps)
    thr = field_sensitive_threshold(eps)
    at = apply_field(field_sensitive_cna_measure(eps), ExternalField([thr, 1, 1])).covariance(1, 2)
    checks.append(Check(f"Cov(X2,X3) = 0 at field threshold {thr}", 0, at))
    lo, hi = cna_threshold(field_sensitive_cna_measure, Fraction(4, 5), Fraction(1))
    guess = lo.limit_denominator(100)
    sharp = check_cna(field_sensitive_cna_measure(guess)).holds and not check_cna(field_sensitive_cna_measure(guess + Fraction(1, 10**9))).holds
    return ExampleReport(
        "ex1",
        checks,
        {
            "cna_threshold_bracket": (float(lo), float(hi)),
            "cna_threshold": str(guess) if sharp else None,
            "field_threshold_formula": "4*eps/(4-eps)",
            "cov_after_field": cov,
        },
    )


def _ex2() -> ExampleReport:
    checks = []
    for eps in (Fraction(1, 100), Fraction(1, 20)):
        mu = na_without_nlc_measure(eps)
        checks.append(Check(f"NA at eps={eps}", True, _na(mu).holds))
        nlc = check_lattice(mu, "negative")
        checks.append(Check(f"NLC fails at eps={eps}", True, nlc.fails))
    small = na_without_nlc_measure(Fraction(1, 200))
    return ExampleReport(
        "ex2",
        checks,
        {
            "nlc_fails_iff": "eps < 1/100 (pair 011, 110 in X1X2X3 order)",
            "eps=1/200": {"na": _na(small).verdict.value, "nlc": check_lattice(small, "negative").verdict.value},
        },
    )


def _stoch_table() -> ExampleReport:
    rel = stoch_relation(asymmetric_increase_table()).as_dict()
    return ExampleReport("stoch-table", [Check("Y↑X", True, rel["Y↑X"]), Check("X↑Y", False, rel["X↑Y"])], {"relations": rel})


def _s33() -> ExampleReport:
    mu = five_point_measure()
    lo = condition(mu, {2: 0}, drop=True)
    hi = condition(mu, {2: 1}, drop=True)
    cov = stochastic_covers(lo, hi)
    return ExampleReport(
        "s33-five-point",
        [Check("dominates", True, stochastic_dominates(lo, hi).holds), Check("covers", False, cov.holds)],
        {"hall_set": cov.witness["hall_set"] if cov.fails else None, "na": _na(mu).verdict.value, "cna": check_cna(mu).verdict.value},
    )


def _figure1_demo() -> ExampleReport:
    V = Verdict
    checks = []
    details = {}
    cases = {
        "product": product_bernoulli([Fraction(1, 3), Fraction(1, 2), Fraction(3, 4)]),
        "ex2(1/20)": na_without_nlc_measure(Fraction(1, 20)),
        "ex2(1/200)": na_without_nlc_measure(Fraction(1, 200)),
        "ex1(1/2)": field_sensitive_cna_measure(Fraction(1, 2)),
    }
    tables = {k: verify_figure1(mu) for k, mu in cases.items()}
    for k, t in tables.items():
        checks.append(Check(f"{k} consistent", True, t.consistent))
        details[k] = {r: str(v) for r, v in t.verdicts.items()}
    tp = tables["product"].verdicts
    checks.append(Check("product: exact rows hold", [V.HOLDS] * 4, [tp[r] for r in FIGURE1_ROWS[:4]]))
    checks.append(Check("product: + rows show no violation", [V.INCONCLUSIVE] * 3, [tp[r] for r in FIGURE1_ROWS[4:]]))
    t2 = tables["ex2(1/20)"].verdicts
    checks.append(Check("ex2(1/20): NA holds", V.HOLDS, t2["na"]))
    checks.append(Check("ex2(1/20): CNA, JNRD, h-NLC fail", [V.FAILS] * 3, [t2["cna"], t2["jnrd"], t2["hnlc"]]))
    t3 = tables["ex2(1/200)"].verdicts
    checks.append(Check("ex2(1/200): NA holds, h-NLC fails", [V.HOLDS, V.FAILS], [t3["na"], t3["hnlc"]]))
    t1 = tables["ex1(1/2)"].verdicts
    checks.append(Check("ex1(1/2): CNA, JNRD, h-NLC hold", [V.HOLDS] * 3, [t1["cna"], t1["jnrd"], t1["hnlc"]]))
    checks.append(Check("ex1(1/2): + rows fail", [V.FAILS] * 3, [t1[r] for r in FIGURE1_ROWS[4:]]))
    return ExampleReport("figure1-demo", checks, details)


_EXAMPLE_FNS = {"ex1": _ex1, "ex2": _ex2, "stoch-table": _stoch_table, "s33-five-point": _s33, "figure1-demo": _figure1_demo}


def reproduce_example(example: str) -> ExampleReport:
    try:
        fn = _EXAMPLE_FNS[example]
    except KeyError:
        raise ValueError(f"unknown example {example!r}; expected one of {list(_EXAMPLE_FNS)}") from None
    return fn()
