"""Command-line interface: ``negdep {check,build,transform,search,repro}``.

Exit status: 0 holds / pass / none-found, 1 fails / found, 2 inconclusive,
3 usage error, 64 malformed input file, 65 size limit, 66 unreadable file.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction

from . import harness, io, models, ops, properties
from ._exact import to_fraction
from .lattice import RankError
from .measure import FLOAT, RATIONAL, ExternalField, product_bernoulli, uniform
from .report import PropertyReport, Verdict

EXIT_HOLDS, EXIT_FAILS, EXIT_INCONCLUSIVE = 0, 1, 2
EXIT_USAGE, EXIT_MALFORMED, EXIT_SIZE, EXIT_NOINPUT = 3, 64, 65, 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument helpers


def _number(text: str):
    text = text.strip()
    if text in ("inf", "+inf", "oo"):
        return float("inf")
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a number: {text!r}") from exc


def _numbers(text: str) -> list:
    return [_number(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _band(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError as exc:
        raise UsageError(f"expected a band 'a:b', got {text!r}") from exc


def _assignment(text: str) -> dict[int, int] | str:
    if "=" not in text:
        return text  # pattern form such as "1*0"
    out = {}
    for part in text.split(","):
        k, v = part.split("=")
        out[int(k)] = int(v)
    return out


def _load(path: str, backend: str | None = None):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", io.NormalizationWarning)
        mu = io.load_measure(path)
    for w in caught:
        print(f"warning: {path}: {w.message}", file=sys.stderr)
    if backend == FLOAT:
        mu = mu.to_float()
    elif backend == RATIONAL:
        mu = mu.to_rational()
    return mu


def _emit_measure(mu, out: str | None, sparse: bool) -> None:
    text = io.dumps(io.measure_to_dict(mu, sparse=sparse)) + "\n"
    if out:
        with open(out, "w") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)


def _emit_record(rec: dict, out: str | None, as_json: bool, human: str) -> None:
    if out:
        with open(out, "w") as fp:
            io.write_records(fp, [rec])
    if as_json:
        io.write_records(sys.stdout, [rec])
    else:
        print(human)


# ---------------------------------------------------------------------------
# check

_SIMPLE = {
    "na": lambda mu, a: properties.check_association(mu, "negative", disjoint_only=True),
    "pa": lambda mu, a: properties.check_association(mu, "positive", disjoint_only=False),
    "pa-disjoint": lambda mu, a: properties.check_association(mu, "positive", disjoint_only=True),
    "nlc": lambda mu, a: properties.check_lattice(mu, "negative"),
    "plc": lambda mu, a: properties.check_lattice(mu, "positive"),
    "hnlc": lambda mu, a: properties.check_lattice(mu, "negative", hereditary=True),
    "cna": lambda mu, a: properties.check_cna(mu),
    "jnrd": lambda mu, a: properties.check_jnrd(mu),
    "nc": lambda mu, a: properties.check_nc(mu),
    "ulc": lambda mu, a: properties.check_ulc(mu),
    "bkrna": lambda mu, a: properties.check_bkrna(mu, a.mode or "upsets_only"),
    "edge-correlation": lambda mu, a: properties.check_upset_edge_correlation(mu),
    "rank-dominance": lambda mu, a: properties.conditional_rank_monotone(mu),
    "rank-cover": lambda mu, a: properties.conditional_rank_monotone(mu, cover=True),
}
_PAIRWISE = {"dominates", "covers"}
PROPERTIES = sorted(list(_SIMPLE) + list(_PAIRWISE))


def cmd_check(args) -> int:
    prop = args.property
    if prop not in _SIMPLE and prop not in _PAIRWISE:
        raise UsageError(f"unknown property {prop!r}; expected one of {PROPERTIES}")
    mu = _load(args.input, args.backend)
    if args.plus:
        if prop not in properties.PLUS_BASES:
            raise UsageError(f"--plus applies to {list(properties.PLUS_BASES)}")
        report = properties.check_plus(mu, prop, samples=args.samples, seed=args.seed)
    elif prop in _PAIRWISE:
        if not args.other:
            raise UsageError(f"{prop} needs --other MEASURE")
        nu = _load(args.other, args.backend)
        if prop == "dominates":
            report = properties.stochastic_dominates(mu, nu, mode=args.mode or "auto")
        else:
            report = properties.stochastic_covers(mu, nu)
    else:
        report = _SIMPLE[prop](mu, args)
    rec = io.record("property", {"input": args.input, "report": _report_dict(report)})
    _emit_record(rec, args.out, args.json, str(report))
    return {Verdict.HOLDS: EXIT_HOLDS, Verdict.FAILS: EXIT_FAILS, Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[report.verdict]


def _report_dict(r: PropertyReport) -> dict:
    return {"property": r.property, "verdict": r.verdict.value, "witness": r.witness, "budget_used": r.budget_used, "details": r.details}


# ---------------------------------------------------------------------------
# build

MODELS = ("spanning-tree", "forest", "random-cluster", "urns", "exclusion", "exchangeable", "product", "uniform", "class-s-tree", "example")


def cmd_build(args) -> int:
    m = args.model
    g = io.load_graph(args.graph) if args.graph else None

    def need_graph():
        if g is None:
            raise UsageError(f"model {m} needs --graph FILE")
        return g

    if m == "spanning-tree":
        mu = models.spanning_tree_measure(need_graph())
    elif m == "forest":
        mu = models.forest_measure(need_graph(), _band(args.band) if args.band else None)
    elif m == "random-cluster":
        if args.p is None or args.q is None:
            raise UsageError("random-cluster needs --p and --q")
        ps = _numbers(args.p)
        mu = models.random_cluster_measure(need_graph(), ps if len(ps) > 1 else ps[0], _number(args.q))
    elif m == "urns":
        if args.urns is None or args.balls is None:
            raise UsageError("urns needs --urns and --balls")
        mu = models.urn_measure(args.urns, args.balls, _numbers(args.p) if args.p else None)
    elif m == "exclusion":
        if args.eta0 is None or args.t is None:
            raise UsageError("exclusion needs --eta0 and --t")
        mu = models.exclusion_measure(need_graph(), args.eta0, float(_number(args.t)))
    elif m == "exchangeable":
        if not args.rank:
            raise UsageError("exchangeable needs --rank a0,a1,...")
        mu = models.exchangeable_measure(_numbers(args.rank))
    elif m == "product":
        mu = product_bernoulli(_numbers(args.p or ""))
    elif m == "uniform":
        mu = uniform(args.n or 1)
    elif m == "class-s-tree":
        import numpy as np

        mu = models.tree_class_measure(models.random_tree(np.random.default_rng(args.seed), args.n or 3))
    elif m == "example":
        eps = _number(args.eps) if args.eps else Fraction(0)
        makers = {
            "ex1": lambda: models.field_sensitive_cna_measure(eps),
            "ex2": lambda: models.na_without_nlc_measure(eps),
            "five-point": models.five_point_measure,
        }
        if args.name not in makers:
            raise UsageError(f"--name must be one of {sorted(makers)}")
        mu = makers[args.name]()
    else:
        raise UsageError(f"unknown model {m!r}; expected one of {list(MODELS)}")
    _emit_measure(mu, args.out, args.sparse)
    return 0


# ---------------------------------------------------------------------------
# transform

TRANSFORMS = ("project", "condition", "field", "symmetrize", "truncate", "rank-rescale", "relabel", "stir", "product")


def cmd_transform(args) -> int:
    mu = _load(args.input, args.backend)
    op = args.op
    if op == "project":
        out = ops.project(mu, _ints(_required(args.keep, "--keep")))
    elif op == "condition":
        out = ops.condition(mu, _assignment(_required(args.assign, "--assign")), drop=args.drop)
    elif op == "field":
        out = ops.apply_field(mu, ExternalField(_numbers(_required(args.weights, "--weights"))))
    elif op == "symmetrize":
        out = ops.symmetrize(mu)
    elif op == "truncate":
        out = ops.truncate(mu, *_band(_required(args.band, "--band")))
    elif op == "rank-rescale":
        out = ops.rank_rescale(mu, _numbers(_required(args.q, "--q")))
    elif op == "relabel":
        out = ops.relabel(mu, _ints(_required(args.perm, "--perm")))
    elif op == "stir":
        schedule = []
        for step in _required(args.schedule, "--schedule").split(";"):
            i, j, e = step.split(",")
            schedule.append(((int(i), int(j)), _number(e)))
        out = ops.stir(mu, schedule)
    elif op == "product":
        out = ops.product(mu, _load(_required(args.other, "--other"), args.backend))
    else:
        raise UsageError(f"unknown op {op!r}; expected one of {list(TRANSFORMS)}")
    _emit_measure(out, args.out, args.sparse)
    return 0


def _required(value, flag: str):
    if value is None:
        raise UsageError(f"missing {flag}")
    return value


# ---------------------------------------------------------------------------
# search and repro


def cmd_search(args) -> int:
    rep = harness.search(args.conjecture, args.n, args.budget, args.seed, args.workers, inner_samples=args.inner_samples)
    _emit_record(rep.to_dict(), args.out, args.json, rep.summary())
    return EXIT_FAILS if rep.found else EXIT_HOLDS


def cmd_repro(args) -> int:
    if args.all:
        ids = list(harness.EXAMPLES)
    elif args.example:
        ids = [args.example]
    else:
        raise UsageError("give --example ID or --all")
    reports = [harness.reproduce_example(e) for e in ids]
    recs = [r.to_dict() for r in reports]
    if args.out:
        with open(args.out, "w") as fp:
            io.write_records(fp, recs)
    if args.json:
        io.write_records(sys.stdout, recs)
    else:
        for r in reports:
            print(r.summary())
    return EXIT_HOLDS if all(r.passed for r in reports) else EXIT_FAILS


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="negdep", description="Negative-dependence checkers for measures on {0,1}^n.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, with_input=True):
        if with_input:
            sp.add_argument("input", help="measure file (JSON)")
        sp.add_argument("--backend", choices=[RATIONAL, FLOAT])
        sp.add_argument("--out", help="write the structured result here")

    c = sub.add_parser("check", help="decide a property of a measure")
    common(c)
    c.add_argument("--property", required=True, help=", ".join(PROPERTIES))
    c.add_argument("--plus", action="store_true", help="search fields and projections for a violation")
    c.add_argument("--samples", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--mode", help="bkrna: upsets_only|all_events; dominates: auto|enumerate|flow")
    c.add_argument("--other", help="second measure for dominates/covers")
    c.add_argument("--json", action="store_true", help="print the structured record instead of a summary")
    c.set_defaults(func=cmd_check)

    b = sub.add_parser("build", help="write a model measure")
    common(b, with_input=False)
    b.add_argument("--model", required=True, help=", ".join(MODELS))
    b.add_argument("--graph", help="graph file (JSON)")
    b.add_argument("--band", help="rank band a:b")
    b.add_argument("--p", help="comma-separated probabilities")
    b.add_argument("--q")
    b.add_argument("--urns", type=int)
    b.add_argument("--balls", type=int)
    b.add_argument("--eta0", help="initial configuration string, e.g. 1100")
    b.add_argument("--t")
    b.add_argument("--rank", help="rank sequence a0,a1,...")
    b.add_argument("--n", type=int)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--name", help="example name for --model example")
    b.add_argument("--eps")
    b.add_argument("--sparse", action="store_true")
    b.set_defaults(func=cmd_build)

    t = sub.add_parser("transform", help="apply a measure operation")
    common(t)
    t.add_argument("--op", required=True, help=", ".join(TRANSFORMS))
    t.add_argument("--keep")
    t.add_argument("--assign", help="pattern like 1*0 or j=v,...")
    t.add_argument("--drop", action="store_true", help="drop conditioned variables")
    t.add_argument("--weights")
    t.add_argument("--band")
    t.add_argument("--q")
    t.add_argument("--perm")
    t.add_argument("--schedule", help="i,j,eps;i,j,eps;...")
    t.add_argument("--other")
    t.add_argument("--sparse", action="store_true")
    t.set_defaults(func=cmd_transform)

    s = sub.add_parser("search", help="seeded counterexample search")
    s.add_argument("--conjecture", required=True, help=", ".join(sorted(harness.SPECS)))
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--budget", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, help="default: NEGDEP_WORKERS or 1")
    s.add_argument("--inner-samples", type=int, default=harness.DEFAULT_INNER_SAMPLES)
    s.add_argument("--out")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_search)

    r = sub.add_parser("repro", help="reproduce the worked examples")
    r.add_argument("--example", choices=list(harness.EXAMPLES))
    r.add_argument("--all", action="store_true")
    r.add_argument("--out")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_repro)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"negdep: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except io.FormatError as exc:
        print(f"negdep: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except json.JSONDecodeError as exc:
        print(f"negdep: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except RankError as exc:
        print(f"negdep: size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except OSError as exc:
        print(f"negdep: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    except ValueError as exc:
        print(f"negdep: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
