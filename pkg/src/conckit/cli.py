"""Command-line surface: evaluate bounds, build distributions, run
simulations, and execute verification suites.

Exit codes: 0 success; 1 usage or parameter error; 2 valid invocation whose
bound request violates preconditions; 3 verification failures present.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .bounds import catalog_index, closest_ids, lookup
from .bounds.result import BoundResult, ExpectationBound
from .bounds.chernoff import SbmQuantile, SuperexpDelta
from .bounds.classic import UnionBounds
from .dist import (
    GeomSumSpec,
    HypergeomSpec,
    ParameterError,
    PoissonBinomialSpec,
    geom_sum_dist,
    pmf_binomial,
    pmf_geometric_truncated,
    pmf_hypergeom,
    pmf_poisson_binomial,
)
from .harness import Report
from .processes import (
    ProcessSpec,
    simulate_cga_neutral,
    simulate_runs,
    summarize_runtimes,
    trace_to_json,
    traces_to_csv,
)
from .suites import SUITE_NAMES, run_suite, run_suite_file

USAGE_ERROR = 1
PRECONDITION_ERROR = 2
VERIFY_FAILED = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _parse_value(raw: str, kind: str):
    if kind.startswith("list[float]"):
        return [float(v) for v in raw.split(",") if v != ""]
    if kind.startswith("int"):
        return int(raw)
    if kind.startswith("bool"):
        return raw.lower() in ("1", "true", "yes")
    if kind.startswith("float"):
        return float(raw)
    return raw


def cmd_bound(args, extra) -> int:
    try:
        entry = lookup(args.id)
    except KeyError:
        hints = closest_ids(args.id)
        sys.stderr.write(f"unknown bound id {args.id!r}\n")
        if hints:
            sys.stderr.write("closest registered ids: " + ", ".join(hints) + "\n")
        return USAGE_ERROR

    kwargs = dict(args.params or {})
    parser = _Parser(prog=f"conckit bound {args.id}", add_help=False)
    for name, kind in entry.params.items():
        required = not kind.endswith("?") and name not in kwargs
        parser.add_argument(f"--{name}", required=required, default=None)
    ns = parser.parse_args(extra)
    for name, kind in entry.params.items():
        raw = getattr(ns, name, None)
        if raw is not None:
            kwargs[name] = _parse_value(raw, kind)
    try:
        result = entry.fn(**kwargs)
    except (ParameterError, ValueError) as exc:
        sys.stderr.write(f"parameter error: {exc}\n")
        return USAGE_ERROR

    if isinstance(result, BoundResult):
        print(f"bound    {result.bound_id}")
        print(f"value    {_fmt(result.value)}{'  (clamped)' if result.clamped else ''}")
        print(f"kind     {result.kind} bound on probability")
        if result.event:
            print(f"event    {result.event}")
        print(f"section  {result.section}")
        print(f"valid    {result.valid}")
        for reason in result.violated_preconditions:
            print(f"  violated: {reason}")
        for key, value in sorted(result.extras.items()):
            print(f"  {key}: {value}")
        return 0 if result.valid else PRECONDITION_ERROR
    if isinstance(result, ExpectationBound):
        print(f"bound    {result.bound_id}")
        print(f"value    {_fmt(result.value)}")
        print(f"kind     {result.kind} bound on expectation" + ("  (vacuous)" if result.vacuous else ""))
        print(f"valid    {result.valid}")
        for reason in result.violated_preconditions:
            print(f"  violated: {reason}")
        return 0 if result.valid else PRECONDITION_ERROR
    if isinstance(result, SuperexpDelta):
        print(f"delta    {_fmt(result.delta) if result.valid else 'n/a'}")
        if result.valid:
            print(f"(e/delta)^delta = {_fmt(result.tail_value)}, target 1/t = {_fmt(result.target)}")
        for reason in result.violated_preconditions:
            print(f"  violated: {reason}")
        return 0 if result.valid else PRECONDITION_ERROR
    if isinstance(result, SbmQuantile):
        print(f"k        {result.k}  (real solution {result.k_real:.6g})" if result.valid else "k        n/a")
        if result.valid:
            print(f"guarantee Pr[flips >= k] <= {_fmt(result.guarantee)}")
        for reason in result.violated_preconditions:
            print(f"  violated: {reason}")
        return 0 if result.valid else PRECONDITION_ERROR
    if isinstance(result, UnionBounds):
        print(f"upper    {_fmt(result.upper)}")
        if result.lower is not None:
            print(f"lower    {_fmt(result.lower)}")
        for reason in result.violated_preconditions:
            print(f"  violated: {reason}")
        return 0 if result.valid else PRECONDITION_ERROR
    if isinstance(result, float):
        print(_fmt(result))
        return 0
    print(result)
    return 0


def cmd_dist(args) -> int:
    # --p doubles as a scalar and, for the sum families, a comma list
    probs = args.probs
    p_scalar = None
    if "," in args.p:
        probs = probs or [float(v) for v in args.p.split(",")]
    else:
        p_scalar = float(args.p)
    try:
        if args.family == "binomial":
            dist = pmf_binomial(args.n, p_scalar)
            label = f"binomial(n={args.n}, p={p_scalar:g})"
        elif args.family == "poisson_binomial":
            dist = pmf_poisson_binomial(PoissonBinomialSpec(tuple(probs)))
            label = f"poisson_binomial(n={len(probs)})"
        elif args.family == "hypergeom":
            dist = pmf_hypergeom(HypergeomSpec(args.N, args.n, args.m))
            label = f"hypergeom(N={args.N}, n={args.n}, m={args.m})"
        elif args.family == "geometric":
            dist = pmf_geometric_truncated(p_scalar, args.eps)
            label = f"geometric(p={p_scalar:g}, eps={args.eps:g})"
        else:  # geomsum
            dist = geom_sum_dist(GeomSumSpec(tuple(probs)), args.eps)
            label = f"geomsum(n={len(probs)}, eps={args.eps:g})"
    except (ParameterError, TypeError) as exc:
        sys.stderr.write(f"parameter error: {exc}\n")
        return USAGE_ERROR

    print(label)
    print(f"mean       {_fmt(dist.mean())}")
    print(f"variance   {_fmt(dist.variance())}")
    if dist.tail_deficit:
        print(f"deficit    {_fmt(dist.tail_deficit)}")
    if args.tail_ge is not None:
        print(f"Pr[X >= {args.tail_ge:g}] = {_fmt(dist.upper_tail(args.tail_ge))}")
    if args.tail_le is not None:
        print(f"Pr[X <= {args.tail_le:g}] = {_fmt(dist.lower_tail(args.tail_le))}")
    if args.out:
        text = dist.to_csv() if args.format == "csv" else dist.to_json()
        _emit(text, args.out)
        print(f"wrote {args.format} to {args.out}")
    return 0


def cmd_simulate(args) -> int:
    if args.seed is None:
        sys.stderr.write("simulate is stochastic: --seed is required\n")
        return USAGE_ERROR
    if args.process == "cga":
        if args.K is None or args.T is None:
            sys.stderr.write("cga needs --K and --T\n")
            return USAGE_ERROR
        seeds = np.random.SeedSequence(args.seed).spawn(args.runs)
        hits = 0
        for i in range(args.runs):
            path = simulate_cga_neutral(args.K, args.T, args.seed, _seed_seq=seeds[i])
            hits += path.converged
        freq = hits / args.runs
        bound = 2.0 * math.exp(-args.K**2 / (32.0 * args.T))
        print(f"cga neutral bit: K={args.K} T={args.T} runs={args.runs}")
        print(f"convergence frequency {_fmt(freq)}  bound {_fmt(min(1.0, bound))}")
        return 0

    heavy_default_horizon = {
        "coupon": 10**7,
        "rls": 10**6,
        "oea": 10**6,
        "oea_mu": 10**6,
        "blind": None,
        "unbiased_search": None,
    }
    horizon = args.horizon
    if horizon is None:
        horizon = heavy_default_horizon[args.process]
        if horizon is None:
            needed = min(10**7, 20 * (2 ** min(args.n, 30)))
            sys.stderr.write(
                "blind search on {} bits needs an explicit --horizon (suggestion: {})\n".format(args.n, needed)
            )
            return USAGE_ERROR
    try:
        spec = ProcessSpec(
            kind=args.process,
            n=args.n,
            objective=args.objective,
            rate=args.rate,
            mu=args.mu,
            horizon=horizon,
            seed=args.seed,
            initial_stake="binomial_half" if args.binomial_stake else "none",
            checkpoint_every=args.checkpoint_every,
        )
    except ParameterError as exc:
        sys.stderr.write(f"parameter error: {exc}\n")
        return USAGE_ERROR
    traces = simulate_runs(spec, args.runs, jobs=args.jobs)
    if args.replay is not None:
        if not (0 <= args.replay < len(traces)):
            sys.stderr.write("replay index out of range\n")
            return USAGE_ERROR
        print(json.dumps(trace_to_json(traces[args.replay]), indent=2))
        return 0
    summary = summarize_runtimes(traces)
    print(f"{args.process} on {args.objective}, n={args.n}, runs={args.runs}, seed={args.seed}")
    for key in ("runs", "censored", "mean", "stderr", "median", "q90", "q99"):
        if key in summary:
            v = summary[key]
            print(f"{key:9s}{_fmt(v) if isinstance(v, float) else v}")
    if args.out:
        _emit(traces_to_csv(traces), args.out)
        print(f"wrote traces to {args.out}")
    return 0


def cmd_verify(args) -> int:
    try:
        if args.suite_file:
            with open(args.suite_file, "r", encoding="utf-8") as fh:
                report = run_suite_file(fh.read(), jobs=args.jobs)
        else:
            report = run_suite(args.suite, seed=args.seed, jobs=args.jobs)
    except FileNotFoundError as exc:
        sys.stderr.write(f"suite file not found: {exc}\n")
        return USAGE_ERROR
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"suite error: {exc}\n")
        return USAGE_ERROR
    report.metadata.update({"seed": args.seed, "jobs": args.jobs, "format": args.format})
    summary = report.summary()
    print(
        f"suite {report.name}: {summary['records']} records, "
        f"{summary['pass']} pass, {summary['fail']} fail, "
        f"{summary['inconclusive']} inconclusive, {summary['inapplicable']} inapplicable"
    )
    for r in report.failures[:20]:
        print(f"  FAIL {r.cell_id} {r.bound_id}: bound {_fmt(r.bound)} vs oracle {_fmt(r.oracle)}")
    if args.out:
        _emit(report.emit(args.format), args.out)
        print(f"wrote {args.format} report to {args.out}")
    return VERIFY_FAILED if report.failures else 0


def cmd_report(args) -> int:
    with open(args.input, "r", encoding="utf-8") as fh:
        report = Report.from_json(fh.read())
    _emit(report.emit(args.format), args.out)
    return 0


def cmd_catalog(args) -> int:
    _emit(catalog_index(), args.out)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="conckit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"conckit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bound = sub.add_parser("bound", help="evaluate a registered bound by id")
    p_bound.add_argument("id")
    p_bound.set_defaults(params=None)

    p_dist = sub.add_parser("dist", help="build a distribution and print its summary")
    p_dist.add_argument("family", choices=("binomial", "poisson_binomial", "hypergeom", "geometric", "geomsum"))
    p_dist.add_argument("--n", type=int, default=0)
    p_dist.add_argument("--N", type=int, default=0)
    p_dist.add_argument("--m", type=int, default=0)
    p_dist.add_argument("--p", type=str, default="0.5", help="probability, or a comma list for poisson_binomial/geomsum")
    p_dist.add_argument("--probs", type=lambda s: [float(v) for v in s.split(",")], default=None)
    p_dist.add_argument("--eps", type=float, default=1e-9)
    p_dist.add_argument("--tail-ge", dest="tail_ge", type=float, default=None)
    p_dist.add_argument("--tail-le", dest="tail_le", type=float, default=None)
    p_dist.add_argument("--format", choices=("json", "csv"), default="json")
    p_dist.add_argument("--out", default=None)

    p_sim = sub.add_parser("simulate", help="run seeded process simulations")
    p_sim.add_argument("process", choices=("coupon", "rls", "oea", "oea_mu", "blind", "unbiased_search", "cga"))
    p_sim.add_argument("--n", type=int, default=1)
    p_sim.add_argument("--objective", choices=("onemax", "needle", "binval", "random_weights"), default="onemax")
    p_sim.add_argument("--rate", type=float, default=None)
    p_sim.add_argument("--mu", type=int, default=1)
    p_sim.add_argument("--K", type=int, default=None)
    p_sim.add_argument("--T", type=int, default=None)
    p_sim.add_argument("--runs", type=int, default=1000)
    p_sim.add_argument("--horizon", type=int, default=None)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--jobs", type=int, default=1)
    p_sim.add_argument("--binomial-stake", action="store_true")
    p_sim.add_argument("--checkpoint-every", type=int, default=0)
    p_sim.add_argument("--replay", type=int, default=None)
    p_sim.add_argument("--out", default=None)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", nargs="?", default="default")
    p_verify.add_argument("--suite", dest="suite_file", default=None, help="JSON suite file")
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--jobs", type=int, default=1)
    p_verify.add_argument("--format", choices=("json", "csv", "markdown"), default="json")
    p_verify.add_argument("--out", default=None)

    p_report = sub.add_parser("report", help="re-render a JSON report")
    p_report.add_argument("--in", dest="input", required=True)
    p_report.add_argument("--format", choices=("json", "csv", "markdown"), default="markdown")
    p_report.add_argument("--out", default=None)

    p_catalog = sub.add_parser("catalog", help="print the machine-readable bound index")
    p_catalog.add_argument("--out", default=None)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # `bound` forwards unknown --flags to the bound's own parameter schema
    if argv and argv[0] == "bound":
        args, extra = parser.parse_known_args(argv)
        return cmd_bound(args, extra)
    args = parser.parse_args(argv)
    if args.command == "dist":
        return cmd_dist(args)
    if args.command == "simulate":
        return cmd_simulate(args)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "report":
        return cmd_report(args)
    if args.command == "catalog":
        return cmd_catalog(args)
    parser.error(f"unknown command {args.command!r}")
    return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
