"""Command-line front end.

    screenoff demo counterexample [--u-star Q] [--json]
    screenoff demo simpson [--search] [--json]
    screenoff check MODEL.json --condition so1 [--json]
    screenoff sweep [--max-points N] [--outcomes K] [--denominator D]
                    [--seed S --samples N] [--variants so1,so2] [--output FILE]
    screenoff regions --op complement "u>=0 & v<=0 & u<=1"

Exit codes: 0 success / condition holds, 1 condition violated or sweep
discrepancy, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import minkowski as mk
from .demos import counterexample, format_counterexample, simpson_model, simpson_numbers
from .modelfile import ModelFileError, load_model
from .regionexpr import RegionParseError, format_region, parse_region
from .search import CapExceeded, NotFound, SweepConfig, equivalence_sweep, find_simpson
from .stochastic import VARIANTS, ModelError, check_condition, fraction_str


def _emit(text: str, path: str | None = None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_demo_counterexample(args) -> int:
    try:
        result = format_counterexample(counterexample(Fraction(args.u_star)))
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: invalid u*: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(result, indent=2))
    else:
        width = max(len(k) for k in result)
        for key in ("O", "O'", "(O')'", "J-((O')')", "J-((O')') \\ (O')'"):
            print(f"{key:<{width}} = {result[key]}")
        print(f"(O')' contains its own past: {'yes' if result['contains_own_past'] else 'no'}")
        verdict = "FINITE" if result["causally_finite"] else "INFINITE"
        print(f"verdict: O is causally {verdict} under the RSP definition")
    return 0 if result["matches"] else 1


def cmd_demo_simpson(args) -> int:
    if args.search:
        try:
            w = find_simpson()
        except NotFound as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        data = w.to_dict()
        if args.json:
            print(json.dumps(data, indent=2))
        else:
            print(f"found after {data['models_searched']} models")
            print(f"site: points {data['model']['points']}, relations {data['model']['relations']}")
            print(f"regions A={data['region_a']} B={data['region_b']} mutual past={data['past_region']}")
            print(f"event A = {data['event_a']}")
            print(f"event B = {data['event_b']}")
            print(f"full specification F = {data['full_spec']}")
            print(f"correlation(A, B)     = {data['correlation_unconditional']}")
            print(f"correlation(A, B | F) = {data['correlation_given_spec']}")
        return 0
    m, ev = simpson_model()
    nums = simpson_numbers()
    data = {
        "outcomes": list(m.outcomes),
        "measure": {w: fraction_str(x) for w, x in m.measure.items()},
        "partitions": {p: [sorted(b) for b in blocks] for p, blocks in zip(m.site.points, m.partitions)},
        "A": sorted(ev["A"]),
        "B": sorted(ev["B"]),
        "F": sorted(ev["F"]),
        "correlation_unconditional": fraction_str(nums["unconditional"]),
        "correlation_given_F": fraction_str(nums["given_F"]),
    }
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print("site: x precedes a and b; a, b spacelike")
        print(f"outcomes {data['outcomes']}, each with probability 1/4")
        for p, blocks in data["partitions"].items():
            print(f"  partition at {p}: {blocks}")
        print(f"A = {data['A']} (decided at a), B = {data['B']} (decided at b), F = {data['F']} (full spec of x)")
        print(f"correlation(A, B)     = {data['correlation_unconditional']}")
        print(f"correlation(A, B | F) = {data['correlation_given_F']}")
    return 0


def cmd_check(args) -> int:
    try:
        m, _ = load_model(args.model)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ModelFileError, ModelError) as exc:
        print(f"error: {args.model}: {exc}", file=sys.stderr)
        return 2
    report = check_condition(m, args.condition)
    if args.json:
        print(json.dumps(report.to_dict(args.max_violations), indent=2))
    else:
        status = "holds" if report.holds else "VIOLATED"
        print(f"{report.condition}: {status} "
              f"({report.pairs_examined} region pairs, {report.specs_examined} full specifications)")
        for v in report.violations[: args.max_violations]:
            print(f"  A-region {list(v.region_a)} event {list(v.event_a)}; "
                  f"B-region {list(v.region_b)} event {list(v.event_b)}; "
                  f"given {list(v.full_spec)} on {list(v.spec_region)}: "
                  f"P(A&B|F)={fraction_str(v.p_joint)} vs P(A|F)P(B|F)={fraction_str(v.p_product)}")
        hidden = len(report.violations) - args.max_violations
        if hidden > 0:
            print(f"  ... {hidden} more")
    return 0 if report.holds else 1


def cmd_sweep(args) -> int:
    variants = tuple(v for v in args.variants.split(",") if v)
    config = SweepConfig(
        max_points=args.max_points,
        outcomes_per_point=args.outcomes,
        denominator=None if args.samples and args.denominator is None else (args.denominator or 2),
        seed=args.seed,
        samples=args.samples,
        random_points=args.random_points,
        variants=variants,
    )
    try:
        report = equivalence_sweep(config, workers=args.workers)
    except (CapExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report.to_json(timing=args.timing), args.output)
    if report.discrepancies:
        print(f"SO1/SO2 DISCREPANCY in {len(report.discrepancies)} models", file=sys.stderr)
        return 1
    return 0


def cmd_regions(args) -> int:
    try:
        region = parse_region(args.expr)
    except RegionParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.op == "rsp-finite":
        print("true" if not mk.is_causally_infinite_rsp(region) else "false")
    elif args.op == "normalize":
        print(format_region(region))
    else:
        print(format_region(mk.OPERATORS[args.op](region)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="screenoff", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    demo = sub.add_parser("demo", help="worked examples")
    demos = demo.add_subparsers(dest="demo", required=True)
    ce = demos.add_parser("counterexample", help="causal-finiteness counterexample in 2D Minkowski space")
    ce.add_argument("--u-star", default="1", help="rational upper u bound of O (default 1)")
    ce.add_argument("--json", action="store_true")
    ce.set_defaults(func=cmd_demo_counterexample)
    si = demos.add_parser("simpson", help="uncorrelated events correlated by conditioning on the past")
    si.add_argument("--search", action="store_true", help="search small models for an instance")
    si.add_argument("--json", action="store_true")
    si.set_defaults(func=cmd_demo_simpson)

    check = sub.add_parser("check", help="check a screening-off condition on a model file")
    check.add_argument("model")
    check.add_argument("--condition", choices=sorted(VARIANTS), default="so1")
    check.add_argument("--json", action="store_true")
    check.add_argument("--max-violations", type=int, default=20)
    check.set_defaults(func=cmd_check)

    sweep = sub.add_parser("sweep", help="compare conditions over enumerated models")
    sweep.add_argument("--max-points", type=int, default=3)
    sweep.add_argument("--outcomes", type=int, default=2)
    sweep.add_argument("--denominator", type=int, default=None,
                       help="exhaustive measures with this denominator (default 2 unless --samples)")
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--samples", type=int, default=0, help="random models to draw")
    sweep.add_argument("--random-points", type=int, default=None,
                       help="poset size for random models (default --max-points)")
    sweep.add_argument("--variants", default="so1,so2,finite-so1,finite-so2,so2w")
    sweep.add_argument("--workers", type=int, default=1)
    sweep.add_argument("--output", default=None)
    sweep.add_argument("--timing", action="store_true", help="include wall time in the report")
    sweep.set_defaults(func=cmd_sweep)

    regions = sub.add_parser("regions", help="Minkowski region calculator")
    regions.add_argument("--op", required=True,
                         choices=["past", "future", "complement", "closure", "rsp-finite", "normalize"])
    regions.add_argument("expr")
    regions.set_defaults(func=cmd_regions)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
