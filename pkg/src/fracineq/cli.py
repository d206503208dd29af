"""Command line entry point.

    fracineq eval       --theorem T1 --f power:1 --a 0 --b 1 --s 1 --alpha 2 --variant both
    fracineq sweep      --config sweep.json --out report.json --csv report.csv
    fracineq sharpness  --theorem e13 --f power:s --grid s=0.25,0.5,0.75
    fracineq convexity  --f power:0.5 --class s-convex --s 0.5 --a 0 --b 2

Exit status: 0 success, 1 an as-stated bound was violated under --strict,
2 usage, configuration or runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from .bounds import AS_STATED, THEOREMS, VARIANTS, evaluate
from .convexity import DEFAULT_GRID_N, DEFAULT_RANDOM, check_convex, check_m_convex, check_s_convex, parse_funcspec
from .fracint import Interval
from .harness import ConfigError, SweepConfig, format_summary, run_sweep, sharpness_search, write_outputs
from .quadrature import ConvergenceError, Tolerance

EXIT_OK, EXIT_VIOLATED, EXIT_ERROR = 0, 1, 2


def _tolerance(args) -> Tolerance:
    return Tolerance(abs_tol=args.tol_abs, rel_tol=args.tol_rel)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol-abs", type=float, default=1e-10)
    p.add_argument("--tol-rel", type=float, default=1e-10)
    p.add_argument("--strict", action="store_true", help="exit 1 if an as-stated bound is violated")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracineq", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate one theorem at one parameter point")
    ev.add_argument("--theorem", required=True, choices=sorted(THEOREMS))
    ev.add_argument("--f", required=True, help="function spec, e.g. power:0.5")
    ev.add_argument("--a", type=float, required=True)
    ev.add_argument("--b", type=float, required=True)
    for name in ("alpha", "s", "m", "q"):
        ev.add_argument(f"--{name}", type=float)
    ev.add_argument("--variant", choices=list(VARIANTS) + ["both"], default="both")
    ev.add_argument("--json", action="store_true", help="print the report as JSON")
    _add_common(ev)

    sw = sub.add_parser("sweep", help="run a configured parameter sweep")
    sw.add_argument("--config", help="JSON sweep config; defaults are used when omitted")
    sw.add_argument("--out", help="JSON report path")
    sw.add_argument("--csv", help="CSV report path")
    sw.add_argument("--workers", type=int)
    sw.add_argument("--seed", type=int)
    sw.add_argument("--tol-abs", type=float)
    sw.add_argument("--tol-rel", type=float)
    sw.add_argument("--strict", action="store_true")

    sh = sub.add_parser("sharpness", help="minimise a right-hand margin over a grid")
    sh.add_argument("--theorem", required=True, choices=sorted(THEOREMS))
    sh.add_argument("--f", required=True, help="function template, e.g. power:s")
    sh.add_argument("--grid", action="append", default=[], metavar="NAME=v1,v2,...")
    sh.add_argument("--a", type=float, default=0.0)
    sh.add_argument("--b", type=float, default=1.0)
    for name in ("alpha", "s", "m", "q"):
        sh.add_argument(f"--{name}", type=float, help="fixed value when not on the grid")
    sh.add_argument("--variant", choices=VARIANTS, default="proof-consistent")
    _add_common(sh)

    cv = sub.add_parser("convexity", help="empirically certify a convexity class")
    cv.add_argument("--f", required=True)
    cv.add_argument("--class", dest="klass", required=True, choices=["convex", "s-convex", "m-convex"])
    cv.add_argument("--s", type=float)
    cv.add_argument("--m", type=float)
    cv.add_argument("--a", type=float, required=True)
    cv.add_argument("--b", type=float, required=True)
    cv.add_argument("--grid-n", type=int, default=DEFAULT_GRID_N)
    cv.add_argument("--n-random", type=int, default=DEFAULT_RANDOM)
    cv.add_argument("--seed", type=int, default=0)
    cv.add_argument("--strict", action="store_true", help="exit 1 when a counterexample is found")
    return parser


def _print_report(report, variants) -> None:
    inputs = ", ".join(f"{k}={v}" for k, v in report.inputs.items())
    print(f"{report.theorem_id}: {inputs}")
    for name, value in report.terms.items():
        print(f"  {name:<22} {value:.15g}")
    for variant in variants:
        r = report.with_variant(variant)
        margins = ", ".join(f"{k}={v:.6g}" for k, v in r.margins.items())
        print(f"  [{variant}] margins: {margins} -> {r.verdict}")


def _cmd_eval(args) -> int:
    params = {n: getattr(args, n) for n in ("alpha", "s", "m", "q") if getattr(args, n) is not None}
    variants = list(VARIANTS) if args.variant == "both" else [args.variant]
    report = evaluate(args.theorem, args.f, args.a, args.b, params, variants[0], _tolerance(args))
    if args.json:
        print(json.dumps([report.with_variant(v).to_dict() for v in variants], indent=2))
    else:
        _print_report(report, variants)
    if args.strict and report.with_variant(AS_STATED).verdict == "violated":
        return EXIT_VIOLATED
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = SweepConfig.load(args.config) if args.config else SweepConfig()
    for attr, name in (("workers", "workers"), ("seed", "seed"), ("tol_abs", "abs_tol"), ("tol_rel", "rel_tol")):
        value = getattr(args, attr)
        if value is not None:
            setattr(cfg, name, value)
    cfg.out_json = args.out or cfg.out_json
    cfg.out_csv = args.csv or cfg.out_csv
    started = time.perf_counter()
    report = run_sweep(cfg)
    write_outputs(report, cfg.out_json, cfg.out_csv)
    print(format_summary(report))
    print(f"wall time {time.perf_counter() - started:.2f} s")
    for path in (cfg.out_json, cfg.out_csv):
        if path:
            print(f"wrote {path}")
    stated_violations = sum(e["violated"] for k, e in report.summary.items() if k.endswith("/" + AS_STATED))
    if args.strict and stated_violations:
        return EXIT_VIOLATED
    return EXIT_OK


def _parse_grid(items) -> dict:
    grid = {}
    for item in items:
        name, sep, values = item.partition("=")
        if not sep or not values:
            raise ConfigError(f"bad --grid entry {item!r}; expected NAME=v1,v2,...")
        grid[name.strip()] = [float(v) for v in values.split(",")]
    return grid


def _cmd_sharpness(args) -> int:
    grid = _parse_grid(args.grid)
    fixed = {n: getattr(args, n) for n in ("alpha", "s", "m", "q") if getattr(args, n) is not None}
    rec = sharpness_search(args.theorem, args.f, grid, (args.a, args.b), args.variant, fixed, _tolerance(args))
    print(f"{rec.theorem_id} [{rec.variant}] family {rec.family} on [{args.a}, {args.b}]")
    for pt in rec.points:
        params = ", ".join(f"{k}={v:g}" for k, v in pt["params"].items())
        print(f"  {params:<30} {pt['f']:<20} rhs margin {pt['margin']:.6g}")
    argmin = ", ".join(f"{k}={v:g}" for k, v in rec.argmin.items())
    print(f"minimal rhs margin {rec.min_margin:.6g} at {argmin}")
    return EXIT_OK


def _cmd_convexity(args) -> int:
    f = parse_funcspec(args.f)
    dom = Interval(args.a, args.b)
    if args.klass == "convex":
        verdict = check_convex(f, dom, args.grid_n, args.seed, args.n_random)
    elif args.klass == "s-convex":
        if args.s is None:
            raise ConfigError("--s is required for s-convex")
        verdict = check_s_convex(f, args.s, dom, args.grid_n, args.seed, args.n_random)
    else:
        if args.m is None:
            raise ConfigError("--m is required for m-convex")
        verdict = check_m_convex(f, args.m, dom, args.grid_n, args.seed, args.n_random)
    print(verdict.describe(args.grid_n, args.n_random))
    if args.strict and not verdict.holds:
        return EXIT_VIOLATED
    return EXIT_OK


_COMMANDS = {"eval": _cmd_eval, "sweep": _cmd_sweep, "sharpness": _cmd_sharpness, "convexity": _cmd_convexity}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, ArithmeticError, ConvergenceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
