"""Command-line surface.

Subcommands:
    exponent <config>   single-class, two-class and baseline exponents
    sweep    <config>   rho-sweep CSV (+ optional SVG) for a fixed pair
    optimize <config>   full search over two-class pairs
    verify              randomized property suites against oracles

Exit codes: 0 success, 1 config error, 2 enumeration budget exceeded,
3 property-suite failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .configio import ConfigBundle, ConfigError, load_config, override_bundle
from .envelope import ExponentCurve, upper_concave_envelope
from .kernel import (
    bhattacharyya_matrix,
    expurgated_exponent,
    set_max_exponent_grid,
    source_exponent,
)
from .partition import EnumerationBudgetExceeded
from .solver import (
    ExponentReport,
    baseline_random_coding,
    single_class_exponent,
    single_class_fixed_q,
    two_class_exponent_fixed_pair,
    two_class_exponent_optimal,
)
from .svgchart import Level, Series, write_line_chart
from .verify import SUITES, run_suites


def _fmt(x: float | None, digits: int = 6) -> str:
    if x is None:
        return "n/a"
    if math.isinf(x):
        return "inf"
    return f"{x:.{digits}g}"


def _jf(x):
    if x is None:
        return None
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def _write_report(report: ExponentReport, bundle: ConfigBundle, out_path: Path):
    payload = report.to_dict()
    payload["config"] = bundle.path
    payload["grid"] = {
        "rho_min": bundle.grid.rho_min,
        "rho_max": bundle.grid.rho_max,
        "num_points": bundle.grid.num_points,
        "spacing": bundle.grid.spacing,
    }
    out_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _print_report(report: ExponentReport, two_class_kind: str):
    print(f"single-class (optimal): value={_fmt(report.single_class_value)}"
          f"  rho*={_fmt(report.single_class_rho)}"
          f"  Q*=({', '.join(_fmt(v) for v in report.single_class_q.as_tuple())})")
    mixing = "no mixing" if report.boundary_flags.get("no_mixing") else "mixing"
    print(f"two-class ({two_class_kind}): value={_fmt(report.two_class_value)}"
          f"  rho*={_fmt(report.two_class_rho)}"
          f"  gamma0={_fmt(report.gamma0)} [{mixing}]")
    if report.fixed_class_values is not None:
        levels = "  ".join(
            f"Q{i + 1}={_fmt(v)}" for i, v in enumerate(report.fixed_class_values)
        )
        print(f"fixed-Q single-class levels: {levels}")
    if report.baseline_random_coding is not None:
        print(f"baseline (random coding): {_fmt(report.baseline_random_coding)}")
    for name, flag in report.boundary_flags.items():
        if flag and name != "no_mixing":
            print(f"  flag: {name}")


def _bundle_from_args(args) -> ConfigBundle:
    bundle = load_config(args.config)
    return override_bundle(
        bundle,
        rho_max=args.rho_max,
        grid_points=args.grid_points,
        value_tol=args.tol,
        starts=getattr(args, "starts", None),
        seed=getattr(args, "seed", None),
    )


def _baseline_or_none(bundle: ConfigBundle, args):
    enabled = bundle.baseline_enabled if args.baseline is None else args.baseline
    if not enabled:
        return None
    return baseline_random_coding(
        bundle.problem, bundle.solver, num_points=bundle.baseline_points
    )


def cmd_exponent(args) -> int:
    bundle = _bundle_from_args(args)
    problem, grid, cfg = bundle.problem, bundle.grid, bundle.solver
    db = bhattacharyya_matrix(problem.channel)

    if bundle.distributions is not None:
        if len(bundle.distributions) != 2:
            raise ConfigError(
                bundle.path,
                f"two-class coding needs exactly 2 distributions, got {len(bundle.distributions)}",
            )
        sc = single_class_exponent(problem, grid, cfg, db)
        two = two_class_exponent_fixed_pair(bundle.distributions, problem, grid, cfg, db)
        levels = tuple(
            single_class_fixed_q(q, problem, grid, cfg, db).value
            for q in bundle.distributions
        )
        report = ExponentReport(
            single_class_value=sc.value,
            single_class_q=sc.q,
            single_class_rho=sc.rho_star,
            two_class_value=two.value,
            two_class_pair=two.pair,
            two_class_rho=two.rho_star,
            gamma0=two.gamma,
            gamma_prime=two.gamma_prime,
            baseline_random_coding=_baseline_or_none(bundle, args),
            boundary_flags={
                "single_class_boundary": sc.boundary_attained,
                "two_class_boundary": two.boundary_attained,
                "single_class_infinite": sc.is_infinite,
                "two_class_infinite": two.is_infinite,
                "no_mixing": two.no_mixing,
            },
            fixed_class_values=levels,
        )
        kind = "fixed pair"
    else:
        report = two_class_exponent_optimal(
            problem, grid, cfg, db,
            include_baseline=(bundle.baseline_enabled if args.baseline is None else args.baseline),
        )
        kind = "optimal pair"

    out_path = Path(args.report) if args.report else Path(Path(bundle.path).stem + ".report.json")
    _write_report(report, bundle, out_path)
    _print_report(report, kind)
    print(f"report written to {out_path}")
    return 0


def cmd_sweep(args) -> int:
    bundle = _bundle_from_args(args)
    if bundle.distributions is None or len(bundle.distributions) != 2:
        raise ConfigError(bundle.path, "sweep needs [distributions] with exactly 2 members")
    problem, grid, cfg = bundle.problem, bundle.grid, bundle.solver
    db = bhattacharyya_matrix(problem.channel)
    pair = bundle.distributions
    t = problem.rate_t

    rho = grid.values()
    es = np.array([source_exponent(float(r), problem.source) for r in rho])
    setmax = set_max_exponent_grid(pair, rho, db)
    hull = upper_concave_envelope(ExponentCurve(rho, setmax, label="set-max"))
    objective = hull.hull_values - t * es
    sc_curves = [
        np.array([expurgated_exponent(q, float(r), db) for r in rho]) - t * es
        for q in pair
    ]

    two = two_class_exponent_fixed_pair(pair, problem, grid, cfg, db)
    levels = [single_class_fixed_q(q, problem, grid, cfg, db).value for q in pair]
    best_single = max(levels)
    baseline = _baseline_or_none(bundle, args)

    out = Path(args.out)
    with open(out, "w", newline="\n") as fh:
        fh.write("# jsccexp sweep\n")
        fh.write(f"# config {bundle.path}\n")
        fh.write(f"# level two_class_value {two.value:.17g}\n")
        fh.write(f"# level best_single_class_value {best_single:.17g}\n")
        if baseline is not None:
            fh.write(f"# level baseline_random_coding {baseline:.17g}\n")
        cols = ["rho", "set_max", "hull", "objective",
                "sc_objective_q1", "sc_objective_q2", "baseline_level"]
        fh.write(",".join(cols) + "\n")
        for i in range(rho.size):
            row = [rho[i], setmax[i], hull.hull_values[i], objective[i],
                   sc_curves[0][i], sc_curves[1][i],
                   baseline if baseline is not None else math.nan]
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    print(f"sweep written to {out}")

    if args.svg:
        series = [
            Series("two-class objective (envelope)", objective.tolist(), "solid"),
            Series("single-class objective Q1", sc_curves[0].tolist(), "solid"),
            Series("single-class objective Q2", sc_curves[1].tolist(), "solid"),
        ]
        lv = [
            Level("two-class exponent", two.value, "dash"),
            Level("best single-class exponent", best_single, "dash"),
        ]
        if baseline is not None:
            lv.append(Level("baseline (random coding)", baseline, "dashdot"))
        write_line_chart(
            args.svg, rho.tolist(), series, lv,
            title="expurgated exponent objectives", x_label="rho",
        )
        print(f"chart written to {args.svg}")
    return 0


def cmd_optimize(args) -> int:
    bundle = _bundle_from_args(args)
    report = two_class_exponent_optimal(
        bundle.problem, bundle.grid, bundle.solver,
        include_baseline=(bundle.baseline_enabled if args.baseline is None else args.baseline),
    )
    out_path = Path(args.report) if args.report else Path(Path(bundle.path).stem + ".optimize.json")
    _write_report(report, bundle, out_path)
    _print_report(report, "optimal pair")
    pair = " vs ".join(
        "(" + ", ".join(_fmt(v) for v in q.as_tuple()) + ")" for q in report.two_class_pair
    )
    print(f"best pair: {pair}")
    print(f"report written to {out_path}")
    return 0


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = run_suites(names, seed=args.seed)
    failed = [r for r in results if not r.ok]
    for r in results:
        print(r.summary())
    if failed:
        out = Path(args.out) if args.out else Path("counterexample.json")
        first = failed[0]
        out.write_text(json.dumps(
            {"suite": first.name, "counterexample": first.failures[0]},
            indent=2, sort_keys=True, default=str,
        ) + "\n")
        print(f"first counterexample written to {out}", file=sys.stderr)
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jsccexp",
        description="Expurgated and random-coding exponents for joint "
                    "source-channel coding over discrete memoryless channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_config=True):
        if with_config:
            p.add_argument("config", help="problem config (TOML)")
        p.add_argument("--rho-max", type=float, default=None, help="override grid rho_max")
        p.add_argument("--grid-points", type=int, default=None, help="override grid size")
        p.add_argument("--tol", type=float, default=None, help="override solver value tolerance")
        p.add_argument("--seed", type=int, default=None, help="override solver seed")
        p.add_argument("--baseline", action=argparse.BooleanOptionalAction, default=None,
                       help="force the random-coding baseline on/off")

    p_exp = sub.add_parser("exponent", help="compute the exponents for one problem")
    add_common(p_exp)
    p_exp.add_argument("--report", default=None, help="report output path (JSON)")
    p_exp.set_defaults(func=cmd_exponent)

    p_sweep = sub.add_parser("sweep", help="rho-sweep CSV (and optional SVG chart)")
    add_common(p_sweep)
    p_sweep.add_argument("--out", required=True, help="CSV output path")
    p_sweep.add_argument("--svg", default=None, help="SVG output path")
    p_sweep.set_defaults(func=cmd_sweep)

    p_opt = sub.add_parser("optimize", help="search over two-class distribution pairs")
    add_common(p_opt)
    p_opt.add_argument("--starts", type=int, default=None, help="number of search starts")
    p_opt.add_argument("--report", default=None, help="report output path (JSON)")
    p_opt.set_defaults(func=cmd_optimize)

    p_ver = sub.add_parser("verify", help="run randomized property suites")
    p_ver.add_argument("--suite", default="all", choices=["all", *SUITES])
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--out", default=None, help="counterexample output path")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EnumerationBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
