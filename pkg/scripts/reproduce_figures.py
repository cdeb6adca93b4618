#!/usr/bin/env python3
"""Regenerate the three bundled comparison figures and their exponent
reports into an output directory.

Usage:
    python scripts/reproduce_figures.py [--out out] [--grid-points N]

Each configuration produces a sweep CSV, an SVG chart and a JSON report;
a one-line comparison per configuration is printed at the end.
"""

import argparse
import json
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from jsccexp.cli import main as cli_main  # noqa: E402

CONFIGS = ["fig1", "fig2", "fig3", "binary_demo"]


def run(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--grid-points", type=int, default=None,
                    help="override the rho grid size (speeds things up)")
    args = ap.parse_args(argv)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    extra = []
    if args.grid_points:
        extra += ["--grid-points", str(args.grid_points)]

    summaries = []
    for name in CONFIGS:
        config = ROOT / "configs" / f"{name}.toml"
        report = out_dir / f"{name}.report.json"
        print(f"=== {name} ===")
        t0 = time.time()
        rc = cli_main(["exponent", str(config), "--report", str(report)] + extra)
        assert rc == 0, f"exponent failed for {name}"
        if name != "binary_demo":
            rc = cli_main([
                "sweep", str(config),
                "--out", str(out_dir / f"{name}.csv"),
                "--svg", str(out_dir / f"{name}.svg"),
            ] + extra)
            assert rc == 0, f"sweep failed for {name}"
        payload = json.loads(report.read_text())
        two = payload["two_class"]["value"]
        levels = payload["fixed_class_values"]
        single = max(levels) if levels else payload["single_class"]["value"]
        summaries.append((name, two, single, time.time() - t0))
        print()

    print("configuration        two-class    best single   verdict")
    for name, two, single, dt in summaries:
        if two > single + 1e-4:
            verdict = "partitioning wins"
        elif single > two + 1e-4:
            verdict = "single-class wins"
        else:
            verdict = "coincide"
        print(f"{name:<20} {two:>11.6f}  {single:>11.6f}   {verdict}  ({dt:.1f}s)")


if __name__ == "__main__":
    run()
