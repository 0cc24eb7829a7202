"""Command-line entry points.

Exit codes: 0 success, 2 configuration error, 3 simulation divergence,
4 allocation failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .actuation import forward_wrench, mix, sample_feasible_wrenches
from .errors import (
    AllocationError,
    ConfigError,
    DivergenceError,
    ReferenceSingularityError,
)
from .rotor_config import RotorConfigQuery, generate_config_table, write_config_table_csv
from .scenarios import load_config, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_ALLOCATION = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coaxvane",
        description=(
            "Flight-dynamics simulator and dual-mode control stack for a "
            "fully-actuated coaxial vehicle with thrust-vane control surfaces."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario config")
    sim.add_argument("--config", required=True, help="scenario TOML file")
    sim.add_argument("--out-dir", default=".", help="directory for telemetry CSV")
    sim.add_argument("--summary-json", default=None, help="write the report here")

    cfg = sub.add_parser(
        "analyze-config",
        help="rotor-count footprint comparison at equal hovering efficiency",
    )
    cfg.add_argument("--mass", type=float, required=True, help="vehicle mass [kg]")
    cfg.add_argument("--rotor-radius", type=float, required=True, help="rotor radius [m]")
    cfg.add_argument("--n-max", type=int, default=8, help="largest rotor count")
    cfg.add_argument("--rho", type=float, default=1.225, help="air density [kg/m^3]")
    cfg.add_argument("--out", required=True, help="output CSV path")

    chk = sub.add_parser(
        "mix-check",
        help="round-trip the allocator over random feasible wrenches",
    )
    chk.add_argument("--params", required=True, help="scenario TOML with [vehicle]")
    chk.add_argument("--samples", type=int, default=1000, help="number of wrenches")
    chk.add_argument("--seed", type=int, default=0)

    return parser


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    report = run_scenario(cfg, out_dir=args.out_dir)
    print(json.dumps(report.to_dict(), indent=2))
    if args.summary_json:
        report.write_json(args.summary_json)
    if report.status == "diverged":
        return EXIT_DIVERGENCE
    if report.status == "allocation_failed":
        return EXIT_ALLOCATION
    return EXIT_OK


def _cmd_analyze_config(args) -> int:
    query = RotorConfigQuery(
        n=1, mass=args.mass, rotor_radius=args.rotor_radius, rho=args.rho
    )
    rows = generate_config_table(query, n_max=args.n_max)
    write_config_table_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    for row in rows:
        print(
            f"n={row.n}: footprint {row.footprint_area:.4f} m^2, "
            f"area x{row.area_ratio:.3f}, diameter x{row.diameter_ratio:.3f}"
        )
    return EXIT_OK


def _cmd_mix_check(args) -> int:
    cfg = load_config(args.params)
    params = cfg.vehicle
    wrenches = sample_feasible_wrenches(params, args.samples, seed=args.seed)
    start = time.perf_counter()
    worst = 0.0
    for w in wrenches:
        back = forward_wrench(mix(w, params), params)
        err = max(
            float(np.max(np.abs(back.force - w.force))),
            float(np.max(np.abs(back.torque - w.torque))),
        )
        worst = max(worst, err)
    elapsed = time.perf_counter() - start
    print(
        f"{len(wrenches)} wrenches round-tripped in {elapsed * 1e3:.1f} ms, "
        f"max abs error {worst:.3e}"
    )
    if worst >= 1e-9:
        print("FAIL: round-trip error exceeds 1e-9", file=sys.stderr)
        return EXIT_ALLOCATION
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "analyze-config":
            return _cmd_analyze_config(args)
        if args.command == "mix-check":
            return _cmd_mix_check(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as e:
        print(f"simulation diverged: {e}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (AllocationError, ReferenceSingularityError) as e:
        print(f"allocation failure: {e}", file=sys.stderr)
        return EXIT_ALLOCATION
    raise AssertionError(f"unhandled command {args.command}")  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
