"""Daily sweep driver and command-line interface.

Runs the requested solvers over 24 hourly snapshots with deterministic
seeding: within an hour, every solver sees the exact same UE drop and
channel draw. Results go to a metrics CSV; per-hour optimizer traces can be
dumped separately.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .baselines import NTN_3GPP, TN_ONLY, run_benchmark
from .bcga import bcga_solve
from .channel import build_channel
from .config import ConfigError, SimulationSetup, build_scenario, load_config, parse_config
from .metrics import HourMetrics, compute_metrics
from .power_opt import InfeasiblePowerError
from .scenario import hourly_params

SOLVER_NAMES = ("blaster", "ntn3gpp", "tnonly", "fixedsplit")

CSV_HEADER = ("hour", "solver", "ue_count", "sum_throughput_bps", "sum_log_throughput",
              "network_power_w", "satellite_share", "active_terrestrial",
              "coverage_ratio", "epsilon")


def hour_snapshot(setup: SimulationSetup, seed: int, hour: int):
    """(scenario, channel, lambda_h) for one hour, deterministic per seed."""
    ue_count, lam, _cls = hourly_params(setup.traffic, hour)
    ue_seed = np.random.SeedSequence([int(seed), hour, 0])
    ch_seed = np.random.SeedSequence([int(seed), hour, 1])
    scenario = build_scenario(setup, ue_count, ue_seed)
    channel = build_channel(scenario, setup.channel, ch_seed)
    return scenario, channel, lam


def run_solver(name: str, setup: SimulationSetup, scenario, channel, lam,
               hour: int = 0):
    """Run one solver/benchmark on a snapshot; returns (metrics, solution-or-None)."""
    mode = setup.re_count_mode
    if name == "blaster":
        sol = bcga_solve(scenario, channel, lam, setup.solver)
        return compute_metrics(sol, scenario, channel, hour=hour, solver="BLASTER",
                               re_count_mode=mode), sol
    if name == "fixedsplit":
        cfg = replace(setup.solver, epsilon_fixed=True, epsilon_init=0.5)
        sol = bcga_solve(scenario, channel, lam, cfg)
        return compute_metrics(sol, scenario, channel, hour=hour, solver="FIXED_SPLIT",
                               re_count_mode=mode), sol
    if name == "ntn3gpp":
        return run_benchmark(NTN_3GPP, scenario, channel, hour=hour, re_count_mode=mode), None
    if name == "tnonly":
        return run_benchmark(TN_ONLY, scenario, channel, hour=hour, re_count_mode=mode), None
    raise ValueError(f"unknown solver {name!r}")


def simulate_day(setup: SimulationSetup, seed: int,
                 solvers=SOLVER_NAMES) -> list[HourMetrics]:
    """24 hourly snapshots, every requested solver on each."""
    for name in solvers:
        if name not in SOLVER_NAMES:
            raise ValueError(f"unknown solver {name!r}; choose from {SOLVER_NAMES}")
    records = []
    for hour in range(24):
        scenario, channel, lam = hour_snapshot(setup, seed, hour)
        for name in solvers:
            metrics, _sol = run_solver(name, setup, scenario, channel, lam, hour)
            records.append(metrics)
    return records


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_metrics(records, path) -> None:
    """Full-precision CSV, one row per (hour, solver)."""
    if not records:
        raise ValueError("no records to write")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for m in records:
            writer.writerow([
                m.hour, m.solver, m.ue_count, _fmt(m.sum_throughput),
                _fmt(m.sum_log_throughput), _fmt(m.network_power),
                _fmt(m.satellite_share), m.active_terrestrial,
                _fmt(m.coverage_ratio), _fmt(m.epsilon)])


def read_metrics(path) -> list[HourMetrics]:
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            out.append(HourMetrics(
                hour=int(row["hour"]), solver=row["solver"],
                ue_count=int(row["ue_count"]),
                sum_throughput=float(row["sum_throughput_bps"]),
                sum_log_throughput=float(row["sum_log_throughput"]),
                network_power=float(row["network_power_w"]),
                satellite_share=float(row["satellite_share"]),
                active_terrestrial=int(row["active_terrestrial"]),
                coverage_ratio=float(row["coverage_ratio"]),
                epsilon=float(row["epsilon"])))
    return out


def write_trace(solution, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("iteration", "utility", "epsilon", "active_terrestrial"))
        for i, (u, e, a) in enumerate(zip(solution.utility_trace,
                                          solution.epsilon_trace,
                                          solution.active_terrestrial_trace)):
            writer.writerow([i, _fmt(float(u)), _fmt(float(e)), int(a)])


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tnntn",
        description="Terrestrial/satellite network daily sweep and optimizer")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the 24-hour sweep")
    run.add_argument("--config", default=None, help="JSON config file")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--solvers", default=",".join(SOLVER_NAMES),
                     help="comma-separated subset of " + ",".join(SOLVER_NAMES))
    run.add_argument("--out", default=None, help="output directory")

    val = sub.add_parser("validate", help="parse and validate a config file")
    val.add_argument("--config", required=True)

    trace = sub.add_parser("trace", help="dump the optimizer trace for one hour")
    trace.add_argument("--config", default=None)
    trace.add_argument("--seed", type=int, default=0)
    trace.add_argument("--hour", type=int, required=True)
    trace.add_argument("--out", default=None, help="output directory")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        setup = load_config(args.config) if getattr(args, "config", None) else parse_config()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.command == "validate":
        print("config OK")
        return 0

    out_dir = Path(args.out) if getattr(args, "out", None) else Path(setup.output_dir)
    try:
        if args.command == "run":
            solvers = tuple(s for s in args.solvers.split(",") if s)
            for name in solvers:
                if name not in SOLVER_NAMES:
                    print(f"config error: unknown solver {name!r}", file=sys.stderr)
                    return 2
            records = simulate_day(setup, args.seed, solvers)
            out_path = out_dir / "metrics.csv"
            write_metrics(records, out_path)
            print(f"wrote {len(records)} rows to {out_path}")
            return 0
        if args.command == "trace":
            if not 0 <= args.hour <= 23:
                print("config error: --hour must be in 0..23", file=sys.stderr)
                return 2
            scenario, channel, lam = hour_snapshot(setup, args.seed, args.hour)
            sol = bcga_solve(scenario, channel, lam, setup.solver)
            out_path = out_dir / f"trace_{args.hour}.csv"
            write_trace(sol, out_path)
            print(f"wrote {len(sol.utility_trace)} iterations to {out_path}")
            return 0
    except InfeasiblePowerError as exc:
        print(f"solver infeasibility: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
