"""Joint association / power / bandwidth-split optimizer for a mixed
terrestrial-satellite downlink, with non-optimizing benchmarks and a daily
sweep runner."""

from .baselines import NTN_3GPP, TN_ONLY, BenchmarkSetting, run_benchmark
from .bcga import SolverConfig, Solution, audit_solution, bcga_solve
from .channel import ChannelParams, ChannelState, build_channel
from .config import (ConfigError, SimulationSetup, build_scenario, default_config,
                     load_config, parse_config)
from .metrics import AssignmentOutcome, HourMetrics, compute_metrics
from .power_model import GroupMode
from .power_opt import InfeasiblePowerError
from .runner import hour_snapshot, read_metrics, simulate_day, write_metrics
from .scenario import Scenario, StationSpec, Tier, TrafficProfile

__all__ = [
    "AssignmentOutcome", "BenchmarkSetting", "ChannelParams", "ChannelState",
    "ConfigError", "GroupMode", "HourMetrics", "InfeasiblePowerError",
    "NTN_3GPP", "Scenario", "SimulationSetup", "Solution", "SolverConfig",
    "StationSpec", "TN_ONLY", "Tier", "TrafficProfile", "audit_solution",
    "bcga_solve", "build_channel", "build_scenario", "compute_metrics",
    "default_config", "hour_snapshot", "load_config", "parse_config",
    "read_metrics", "run_benchmark", "simulate_day", "write_metrics",
]
