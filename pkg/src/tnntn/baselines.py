"""Benchmark settings: max-RSRP association at max power, fixed bandwidths."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelState, rsrp_matrix
from .metrics import AssignmentOutcome, HourMetrics, compute_metrics
from .scenario import Scenario


@dataclass(frozen=True)
class BenchmarkSetting:
    """A non-optimizing reference: fixed bandwidths, max power, max-RSRP."""

    name: str
    sat_bw: float  # Hz
    terr_bw: float  # Hz
    include_satellite: bool


TN_ONLY = BenchmarkSetting("TN_ONLY", sat_bw=0.0, terr_bw=10.0e6, include_satellite=False)
NTN_3GPP = BenchmarkSetting("NTN_3GPP", sat_bw=30.0e6, terr_bw=10.0e6, include_satellite=True)


def max_rsrp_association(rsrp: np.ndarray, active_stations: np.ndarray,
                         rsrp_min: float):
    """Binary association to the strongest active station per UE.

    Returns (X_binary, covered); UEs whose best RSRP misses the threshold
    are marked uncovered and left unassociated. Ties go to the lowest index.
    """
    active_stations = np.asarray(active_stations, dtype=bool)
    if not active_stations.any():
        raise ValueError("no active stations")
    K, L = rsrp.shape
    masked = np.where(active_stations[None, :], rsrp, -np.inf)
    best = np.argmax(masked, axis=1)
    covered = masked[np.arange(K), best] >= rsrp_min
    X = np.zeros((K, L))
    rows = np.flatnonzero(covered)
    X[rows, best[rows]] = 1.0
    return X, covered


def benchmark_outcome(setting: BenchmarkSetting, scenario: Scenario,
                      channel: ChannelState) -> AssignmentOutcome:
    """All stations at max power, max-RSRP association, fixed split."""
    sat = scenario.satellite_mask
    if not setting.include_satellite and not (~sat).any():
        raise ValueError(f"{setting.name}: scenario has no terrestrial stations")
    station_active = np.ones(scenario.num_stations, dtype=bool)
    if not setting.include_satellite:
        station_active &= ~sat
    p = np.where(station_active, scenario.p_max, 0.0)
    X, covered = max_rsrp_association(rsrp_matrix(channel.beta, p),
                                      station_active, scenario.rsrp_min)
    total_bw = setting.sat_bw + setting.terr_bw
    return AssignmentOutcome(
        X_binary=X, p=p, covered=covered,
        sat_bw=setting.sat_bw, terr_bw=setting.terr_bw,
        epsilon=setting.sat_bw / total_bw if total_bw > 0 else 0.0,
        station_active=station_active)


def run_benchmark(setting: BenchmarkSetting, scenario: Scenario, channel: ChannelState,
                  hour: int = 0, re_count_mode: str = "full_band") -> HourMetrics:
    outcome = benchmark_outcome(setting, scenario, channel)
    return compute_metrics(outcome, scenario, channel, hour=hour,
                           solver=setting.name, re_count_mode=re_count_mode)
