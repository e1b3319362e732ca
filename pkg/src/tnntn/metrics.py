"""Per-hour report quantities, shared by the optimizer and all baselines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelState, sinr_matrix, station_bandwidths
from .power_model import network_consumption
from .scenario import Scenario


@dataclass(frozen=True)
class HourMetrics:
    hour: int
    solver: str
    ue_count: int
    sum_throughput: float  # bit/s over covered UEs
    sum_log_throughput: float
    network_power: float  # watts, terrestrial stations only
    satellite_share: float  # fraction of covered UEs served by a satellite
    active_terrestrial: int
    coverage_ratio: float
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.satellite_share <= 1.0:
            raise ValueError("satellite share out of [0, 1]")
        if not 0.0 <= self.coverage_ratio <= 1.0:
            raise ValueError("coverage ratio out of [0, 1]")


@dataclass(frozen=True)
class AssignmentOutcome:
    """What the metrics need from any solver: a binary association, powers,
    per-tier bandwidths and the set of stations participating at all."""

    X_binary: np.ndarray
    p: np.ndarray
    covered: np.ndarray
    sat_bw: float
    terr_bw: float
    epsilon: float
    station_active: np.ndarray  # (L,) bool; stations excluded by the setting


def outcome_from_solution(solution, scenario: Scenario) -> AssignmentOutcome:
    sat_bw = solution.epsilon * scenario.total_bandwidth
    return AssignmentOutcome(
        X_binary=solution.X_binary, p=solution.p, covered=solution.covered,
        sat_bw=sat_bw, terr_bw=scenario.total_bandwidth - sat_bw,
        epsilon=solution.epsilon,
        station_active=np.ones(scenario.num_stations, dtype=bool))


def compute_metrics(outcome, scenario: Scenario, channel: ChannelState,
                    hour: int = 0, solver: str = "",
                    re_count_mode: str = "full_band") -> HourMetrics:
    """Evaluate one solution or benchmark outcome on its snapshot.

    ``re_count_mode`` controls how per-RE transmit power is bridged to
    station watts: "full_band" uses the setting's total bandwidth worth of
    resource elements, "allocated" only the tier's allocated share.
    """
    if not isinstance(outcome, AssignmentOutcome):
        outcome = outcome_from_solution(outcome, scenario)
    X, p = outcome.X_binary, outcome.p
    if X.shape != (scenario.num_ues, scenario.num_stations):
        raise ValueError("association shape does not match the scenario")
    sat = scenario.satellite_mask
    covered = np.asarray(outcome.covered, dtype=bool)

    gamma = sinr_matrix(channel.beta, p, sat, scenario.noise_per_re)
    load = X[covered].sum(axis=0)
    bw = station_bandwidths(sat, outcome.sat_bw, outcome.terr_bw)
    rows = np.flatnonzero(covered)
    serving = np.argmax(X[rows], axis=1)
    k_serv = load[serving]
    rate = np.where(k_serv > 0,
                    bw[serving] / np.maximum(k_serv, 1) * np.log2(1.0 + gamma[rows, serving]),
                    0.0)

    terr = ~sat
    if re_count_mode == "full_band":
        n_re = (outcome.sat_bw + outcome.terr_bw) / scenario.re_bandwidth
    elif re_count_mode == "allocated":
        n_re = outcome.terr_bw / scenario.re_bandwidth
    else:
        raise ValueError(f"unknown re_count_mode {re_count_mode!r}")
    counted = terr & outcome.station_active
    power = network_consumption(p[counted] * n_re, scenario.static_power[counted],
                                scenario.sleep_floor[counted])

    n_cov = len(rows)
    sat_served = int(X[np.ix_(covered, sat)].sum()) if n_cov else 0
    positive = rate > 0
    return HourMetrics(
        hour=hour, solver=solver, ue_count=scenario.num_ues,
        sum_throughput=float(rate.sum()),
        sum_log_throughput=float(np.sum(np.log(rate[positive]))) if positive.any() else 0.0,
        network_power=float(power),
        satellite_share=sat_served / n_cov if n_cov else 0.0,
        active_terrestrial=int(np.sum(p[counted] > 0)),
        coverage_ratio=n_cov / scenario.num_ues,
        epsilon=float(outcome.epsilon),
    )
