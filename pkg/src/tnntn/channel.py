"""Large-scale channel: gains, RSRP, SINR and per-link rates.

Everything here is a pure function of its inputs. Gains are linear power
ratios; a frozen per-link shadowing draw makes the hourly snapshot
deterministic for a fixed seed. There is no fast fading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import Scenario, StationSpec, Tier

SPEED_OF_LIGHT = 299_792_458.0  # m/s

LN2 = math.log(2.0)


def friis_gain(distance_m: float, carrier_hz: float):
    """Free-space power gain (c / 4 pi d f)^2."""
    return (SPEED_OF_LIGHT / (4.0 * math.pi * distance_m * carrier_hz)) ** 2


@dataclass(frozen=True)
class FreeSpacePathLoss:
    carrier_hz: float

    def gain(self, distance_m, los=True):
        return friis_gain(distance_m, self.carrier_hz)

    def los_probability(self, distance_2d_m):
        return np.ones_like(np.asarray(distance_2d_m, dtype=float))


@dataclass(frozen=True)
class LogDistancePathLoss:
    """Log-distance model: free space up to a reference distance, then a
    configurable exponent, with an extra NLoS offset.

    LoS/NLoS is drawn per link from a distance-based probability curve
    (certain LoS below ``los_cutoff_m``, exponential decay beyond).
    """

    carrier_hz: float
    ref_distance_m: float = 100.0
    los_exponent: float = 2.2
    nlos_exponent: float = 3.8
    nlos_extra_loss_db: float = 20.0
    los_cutoff_m: float = 150.0
    los_decay_m: float = 400.0

    def gain(self, distance_m, los=True):
        d = np.maximum(np.asarray(distance_m, dtype=float), 1e-3)
        g0 = friis_gain(self.ref_distance_m, self.carrier_hz)
        exponent = np.where(los, self.los_exponent, self.nlos_exponent)
        gain = g0 * (self.ref_distance_m / d) ** exponent
        extra = np.where(los, 1.0, 10.0 ** (-self.nlos_extra_loss_db / 10.0))
        # inside the reference distance the model reverts to pure free space
        near = d <= self.ref_distance_m
        return np.where(near, friis_gain(np.maximum(d, 1.0), self.carrier_hz), gain * extra)

    def los_probability(self, distance_2d_m):
        d = np.asarray(distance_2d_m, dtype=float)
        return np.exp(-np.maximum(d - self.los_cutoff_m, 0.0) / self.los_decay_m)


@dataclass(frozen=True)
class ChannelParams:
    """Channel configuration, all linear scale."""

    carrier_hz: float = 2.0e9
    pathloss: object = None  # terrestrial path-loss model
    shadow_sigma_db_terrestrial: float = 6.0
    shadow_sigma_db_satellite: float = 2.0
    clutter_loss: float = 1.0  # linear, <= 1
    scintillation_loss: float = 1.0  # linear, <= 1

    def __post_init__(self):
        if self.pathloss is None:
            object.__setattr__(self, "pathloss", LogDistancePathLoss(carrier_hz=self.carrier_hz))


@dataclass(frozen=True)
class ChannelState:
    """Frozen large-scale gains for one hourly snapshot."""

    beta: np.ndarray  # (K, L) linear gain
    los: np.ndarray  # (K, L) bool
    shadow: np.ndarray  # (K, L) linear shadowing draw

    def __post_init__(self):
        if np.any(self.beta < 0) or not np.all(np.isfinite(self.beta)):
            raise ValueError("channel gains must be finite and nonnegative")


def _link_distance(station: StationSpec, ue_pos) -> float:
    sx, sy, sz = station.position
    ux, uy = float(ue_pos[0]), float(ue_pos[1])
    return math.sqrt((sx - ux) ** 2 + (sy - uy) ** 2 + sz**2)


def _shadow_draw(sigma_db: float, rng) -> float:
    if sigma_db == 0.0:
        return 1.0
    return 10.0 ** (rng.normal(0.0, sigma_db) / 10.0)


def terrestrial_gain(station: StationSpec, ue_pos, params: ChannelParams, seed) -> float:
    """Linear gain of one terrestrial link: G_tx * pathloss * shadowing."""
    if station.tier is not Tier.TERRESTRIAL:
        raise ValueError("terrestrial_gain needs a terrestrial station")
    d = _link_distance(station, ue_pos)
    if d <= 0:
        raise ValueError("zero link distance")
    rng = np.random.default_rng(seed)
    d2d = math.hypot(station.position[0] - ue_pos[0], station.position[1] - ue_pos[1])
    los = rng.random() < float(params.pathloss.los_probability(d2d))
    sf = _shadow_draw(params.shadow_sigma_db_terrestrial, rng)
    return station.tx_antenna_gain * float(params.pathloss.gain(d, los)) * sf


def satellite_gain(station: StationSpec, ue_pos, params: ChannelParams, seed) -> float:
    """Linear gain of one satellite link, including clutter and scintillation."""
    if station.tier is not Tier.SATELLITE:
        raise ValueError("satellite_gain needs a satellite station")
    d = _link_distance(station, ue_pos)
    rng = np.random.default_rng(seed)
    sf = _shadow_draw(params.shadow_sigma_db_satellite, rng)
    return (station.tx_antenna_gain * friis_gain(d, params.carrier_hz) * sf
            * params.clutter_loss * params.scintillation_loss)


def build_channel(scenario: Scenario, params: ChannelParams, seed) -> ChannelState:
    """Draw the full (K, L) gain matrix for one hourly snapshot."""
    rng = np.random.default_rng(seed)
    K, L = scenario.num_ues, scenario.num_stations
    beta = np.empty((K, L))
    los = np.ones((K, L), dtype=bool)
    shadow = np.ones((K, L))
    ues = scenario.ue_positions
    for j, st in enumerate(scenario.stations):
        sx, sy, sz = st.position
        d2d = np.hypot(ues[:, 0] - sx, ues[:, 1] - sy)
        d3d = np.sqrt(d2d**2 + sz**2)
        if st.tier is Tier.TERRESTRIAL:
            p_los = params.pathloss.los_probability(d2d)
            los[:, j] = rng.random(K) < p_los
            sigma = params.shadow_sigma_db_terrestrial
            if sigma > 0:
                shadow[:, j] = 10.0 ** (rng.normal(0.0, sigma, K) / 10.0)
            beta[:, j] = st.tx_antenna_gain * params.pathloss.gain(d3d, los[:, j]) * shadow[:, j]
        else:
            sigma = params.shadow_sigma_db_satellite
            if sigma > 0:
                shadow[:, j] = 10.0 ** (rng.normal(0.0, sigma, K) / 10.0)
            beta[:, j] = (st.tx_antenna_gain * friis_gain(d3d, params.carrier_hz)
                          * shadow[:, j] * params.clutter_loss * params.scintillation_loss)
    return ChannelState(beta=beta, los=los, shadow=shadow)


def sinr_matrix(beta: np.ndarray, p: np.ndarray, satellite_mask: np.ndarray,
                noise_per_re: float) -> np.ndarray:
    """Large-scale SINR per link; interference comes from same-tier stations only."""
    if np.any(p < 0):
        raise ValueError("powers must be nonnegative")
    if noise_per_re <= 0:
        raise ValueError("noise power must be positive")
    rx = beta * p[None, :]  # (K, L) received power per link
    gamma = np.empty_like(rx)
    for mask in (satellite_mask, ~satellite_mask):
        if not mask.any():
            continue
        tier_total = rx[:, mask].sum(axis=1, keepdims=True)
        interference = tier_total - rx[:, mask]
        gamma[:, mask] = rx[:, mask] / (interference + noise_per_re)
    return gamma


def rsrp_matrix(beta: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Per-link received reference power beta_ij * p_j (watts per RE)."""
    if np.any(p < 0):
        raise ValueError("powers must be nonnegative")
    return beta * p[None, :]


def tier_bandwidths(epsilon: float, total_bandwidth: float) -> tuple[float, float]:
    """(satellite, terrestrial) bandwidth for a split ``epsilon`` of the total."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"bandwidth split out of [0, 1]: {epsilon}")
    return epsilon * total_bandwidth, (1.0 - epsilon) * total_bandwidth


def station_bandwidths(satellite_mask: np.ndarray, sat_bw: float, terr_bw: float) -> np.ndarray:
    return np.where(satellite_mask, sat_bw, terr_bw)


@dataclass(frozen=True)
class RateContext:
    """SINR, per-station load, and per-link rates for one candidate solution.

    ``load`` is fractional during the relaxed optimization and integer after
    rounding. ``base_rate`` is the per-link rate at the full system bandwidth,
    used by the bandwidth-split gradient.
    """

    sinr: np.ndarray  # (K, L)
    load: np.ndarray  # (L,)
    rate: np.ndarray  # (K, L) bit/s with tier bandwidths applied
    base_rate: np.ndarray  # (K, L) bit/s at the full bandwidth
    per_ue_rate: np.ndarray  # (K,) bit/s


def rate_context(beta: np.ndarray, X: np.ndarray, p: np.ndarray,
                 satellite_mask: np.ndarray, noise_per_re: float,
                 sat_bw: float, terr_bw: float,
                 total_bandwidth: float) -> RateContext:
    """Per-link rates under even bandwidth sharing within each station."""
    if np.any(X < 0):
        raise ValueError("association matrix must be nonnegative")
    gamma = sinr_matrix(beta, p, satellite_mask, noise_per_re)
    load = X.sum(axis=0)
    spectral = np.log2(1.0 + gamma)
    bw = station_bandwidths(satellite_mask, sat_bw, terr_bw)
    with np.errstate(divide="ignore", invalid="ignore"):
        per_load = np.where(load > 0, 1.0 / np.where(load > 0, load, 1.0), 0.0)
    rate = bw[None, :] * per_load[None, :] * spectral
    base_rate = total_bandwidth * per_load[None, :] * spectral
    per_ue = (X * rate).sum(axis=1)
    return RateContext(sinr=gamma, load=load, rate=rate, base_rate=base_rate, per_ue_rate=per_ue)
