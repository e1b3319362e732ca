"""Structured configuration: JSON in, linear-scale typed parameters out.

All dB / dBm / dBi quantities are converted to linear scale here, at the
config boundary; nothing downstream ever sees a decibel. Every field has a
shipped default, so an empty config is a valid desk-scale run.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bcga import SolverConfig
from .channel import ChannelParams, FreeSpacePathLoss, LogDistancePathLoss
from .power_model import GroupMode
from .scenario import (Scenario, StationSpec, Tier, TrafficProfile,
                       generate_hex_layout, grid_region, sinusoid_day_profile, spawn_ues)


class ConfigError(ValueError):
    """Invalid configuration; the message carries the offending key path."""


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def dbm_to_watts(x_dbm: float) -> float:
    return 10.0 ** (x_dbm / 10.0) * 1e-3


def default_config() -> dict:
    """Shipped desk-scale default: 19 rural sites, one LEO beam overhead."""
    return {
        "layout": {
            "inter_site_distance_m": 1732.0,
            "rings": 2,
            "station_height_m": 30.0,
        },
        "stations": {
            "tx_antenna_gain_dbi": 14.0,
            "max_tx_power_dbm": 17.7,  # per resource element
            "static_power_w": 50.0,
            "sleep_power_w": 10.0,
        },
        "satellite": {
            "enabled": True,
            "altitude_m": 600_000.0,
            "tx_antenna_gain_dbi": 30.0,
            "max_tx_power_dbm": 15.8,  # per resource element
            "clutter_loss_db": 0.0,
            "scintillation_loss_db": 0.0,
            "shadow_sigma_db": 2.0,
        },
        "radio": {
            "total_bandwidth_hz": 40.0e6,
            "subcarrier_spacing_hz": 15.0e3,
            "carrier_frequency_hz": 2.0e9,
            "noise_density_dbm_per_hz": -174.0,
            "rsrp_min_dbm": -120.0,
            "pathloss": {
                "model": "log_distance",
                "ref_distance_m": 100.0,
                "los_exponent": 2.2,
                "nlos_exponent": 3.8,
                "nlos_extra_loss_db": 20.0,
                "los_cutoff_m": 150.0,
                "los_decay_m": 400.0,
            },
            "shadow_sigma_db": 8.0,
        },
        "traffic": {
            "hourly_ue_counts": list(sinusoid_day_profile(peak=120)),
            "lambda_coefficient": 40.0,
        },
        "optimizer": {
            "max_outer_iterations": 300,
            "utility_rel_tolerance": 1.0e-4,
            "max_dual_iterations": 200,
            "dual_tolerance_scale": 1.0e-8,
            "feasibility_tolerance_scale": 1.0e-6,
            "max_step_halvings": 20,
            "group_mode": "per_station",
            "epsilon_init": 0.5,
            "warm_start_mu": True,
            "delta_w": 1.0e-6,
        },
        "power_accounting": {
            "re_count_mode": "full_band",  # or "allocated"
        },
        "output": {
            "directory": "out",
        },
    }


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        here = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"{here}: unknown configuration key")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{here}: expected a section, got {type(value).__name__}")
            out[key] = _merge(base[key], value, here)
        else:
            out[key] = value
    return out


def _number(section: dict, key: str, path: str, minimum=None, maximum=None) -> float:
    value = section[key]
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{path}.{key}: expected a number, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}.{key}: must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ConfigError(f"{path}.{key}: must be <= {maximum}, got {value}")
    return float(value)


@dataclass(frozen=True)
class SimulationSetup:
    """Fully parsed, linear-scale simulation parameters."""

    isd: float
    rings: int
    station_height: float
    terr_tx_gain: float
    terr_p_max: float
    terr_static_power: float
    terr_sleep_floor: float
    satellite_enabled: bool
    sat_altitude: float
    sat_tx_gain: float
    sat_p_max: float
    total_bandwidth: float
    re_bandwidth: float
    noise_density: float  # W/Hz
    rsrp_min: float  # watts
    channel: ChannelParams
    traffic: TrafficProfile
    solver: SolverConfig
    re_count_mode: str
    output_dir: str
    raw: dict = field(repr=False, default=None)


def parse_config(overrides: dict | None = None) -> SimulationSetup:
    cfg = _merge(default_config(), overrides or {})

    lay = cfg["layout"]
    isd = _number(lay, "inter_site_distance_m", "layout", minimum=1.0)
    rings = int(_number(lay, "rings", "layout", minimum=0))

    st = cfg["stations"]
    terr_p_max = dbm_to_watts(_number(st, "max_tx_power_dbm", "stations"))
    if terr_p_max <= 0:
        raise ConfigError("stations.max_tx_power_dbm: resulting power must be positive")

    sat = cfg["satellite"]
    radio = cfg["radio"]
    pl_cfg = radio["pathloss"]
    carrier = _number(radio, "carrier_frequency_hz", "radio", minimum=1.0)
    model = pl_cfg["model"]
    if model == "free_space":
        pathloss = FreeSpacePathLoss(carrier_hz=carrier)
    elif model == "log_distance":
        pathloss = LogDistancePathLoss(
            carrier_hz=carrier,
            ref_distance_m=_number(pl_cfg, "ref_distance_m", "radio.pathloss", minimum=1.0),
            los_exponent=_number(pl_cfg, "los_exponent", "radio.pathloss", minimum=1.0),
            nlos_exponent=_number(pl_cfg, "nlos_exponent", "radio.pathloss", minimum=1.0),
            nlos_extra_loss_db=_number(pl_cfg, "nlos_extra_loss_db", "radio.pathloss", minimum=0.0),
            los_cutoff_m=_number(pl_cfg, "los_cutoff_m", "radio.pathloss", minimum=0.0),
            los_decay_m=_number(pl_cfg, "los_decay_m", "radio.pathloss", minimum=1.0),
        )
    else:
        raise ConfigError(f"radio.pathloss.model: unknown model {model!r}")

    channel = ChannelParams(
        carrier_hz=carrier,
        pathloss=pathloss,
        shadow_sigma_db_terrestrial=_number(radio, "shadow_sigma_db", "radio", minimum=0.0),
        shadow_sigma_db_satellite=_number(sat, "shadow_sigma_db", "satellite", minimum=0.0),
        clutter_loss=db_to_linear(-abs(_number(sat, "clutter_loss_db", "satellite"))),
        scintillation_loss=db_to_linear(-abs(_number(sat, "scintillation_loss_db", "satellite"))),
    )

    traffic_cfg = cfg["traffic"]
    counts = traffic_cfg["hourly_ue_counts"]
    if not isinstance(counts, (list, tuple)) or len(counts) != 24:
        raise ConfigError("traffic.hourly_ue_counts: expected 24 integers")
    try:
        traffic = TrafficProfile(
            hourly_ue_counts=tuple(int(c) for c in counts),
            lambda_coefficient=_number(traffic_cfg, "lambda_coefficient", "traffic", minimum=1e-12),
        )
    except ValueError as exc:
        raise ConfigError(f"traffic: {exc}") from exc

    opt = cfg["optimizer"]
    mode_name = opt["group_mode"]
    try:
        group_mode = GroupMode(mode_name)
    except ValueError as exc:
        raise ConfigError(f"optimizer.group_mode: unknown mode {mode_name!r}") from exc
    solver = SolverConfig(
        max_outer_iterations=int(_number(opt, "max_outer_iterations", "optimizer", minimum=1)),
        utility_rel_tolerance=_number(opt, "utility_rel_tolerance", "optimizer", minimum=1e-15),
        max_dual_iterations=int(_number(opt, "max_dual_iterations", "optimizer", minimum=1)),
        dual_tolerance_scale=_number(opt, "dual_tolerance_scale", "optimizer", minimum=0.0),
        feasibility_tolerance_scale=_number(opt, "feasibility_tolerance_scale", "optimizer", minimum=0.0),
        max_step_halvings=int(_number(opt, "max_step_halvings", "optimizer", minimum=0)),
        group_mode=group_mode,
        epsilon_init=_number(opt, "epsilon_init", "optimizer", minimum=0.0, maximum=1.0),
        warm_start_mu=bool(opt["warm_start_mu"]),
        delta=_number(opt, "delta_w", "optimizer", minimum=1e-18),
    )

    re_mode = cfg["power_accounting"]["re_count_mode"]
    if re_mode not in ("full_band", "allocated"):
        raise ConfigError(f"power_accounting.re_count_mode: unknown mode {re_mode!r}")

    return SimulationSetup(
        isd=isd,
        rings=rings,
        station_height=_number(lay, "station_height_m", "layout", minimum=0.0),
        terr_tx_gain=db_to_linear(_number(st, "tx_antenna_gain_dbi", "stations")),
        terr_p_max=terr_p_max,
        terr_static_power=_number(st, "static_power_w", "stations", minimum=0.0),
        terr_sleep_floor=_number(st, "sleep_power_w", "stations", minimum=0.0),
        satellite_enabled=bool(sat["enabled"]),
        sat_altitude=_number(sat, "altitude_m", "satellite", minimum=1.0),
        sat_tx_gain=db_to_linear(_number(sat, "tx_antenna_gain_dbi", "satellite")),
        sat_p_max=dbm_to_watts(_number(sat, "max_tx_power_dbm", "satellite")),
        total_bandwidth=_number(radio, "total_bandwidth_hz", "radio", minimum=1.0),
        re_bandwidth=_number(radio, "subcarrier_spacing_hz", "radio", minimum=1.0),
        noise_density=dbm_to_watts(_number(radio, "noise_density_dbm_per_hz", "radio")),
        rsrp_min=dbm_to_watts(_number(radio, "rsrp_min_dbm", "radio")),
        channel=channel,
        traffic=traffic,
        solver=solver,
        re_count_mode=re_mode,
        output_dir=str(cfg["output"]["directory"]),
        raw=cfg,
    )


def load_config(path) -> SimulationSetup:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path}: top level must be an object")
    return parse_config(data)


def build_stations(setup: SimulationSetup) -> tuple[StationSpec, ...]:
    sites = generate_hex_layout(setup.isd, setup.rings)
    stations = [
        StationSpec(id=j, tier=Tier.TERRESTRIAL,
                    position=(float(x), float(y), setup.station_height),
                    tx_antenna_gain=setup.terr_tx_gain, p_max=setup.terr_p_max,
                    static_power=setup.terr_static_power,
                    sleep_floor=setup.terr_sleep_floor)
        for j, (x, y) in enumerate(sites)
    ]
    if setup.satellite_enabled:
        stations.append(StationSpec(
            id=len(stations), tier=Tier.SATELLITE,
            position=(0.0, 0.0, setup.sat_altitude),
            tx_antenna_gain=setup.sat_tx_gain, p_max=setup.sat_p_max))
    return tuple(stations)


def build_scenario(setup: SimulationSetup, ue_count: int, ue_seed) -> Scenario:
    """One hourly deployment snapshot: fixed grid, fresh uniform UE drop."""
    region = grid_region(setup.isd, setup.rings)
    ues = spawn_ues(ue_count, region, ue_seed)
    return Scenario(
        stations=build_stations(setup),
        ue_positions=ues,
        total_bandwidth=setup.total_bandwidth,
        re_bandwidth=setup.re_bandwidth,
        noise_density=setup.noise_density,
        rsrp_min=setup.rsrp_min,
    )
