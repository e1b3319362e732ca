"""Deterministic deployment and traffic generation.

Builds the hexagonal terrestrial grid, the single nadir-pointing LEO beam,
uniform UE drops inside the grid footprint, and the 24-hour traffic / trade-off
weight schedule. All quantities are linear scale (watts, Hz, meters); dB only
exists at the config boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from shapely.geometry import MultiPoint, Point, Polygon


class Tier(Enum):
    TERRESTRIAL = "terrestrial"
    SATELLITE = "satellite"


class TrafficClass(Enum):
    LOW = "low"
    AVERAGE = "average"
    HIGH = "high"


@dataclass(frozen=True)
class StationSpec:
    """One station: terrestrial macro site or satellite beam center.

    Powers are watts per resource element; gains are linear (not dBi).
    ``static_power`` is the load-independent draw of an active station and
    ``sleep_floor`` what remains when it is shut down. Satellites are
    solar-powered, so both are zero there.
    """

    id: int
    tier: Tier
    position: tuple[float, float, float]  # meters, z up
    tx_antenna_gain: float
    p_max: float
    static_power: float = 0.0
    sleep_floor: float = 0.0

    def __post_init__(self):
        if self.p_max <= 0:
            raise ValueError(f"station {self.id}: p_max must be > 0, got {self.p_max}")
        if self.static_power < 0 or self.sleep_floor < 0:
            raise ValueError(f"station {self.id}: negative power terms")
        if self.tier is Tier.SATELLITE and (self.static_power != 0 or self.sleep_floor != 0):
            raise ValueError(f"station {self.id}: satellite must have zero static power terms")


@dataclass(frozen=True)
class Scenario:
    """Immutable deployment snapshot shared by every solver within an hour."""

    stations: tuple[StationSpec, ...]
    ue_positions: np.ndarray  # (K, 2) meters
    total_bandwidth: float  # Hz
    re_bandwidth: float  # Hz, subcarrier spacing
    noise_density: float  # W/Hz
    rsrp_min: float  # watts
    rng_seed: int = 0

    def __post_init__(self):
        if len(self.ue_positions) < 1:
            raise ValueError("scenario needs at least one UE")
        if self.total_bandwidth <= 0:
            raise ValueError("total bandwidth must be positive")
        if self.noise_density <= 0:
            raise ValueError("noise density must be positive")
        object.__setattr__(self, "ue_positions", np.asarray(self.ue_positions, dtype=float))

    @property
    def num_ues(self) -> int:
        return len(self.ue_positions)

    @property
    def num_stations(self) -> int:
        return len(self.stations)

    @property
    def satellite_mask(self) -> np.ndarray:
        return np.array([s.tier is Tier.SATELLITE for s in self.stations])

    @property
    def terrestrial_mask(self) -> np.ndarray:
        return ~self.satellite_mask

    @property
    def p_max(self) -> np.ndarray:
        return np.array([s.p_max for s in self.stations])

    @property
    def static_power(self) -> np.ndarray:
        return np.array([s.static_power for s in self.stations])

    @property
    def sleep_floor(self) -> np.ndarray:
        return np.array([s.sleep_floor for s in self.stations])

    @property
    def noise_per_re(self) -> float:
        return self.noise_density * self.re_bandwidth


@dataclass(frozen=True)
class TrafficProfile:
    """24 hourly UE counts, the weight coefficient, and Low/Average/High labels.

    The hourly trade-off weight is ``lambda_h = lambda_coefficient / K_h``,
    so low-traffic hours weight power savings more heavily.
    """

    hourly_ue_counts: tuple[int, ...]
    lambda_coefficient: float
    hourly_classes: tuple[TrafficClass, ...] = field(default=None)

    def __post_init__(self):
        if len(self.hourly_ue_counts) != 24:
            raise ValueError("traffic profile needs exactly 24 hourly counts")
        if any(k < 1 for k in self.hourly_ue_counts):
            raise ValueError("hourly UE counts must all be >= 1")
        if self.lambda_coefficient <= 0:
            raise ValueError("lambda coefficient must be positive")
        if self.hourly_classes is None:
            object.__setattr__(self, "hourly_classes", classify_by_terciles(self.hourly_ue_counts))
        elif len(self.hourly_classes) != 24:
            raise ValueError("hourly classes must have 24 entries")


def classify_by_terciles(counts) -> tuple[TrafficClass, ...]:
    """Label the 8 busiest hours High, the 8 quietest Low, the rest Average."""
    order = np.argsort(counts, kind="stable")
    classes = [None] * 24
    for rank, hour in enumerate(order):
        if rank < 8:
            classes[hour] = TrafficClass.LOW
        elif rank < 16:
            classes[hour] = TrafficClass.AVERAGE
        else:
            classes[hour] = TrafficClass.HIGH
    return tuple(classes)


def generate_hex_layout(isd: float, rings: int) -> np.ndarray:
    """Positions of a hex lattice centered at the origin.

    Returns (1 + 3*rings*(rings+1), 2) positions with nearest-neighbor
    spacing exactly ``isd``.
    """
    if isd <= 0:
        raise ValueError("inter-site distance must be positive")
    if rings < 0:
        raise ValueError("rings must be >= 0")
    positions = []
    for q in range(-rings, rings + 1):
        for r in range(max(-rings, -q - rings), min(rings, -q + rings) + 1):
            x = isd * (q + r / 2.0)
            y = isd * (math.sqrt(3.0) / 2.0) * r
            positions.append((x, y))
    out = np.array(positions)
    # stable order: sorted by distance from center, then angle
    key = np.lexsort((np.arctan2(out[:, 1], out[:, 0]), np.round(np.hypot(out[:, 0], out[:, 1]), 6)))
    return out[key]


def grid_region(isd: float, rings: int) -> Polygon:
    """Convex hull of the site layout inflated by half the inter-site distance."""
    sites = generate_hex_layout(isd, rings)
    return MultiPoint([tuple(p) for p in sites]).convex_hull.buffer(isd / 2.0)


def spawn_ues(count: int, region: Polygon, seed) -> np.ndarray:
    """Drop ``count`` i.i.d. uniform UE positions inside ``region``.

    Deterministic for a fixed seed (rejection sampling from the bounding box).
    """
    if count < 1:
        raise ValueError("UE count must be >= 1")
    if region.area <= 0:
        raise ValueError("degenerate region: zero area")
    rng = np.random.default_rng(seed)
    minx, miny, maxx, maxy = region.bounds
    out = np.empty((count, 2))
    filled = 0
    while filled < count:
        n = max(2 * (count - filled), 16)
        xs = rng.uniform(minx, maxx, n)
        ys = rng.uniform(miny, maxy, n)
        for x, y in zip(xs, ys):
            if filled == count:
                break
            if region.contains(Point(x, y)):
                out[filled] = (x, y)
                filled += 1
    return out


def hourly_params(profile: TrafficProfile, hour: int):
    """(K_h, lambda_h, class) for one hour of the day."""
    if not 0 <= hour <= 23:
        raise ValueError(f"hour out of range: {hour}")
    k = profile.hourly_ue_counts[hour]
    return k, profile.lambda_coefficient / k, profile.hourly_classes[hour]


def sinusoid_day_profile(peak: int, trough_fraction: float = 0.1,
                         trough_hour: int = 4, peak_hour: int = 20) -> tuple[int, ...]:
    """Piecewise raised-cosine day curve: quiet night, busy evening."""
    trough = max(1, round(peak * trough_fraction))
    counts = []
    rise = (peak_hour - trough_hour) % 24
    fall = 24 - rise
    for h in range(24):
        t = (h - trough_hour) % 24
        if t <= rise:
            frac = (1.0 - math.cos(math.pi * t / rise)) / 2.0
        else:
            frac = (1.0 + math.cos(math.pi * (t - rise) / fall)) / 2.0
        counts.append(max(1, round(trough + (peak - trough) * frac)))
    return tuple(counts)
