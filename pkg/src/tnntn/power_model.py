"""Station power consumption and the group-sparse penalty.

The penalty applies to terrestrial stations only: satellites are solar
powered and transmit at a fixed level, so they enter neither the consumption
total nor the sparsity term.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class GroupMode(Enum):
    """Group structure of the mixed L1-L2 penalty.

    PER_STATION treats every station as its own group (the mode that can shut
    stations down individually); WHOLE_VECTOR applies a single L2 term over
    the full power vector.
    """

    PER_STATION = "per_station"
    WHOLE_VECTOR = "whole_vector"


@dataclass
class PowerState:
    """Power vector and its reweighting state (terrestrial entries)."""

    p: np.ndarray  # watts per RE
    w: np.ndarray  # 1 / watts
    delta: float = 1e-6

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if np.any(self.p < 0):
            raise ValueError("powers must be nonnegative")


def station_consumption(p_j: float, psi_j: float, sleep_floor: float) -> float:
    """Consumed watts of one terrestrial station: floor + transmit + static-if-on."""
    if p_j < 0:
        raise ValueError("transmit power must be nonnegative")
    return sleep_floor + p_j + (psi_j if p_j > 0 else 0.0)


def network_consumption(p: np.ndarray, psi: np.ndarray, sleep_floor: np.ndarray) -> float:
    """Total consumed watts over a set of terrestrial stations."""
    p = np.asarray(p, dtype=float)
    return float(np.sum(sleep_floor + p + psi * (p > 0)))


def penalty(p: np.ndarray, w: np.ndarray, psi: np.ndarray, lam: float,
            group_mode: GroupMode = GroupMode.PER_STATION) -> float:
    """Weighted L1 + group-L2 sparsity penalty over the terrestrial powers."""
    p = np.asarray(p, dtype=float)
    if group_mode is GroupMode.WHOLE_VECTOR:
        return lam * (p.sum() + float(np.dot(psi, w)) * float(np.linalg.norm(p)))
    # per-station groups of size one: the group norm reduces to p_j itself
    return lam * float(np.sum(p + psi * w * p))


def reweight(p: np.ndarray, delta: float) -> np.ndarray:
    """Weights inversely proportional to transmit power: w_j = 1 / (p_j + delta)."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    return 1.0 / (np.asarray(p, dtype=float) + delta)
