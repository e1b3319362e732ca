"""Power block: proximal gradient ascent on terrestrial transmit powers.

A gradient step on the smooth part of the objective is followed by block
soft thresholding (the prox of the weighted group-L2 term) and a clamp to
the box between the per-station coverage floor and the max transmit power.
Satellite powers bypass this block entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .power_model import GroupMode

LN2 = math.log(2.0)


@dataclass(frozen=True)
class PowerStepParams:
    """Step size, threshold scale and box bounds for one proximal step."""

    eta: float  # gradient step size
    lam: float  # trade-off weight
    threshold: np.ndarray | float  # scalar (whole-vector) or per-station
    tau: np.ndarray  # lower bounds, watts
    p_max: np.ndarray  # upper bounds, watts
    group_mode: GroupMode = GroupMode.PER_STATION


def threshold_scale(lam: float, eta: float, w: np.ndarray, psi: np.ndarray,
                    group_mode: GroupMode = GroupMode.PER_STATION):
    """Prox threshold: lam * eta * w^T psi, per station under per-station groups."""
    if group_mode is GroupMode.WHOLE_VECTOR:
        return lam * eta * float(np.dot(w, psi))
    return lam * eta * w * psi


def utility_grad_p(p, X, beta, satellite_mask, noise_per_re,
                   sat_bw, terr_bw, lam, active_rows=None):
    """Gradient of the smooth objective w.r.t. terrestrial powers.

    Smooth part = sum-log-throughput minus the plain L1 term (exactly
    -lam per entry on the nonnegative orthant); the group-L2 term is left to
    the prox. The rate derivative has a positive serving-signal component
    and negative same-tier interference components, both analytic.
    """
    K, L = beta.shape
    if active_rows is None:
        active_rows = np.ones(K, dtype=bool)
    rx = beta * p[None, :]
    denom = np.empty_like(rx)  # interference + noise per link
    for mask in (satellite_mask, ~satellite_mask):
        if not mask.any():
            continue
        tier_total = rx[:, mask].sum(axis=1, keepdims=True)
        denom[:, mask] = tier_total - rx[:, mask] + noise_per_re
    gamma = rx / denom
    load = X.sum(axis=0)
    bw = np.where(satellite_mask, sat_bw, terr_bw)
    with np.errstate(divide="ignore", invalid="ignore"):
        per_load_bw = np.where(load > 0, bw / np.where(load > 0, load, 1.0), 0.0)
    rate = per_load_bw[None, :] * np.log2(1.0 + gamma)
    per_ue = (X * rate).sum(axis=1)
    if np.any(per_ue[active_rows] <= 0):
        bad = np.flatnonzero(active_rows & (per_ue <= 0))
        raise ValueError(f"zero perceived throughput for UEs {bad.tolist()}")

    # weight of each link in the objective gradient, through log(R_i)
    D = np.zeros_like(rx)
    rows = active_rows
    D[rows] = (X[rows] * per_load_bw[None, :]) / ((1.0 + gamma[rows]) * LN2 * per_ue[rows, None])
    E = D * gamma / denom  # interference sensitivity of each link

    grad = np.zeros(L)
    terr = ~satellite_mask
    # same-tier coupling: own signal up, everyone else's interference up
    row_sum_terr = E[:, terr].sum(axis=1)
    signal = (D * beta / denom).sum(axis=0)
    cross = (beta[:, terr] * (row_sum_terr[:, None] - E[:, terr])).sum(axis=0)
    grad[terr] = signal[terr] - cross - lam
    return grad


def block_soft_threshold(p_tilde: np.ndarray, threshold,
                         group_mode: GroupMode = GroupMode.PER_STATION) -> np.ndarray:
    """Prox of t * ||.||_2: shrink toward zero, exactly zero at saturation."""
    p_tilde = np.asarray(p_tilde, dtype=float)
    if group_mode is GroupMode.WHOLE_VECTOR:
        norm = float(np.linalg.norm(p_tilde))
        if norm <= float(threshold) or norm == 0.0:
            return np.zeros_like(p_tilde)
        return (1.0 - float(threshold) / norm) * p_tilde
    t = np.broadcast_to(np.asarray(threshold, dtype=float), p_tilde.shape)
    mag = np.abs(p_tilde)
    scale = np.where(mag > t, 1.0 - t / np.where(mag > 0, mag, 1.0), 0.0)
    return scale * p_tilde


def lower_bounds(X_rounded: np.ndarray, beta: np.ndarray, rsrp_min: float) -> np.ndarray:
    """Coverage floor per station: the weakest served link pins the power.

    Stations serving nobody get a zero floor, which is what allows shutdown.
    """
    K, L = beta.shape
    tau = np.zeros(L)
    served = X_rounded > 0
    for j in range(L):
        rows = served[:, j]
        if rows.any():
            tau[j] = float(np.max(rsrp_min / beta[rows, j]))
    return tau


def power_step(p: np.ndarray, grad: np.ndarray, params: PowerStepParams,
               satellite_mask: np.ndarray, station_ids=None) -> np.ndarray:
    """One proximal step with box projection; satellites stay at max power."""
    terr = ~satellite_mask
    bad = terr & (params.tau > params.p_max * (1 + 1e-12))
    if bad.any():
        which = station_ids[bad] if station_ids is not None else np.flatnonzero(bad)
        raise InfeasiblePowerError(
            f"stations {np.asarray(which).tolist()} cannot meet the coverage "
            f"threshold at max power")
    p_tilde = p[terr] + params.eta * grad[terr]
    t = params.threshold[terr] if np.ndim(params.threshold) else params.threshold
    p_hat = block_soft_threshold(p_tilde, t, params.group_mode)
    out = p.copy()
    out[terr] = np.clip(p_hat, params.tau[terr], params.p_max[terr])
    out[satellite_mask] = params.p_max[satellite_mask]
    return out


class InfeasiblePowerError(RuntimeError):
    """A served UE cannot meet the coverage threshold even at max power."""
