"""Block coordinate gradient ascent over association, bandwidth split and power.

One outer iteration runs the association projection step, the closed-form
bandwidth split, the proximal power step and the weight update, in that
order. Every block is accepted only if it does not decrease the penalized
objective (step halving otherwise), which makes the recorded utility trace
non-decreasing by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .assoc_opt import association_step, dual_solve, round_association, utility_grad_X
from .channel import ChannelState, rate_context, tier_bandwidths
from .power_model import GroupMode, penalty, reweight
from .power_opt import (PowerStepParams, lower_bounds, threshold_scale,
                        utility_grad_p, power_step)
from .scenario import Scenario


@dataclass(frozen=True)
class SolverConfig:
    max_outer_iterations: int = 300
    utility_rel_tolerance: float = 1e-4
    max_dual_iterations: int = 200
    dual_tolerance_scale: float = 1e-8
    feasibility_tolerance_scale: float = 1e-6  # times rsrp_min
    max_step_halvings: int = 20
    group_mode: GroupMode = GroupMode.PER_STATION
    epsilon_init: float = 0.5
    epsilon_fixed: bool = False  # pin the split (fixed-split ablation)
    delta: float = 1e-6  # reweighting stabilizer, watts
    warm_start_mu: bool = True

    def __post_init__(self):
        if self.utility_rel_tolerance <= 0:
            raise ValueError("utility tolerance must be positive")
        if not 0.0 <= self.epsilon_init <= 1.0:
            raise ValueError("initial bandwidth split must be in [0, 1]")


@dataclass
class Solution:
    X_relaxed: np.ndarray
    X_binary: np.ndarray
    p: np.ndarray
    epsilon: float
    utility_trace: np.ndarray
    epsilon_trace: np.ndarray
    satellite_share_trace: np.ndarray  # rounded satellite share per iteration
    active_terrestrial_trace: np.ndarray
    covered: np.ndarray  # (K,) bool
    mu: np.ndarray
    w: np.ndarray
    lam: float
    termination: str = "max_iterations"
    dual_converged: bool = True

    @property
    def iterations(self) -> int:
        return len(self.utility_trace) - 1


def evaluate_utility(X, p, epsilon, scenario: Scenario, channel: ChannelState,
                     lam: float, w, group_mode: GroupMode = GroupMode.PER_STATION,
                     active_rows=None) -> float:
    """Penalized objective: sum of log rates minus the sparsity penalty."""
    sat = scenario.satellite_mask
    sat_bw, terr_bw = tier_bandwidths(epsilon, scenario.total_bandwidth)
    ctx = rate_context(channel.beta, X, p, sat, scenario.noise_per_re,
                       sat_bw, terr_bw, scenario.total_bandwidth)
    if active_rows is None:
        active_rows = np.ones(scenario.num_ues, dtype=bool)
    rates = ctx.per_ue_rate[active_rows]
    if np.any(rates <= 0):
        bad = np.flatnonzero(active_rows)[np.flatnonzero(rates <= 0)]
        raise ValueError(f"zero perceived throughput for UEs {bad.tolist()}")
    terr = scenario.terrestrial_mask
    pen = penalty(p[terr], np.asarray(w)[terr], scenario.static_power[terr], lam, group_mode)
    return float(np.sum(np.log(rates)) - pen)


def optimal_bandwidth_split(X_binary, satellite_mask, active_rows=None) -> float:
    """Closed-form split: the fraction of served UEs on a satellite."""
    X_binary = np.asarray(X_binary)
    if active_rows is not None:
        X_binary = X_binary[np.asarray(active_rows, dtype=bool)]
    total = X_binary.sum()
    if total <= 0:
        raise ValueError("no served UEs")
    return float(X_binary[:, satellite_mask].sum() / total)


def split_gradient(X, base_rate, satellite_mask, epsilon, active_rows=None) -> float:
    """Numeric utility gradient w.r.t. the bandwidth split at ``epsilon``."""
    K = X.shape[0]
    if active_rows is None:
        active_rows = np.ones(K, dtype=bool)
    sat_mass = (X * base_rate)[:, satellite_mask].sum(axis=1)
    terr_mass = (X * base_rate)[:, ~satellite_mask].sum(axis=1)
    per_ue = epsilon * sat_mass + (1.0 - epsilon) * terr_mass
    ok = active_rows & (per_ue > 0)
    return float(np.sum((sat_mass[ok] - terr_mass[ok]) / per_ue[ok]))


def coverage_mask(scenario: Scenario, channel: ChannelState) -> np.ndarray:
    """UEs whose best link meets the coverage threshold at max power."""
    best = (channel.beta * scenario.p_max[None, :]).max(axis=1)
    return best >= scenario.rsrp_min


def max_rsrp_init(scenario: Scenario, channel: ChannelState, covered) -> np.ndarray:
    """Binary max-RSRP association at max power; uncovered rows stay zero."""
    rsrp = channel.beta * scenario.p_max[None, :]
    X = np.zeros_like(rsrp)
    best = np.argmax(rsrp, axis=1)
    rows = np.flatnonzero(covered)
    X[rows, best[rows]] = 1.0
    return X


class _Objective:
    """Self-weighted penalized objective used for acceptance and the trace.

    The penalty weights are re-derived from the candidate powers themselves
    (w = 1/(p + delta)), which makes the group term a smoothed on/off count
    and keeps consecutive trace entries comparable across weight updates.
    """

    def __init__(self, scenario, channel, lam, covered, group_mode, delta):
        self.scenario = scenario
        self.channel = channel
        self.lam = lam
        self.covered = covered
        self.group_mode = group_mode
        self.delta = delta

    def __call__(self, X, p, epsilon) -> float:
        w = reweight(p, self.delta)
        try:
            return evaluate_utility(X, p, epsilon, self.scenario, self.channel,
                                    self.lam, w, self.group_mode, self.covered)
        except ValueError:
            return -math.inf


def bcga_solve(scenario: Scenario, channel: ChannelState, lam: float,
               config: SolverConfig = SolverConfig()) -> Solution:
    """Run the alternating solver until the utility trace converges."""
    beta = channel.beta
    K, L = beta.shape
    sat = scenario.satellite_mask
    terr = ~sat
    p_max = scenario.p_max
    psi = scenario.static_power
    rsrp_min = scenario.rsrp_min

    covered = coverage_mask(scenario, channel)
    if not covered.any():
        raise ValueError("no UE is coverable at max power")
    X = max_rsrp_init(scenario, channel, covered)
    p = p_max.astype(float).copy()
    epsilon = config.epsilon_init
    w = np.ones(L)
    mu = np.zeros(K)
    objective = _Objective(scenario, channel, lam, covered, config.group_mode, config.delta)
    slack = 1e-12

    f_cur = objective(X, p, epsilon)
    trace = [f_cur]
    eps_trace = [epsilon]
    share_trace = [optimal_bandwidth_split(round_association(X, beta, p, rsrp_min, covered),
                                           sat, covered)]
    active_trace = [int(np.sum(p[terr] > 0))]
    termination = "max_iterations"
    dual_ok = True

    X_binary = round_association(X, beta, p, rsrp_min, covered)
    for _ in range(config.max_outer_iterations):
        # --- association + bandwidth split (jointly backtracked) ---
        sat_bw, terr_bw = tier_bandwidths(epsilon, scenario.total_bandwidth)
        ctx = rate_context(beta, X, p, sat, scenario.noise_per_re,
                           sat_bw, terr_bw, scenario.total_bandwidth)
        grad_X = utility_grad_X(X, ctx.rate, ctx.per_ue_rate, covered)
        alpha = 1.0 / (K * L)
        mu0 = mu if config.warm_start_mu else None
        accepted = False
        for _halving in range(config.max_step_halvings + 1):
            dual = association_step(X, grad_X, alpha, beta, p, rsrp_min, mu0=mu0,
                                    max_dual_iterations=config.max_dual_iterations,
                                    active_rows=covered)
            X_cand = dual.X
            Xb_cand = round_association(X_cand, beta, p, rsrp_min, covered)
            eps_cand = (epsilon if config.epsilon_fixed
                        else optimal_bandwidth_split(Xb_cand, sat, covered))
            f_cand = objective(X_cand, p, eps_cand)
            if f_cand >= f_cur - slack * max(1.0, abs(f_cur)):
                accepted = True
                break
            alpha *= 0.5
        if accepted:
            X, epsilon, X_binary, mu = X_cand, eps_cand, Xb_cand, dual.mu
            dual_ok = dual_ok and dual.converged
            f_cur = f_cand

        # --- power block ---
        tau = lower_bounds(X_binary, beta, rsrp_min)
        tau[sat] = 0.0
        sat_bw, terr_bw = tier_bandwidths(epsilon, scenario.total_bandwidth)
        grad_p = utility_grad_p(p, X, beta, sat, scenario.noise_per_re,
                                sat_bw, terr_bw, lam, covered)
        g_inf = float(np.max(np.abs(grad_p[terr]))) if terr.any() else 0.0
        if g_inf > 0:
            eta = float(np.max(p_max[terr])) / g_inf
            for _halving in range(config.max_step_halvings + 1):
                params = PowerStepParams(
                    eta=eta, lam=lam,
                    threshold=threshold_scale(lam, eta, w, psi, config.group_mode),
                    tau=tau, p_max=p_max, group_mode=config.group_mode)
                p_cand = power_step(p, grad_p, params, sat)
                f_cand = objective(X, p_cand, epsilon)
                if f_cand >= f_cur - slack * max(1.0, abs(f_cur)):
                    p = p_cand
                    f_cur = f_cand
                    break
                eta *= 0.5

        # --- weight update and convergence check ---
        w = reweight(p, config.delta)
        f_prev = trace[-1]
        trace.append(f_cur)
        eps_trace.append(epsilon)
        share_trace.append(optimal_bandwidth_split(X_binary, sat, covered))
        active_trace.append(int(np.sum(p[terr] > 0)))
        if abs(f_cur - f_prev) <= config.utility_rel_tolerance * max(1.0, abs(f_prev)):
            termination = "converged"
            break

    # final rounding at the final powers, plus a coverage repair pass
    X_binary = round_association(X, beta, p, rsrp_min, covered)
    tau = lower_bounds(X_binary, beta, rsrp_min)
    tau[sat] = 0.0
    bad = terr & (tau > p_max * (1 + 1e-12))
    if bad.any():
        from .power_opt import InfeasiblePowerError
        raise InfeasiblePowerError(
            f"stations {np.flatnonzero(bad).tolist()} cannot meet the coverage "
            f"threshold at max power")
    p = np.where(terr, np.clip(np.maximum(p, tau), 0.0, p_max), p_max)
    epsilon = (epsilon if config.epsilon_fixed
               else optimal_bandwidth_split(X_binary, sat, covered))

    return Solution(
        X_relaxed=X, X_binary=X_binary, p=p, epsilon=epsilon,
        utility_trace=np.array(trace), epsilon_trace=np.array(eps_trace),
        satellite_share_trace=np.array(share_trace),
        active_terrestrial_trace=np.array(active_trace),
        covered=covered, mu=mu, w=w, lam=lam,
        termination=termination, dual_converged=dual_ok)


def audit_solution(sol: Solution, scenario: Scenario, channel: ChannelState) -> list[str]:
    """Constraint audit; returns a list of violation descriptions (empty = clean)."""
    problems = []
    tol_feas = 1e-6 * scenario.rsrp_min
    terr = scenario.terrestrial_mask
    if not 0.0 <= sol.epsilon <= 1.0:
        problems.append(f"bandwidth split out of range: {sol.epsilon}")
    if np.any(sol.mu > 1e-15):
        problems.append("positive dual multipliers")
    if np.any(sol.p < -1e-15) or np.any(sol.p > scenario.p_max * (1 + 1e-9)):
        problems.append("power outside [0, p_max]")
    tau = lower_bounds(sol.X_binary, channel.beta, scenario.rsrp_min)
    tau[~terr] = 0.0
    if np.any(sol.p[terr] < tau[terr] - tol_feas):
        problems.append("power below coverage floor")
    rsrp = channel.beta * sol.p[None, :]
    for i in np.flatnonzero(sol.covered):
        row = sol.X_binary[i]
        if row.sum() != 1:
            problems.append(f"UE {i}: not exactly one serving station")
            continue
        j = int(np.argmax(row))
        if rsrp[i, j] < scenario.rsrp_min - tol_feas:
            problems.append(f"UE {i}: served below the coverage threshold")
    return problems
