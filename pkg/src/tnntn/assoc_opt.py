"""Association block: gradient ascent on the relaxed association matrix.

The ascent direction is the proportional-fair ratio rate/through-rate; the
step is then projected onto the coverage-feasible nonnegative set by solving
the Lagrangian dual of the projection problem with projected gradient
descent on the multipliers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class DualResult:
    mu: np.ndarray  # (K,) nonpositive multipliers
    X: np.ndarray  # (K, L) projected association
    converged: bool
    iterations: int


def utility_grad_X(X: np.ndarray, rate: np.ndarray, per_ue_rate: np.ndarray,
                   active_rows=None) -> np.ndarray:
    """Gradient of the sum-log-throughput w.r.t. the relaxed association.

    Per-station loads are held fixed at their current column sums, so the
    entry (i, j) is simply rate_ij / rate_i. Rows outside ``active_rows``
    (uncovered UEs) get a zero gradient.
    """
    K = X.shape[0]
    if active_rows is None:
        active_rows = np.ones(K, dtype=bool)
    if np.any(per_ue_rate[active_rows] <= 0):
        bad = np.flatnonzero(active_rows & (per_ue_rate <= 0))
        raise ValueError(f"zero perceived throughput for UEs {bad.tolist()}")
    grad = np.zeros_like(X)
    grad[active_rows] = rate[active_rows] / per_ue_rate[active_rows, None]
    return grad


def _row_steps(received: np.ndarray) -> np.ndarray:
    """Per-UE dual step sizes, one over the squared norm of the row of beta*p."""
    curvature = np.sum(received**2, axis=1)
    steps = np.zeros(len(curvature))
    pos = curvature > 0
    steps[pos] = 1.0 / curvature[pos]
    return steps


def dual_solve(X_tilde: np.ndarray, beta: np.ndarray, p: np.ndarray, rsrp_min: float,
               mu0: np.ndarray | None = None, max_iterations: int = 200,
               tolerance_scale: float = 1e-8, active_rows=None) -> DualResult:
    """Solve the dual of the coverage projection by projected gradient descent.

    The primal projection minimizes ||X - X_tilde||_F^2 / 2 subject to
    X >= 0 and (X * beta) p >= rsrp_min per UE; its multiplier vector is
    nonpositive. The dual gradient is the coverage slack, so descent stops
    when the projected gradient falls below ``tolerance_scale * rsrp_min``.
    """
    K = X_tilde.shape[0]
    received = beta * p[None, :]  # (K, L)
    if active_rows is None:
        active_rows = np.ones(K, dtype=bool)
    mu = np.zeros(K) if mu0 is None else np.minimum(np.asarray(mu0, dtype=float).copy(), 0.0)
    mu[~active_rows] = 0.0
    steps = _row_steps(received)
    tol = tolerance_scale * rsrp_min
    converged = False
    iterations = 0
    X_star = np.maximum(X_tilde - received * mu[:, None], 0.0)
    for iterations in range(1, max_iterations + 1):
        grad = rsrp_min - np.sum(X_star * received, axis=1)
        grad[~active_rows] = 0.0
        mu_new = np.minimum(mu - steps * grad, 0.0)
        projected_grad = mu - mu_new
        # at the boundary the unconstrained direction may be infeasible; the
        # projected step is the right optimality measure
        if np.max(np.abs(np.where(steps > 0, projected_grad / np.where(steps > 0, steps, 1.0), 0.0))) <= tol:
            converged = True
            mu = mu_new
            X_star = np.maximum(X_tilde - received * mu[:, None], 0.0)
            break
        mu = mu_new
        X_star = np.maximum(X_tilde - received * mu[:, None], 0.0)
    X_star[~active_rows] = 0.0
    return DualResult(mu=mu, X=X_star, converged=converged, iterations=iterations)


def association_step(X: np.ndarray, grad: np.ndarray, alpha: float,
                     beta: np.ndarray, p: np.ndarray, rsrp_min: float,
                     mu0=None, max_dual_iterations: int = 200,
                     active_rows=None) -> DualResult:
    """One projected-gradient ascent step on the association block."""
    X_tilde = X + alpha * grad
    return dual_solve(X_tilde, beta, p, rsrp_min, mu0=mu0,
                      max_iterations=max_dual_iterations, active_rows=active_rows)


def round_association(X: np.ndarray, beta: np.ndarray, p: np.ndarray,
                      rsrp_min: float, active_rows=None) -> np.ndarray:
    """Binarize the relaxed association: one serving station per covered UE.

    The argmax is restricted to links meeting the coverage threshold at the
    current powers; if none qualifies the strongest received link wins.
    Ties break to the lowest station index.
    """
    K, L = X.shape
    if active_rows is None:
        active_rows = np.ones(K, dtype=bool)
    active_rows = np.asarray(active_rows, dtype=bool)
    zero_rows = active_rows & ~np.any(X > 0, axis=1)
    if zero_rows.any():
        raise ValueError(f"all-zero association rows for UEs {np.flatnonzero(zero_rows).tolist()}")
    received = beta * p[None, :]
    feasible = received >= rsrp_min
    masked = np.where(feasible, X, -np.inf)
    by_mass = np.argmax(masked, axis=1)
    by_rsrp_feasible = np.argmax(np.where(feasible, received, -np.inf), axis=1)
    by_rsrp = np.argmax(received, axis=1)
    has_feasible = feasible.any(axis=1)
    mass_ok = has_feasible & (masked[np.arange(K), by_mass] > 0)
    best = np.where(mass_ok, by_mass, np.where(has_feasible, by_rsrp_feasible, by_rsrp))
    out = np.zeros((K, L))
    rows = np.flatnonzero(active_rows)
    out[rows, best[rows]] = 1.0
    return out
