"""
Closed-form regularization step sizes.

rho_star_lms / rho_star_nlms are the white-input policies for constant and
normalized step sizes; rho_star_correlated (with r_n) is the policy for
wide-sense stationary input. Every policy returns a value >= 0.
"""
from typing import Optional

import numpy as np

from sparselms.domain.models import GroupPartition, Penalty, RhoKind, RhoPolicy
from sparselms.domain.penalty import CoefficientVector, Weights, evaluate, subgradient
from sparselms.exceptions import DimensionError


def rho_star_lms(mu: float, sigma_x2: float, f_val: float, eta: float, subgrad_norm2: float) -> float:
    """max{(1 - mu sigma_x^2)(f - eta) / ||df||^2, 0}."""
    if subgrad_norm2 <= 0.0:
        return 0.0
    return max((1.0 - mu * sigma_x2) * (f_val - eta) / subgrad_norm2, 0.0)


def rho_star_nlms(alpha: float, n_taps: int, f_val: float, eta: float, subgrad_norm2: float) -> float:
    """max{(1 - alpha / N)(f - eta) / ||df||^2, 0}."""
    if n_taps < 1:
        raise ValueError(f"n_taps must be >= 1, got {n_taps}")
    if subgrad_norm2 <= 0.0:
        return 0.0
    return max((1.0 - alpha / n_taps) * (f_val - eta) / subgrad_norm2, 0.0)


def r_n(
    w_hat: CoefficientVector,
    x: np.ndarray,
    subgrad: CoefficientVector,
    eta: float,
    weights: Weights,
    partition: GroupPartition,
) -> float:
    """Correction term of the correlated-input policy.

    r_n = (w_hat' x)(x' df) + eta * max_j(||x_Ij||_2 / beta_j) * |x' df|
    """
    n = partition.n_taps
    for what, vector in (("estimate", w_hat), ("regressor", x), ("subgradient", subgrad)):
        if vector.shape != (n,):
            raise DimensionError(what, n, vector.size)
    if weights.shape != (partition.n_groups,):
        raise DimensionError("weights", partition.n_groups, weights.size)

    x_dot_g = float(x @ subgrad)
    x_norms = np.sqrt(np.bincount(partition.labels, weights=x * x, minlength=partition.n_groups))
    spread = float(np.max(x_norms / weights))
    return float(w_hat @ x) * x_dot_g + eta * spread * abs(x_dot_g)


def rho_star_correlated(mu_eff: float, f_val: float, eta: float, r: float, subgrad_norm2: float) -> float:
    """max{(f - eta - mu r) / ||df||^2, 0}, with mu the realized step size."""
    if subgrad_norm2 <= 0.0:
        return 0.0
    return max((f_val - eta - mu_eff * r) / subgrad_norm2, 0.0)


def select_rho(
    policy: RhoPolicy,
    penalty: Penalty,
    weights: Weights,
    w_hat: CoefficientVector,
    x: np.ndarray,
    *,
    mu_eff: float,
    alpha: Optional[float] = None,
    sigma_x2: Optional[float] = None,
    iteration: int = 0,
    w_true: Optional[CoefficientVector] = None,
) -> float:
    """Deployed rho_n for one iteration: scale * rho_star, or the fixed value."""
    if policy.kind == RhoKind.FIXED:
        return policy.rho

    oracle_value = evaluate(penalty, weights, w_true) if policy.eta.oracle else None
    eta = policy.eta.at(iteration, oracle_value)
    f_val = evaluate(penalty, weights, w_hat)
    g = subgradient(penalty, weights, w_hat)
    g_norm2 = float(g @ g)
    if policy.kind == RhoKind.THEOREM1_LMS:
        rho = rho_star_lms(mu_eff, sigma_x2, f_val, eta, g_norm2)
    elif policy.kind == RhoKind.THEOREM1_NLMS:
        rho = rho_star_nlms(alpha, penalty.n_taps, f_val, eta, g_norm2)
    else:
        r = r_n(w_hat, x, g, eta, weights, penalty.partition)
        rho = rho_star_correlated(mu_eff, f_val, eta, r, g_norm2)
    return policy.scale * rho
