"""
Filter state and the per-sample LMS / regularized LMS updates.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from sparselms.domain.models import FilterSpec, Penalty, RhoKind, StepSizeKind, StepSizePolicy
from sparselms.domain.penalty import Weights, compute_weights, subgradient
from sparselms.domain.rho import select_rho
from sparselms.exceptions import DegenerateRegressorError, DimensionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FilterState:
    """Coefficient estimate w_hat_n and the number of samples seen."""
    w_hat: np.ndarray
    n: int = 0

    @classmethod
    def zeros(cls, n_taps: int) -> "FilterState":
        return cls(w_hat=np.zeros(n_taps))

    @property
    def n_taps(self) -> int:
        return self.w_hat.shape[0]


class RegressorWindow:
    """Shift register holding [x_n, x_{n-1}, ..., x_{n-N+1}].

    Starts zero-filled, so the first N-1 windows are zero-padded.
    """

    def __init__(self, n_taps: int):
        self.x = np.zeros(n_taps)

    def push(self, sample: float) -> np.ndarray:
        self.x[1:] = self.x[:-1]
        self.x[0] = sample
        return self.x


def _check_regressor(state: FilterState, x: np.ndarray) -> None:
    if x.shape != state.w_hat.shape:
        raise DimensionError("regressor", state.n_taps, x.size)


def predict(state: FilterState, x: np.ndarray) -> float:
    """Filter output w_hat' x."""
    _check_regressor(state, x)
    return float(state.w_hat @ x)


def effective_mu(policy: StepSizePolicy, x: np.ndarray) -> float:
    """mu for constant policies, alpha / ||x||^2 for normalized ones."""
    if policy.kind == StepSizeKind.CONSTANT:
        return policy.mu
    energy = float(x @ x)
    if energy == 0.0:
        raise DegenerateRegressorError("normalized step size is undefined for an all-zero regressor")
    return policy.alpha / energy


def lms_step(state: FilterState, x: np.ndarray, y: float, policy: StepSizePolicy) -> Tuple[FilterState, float]:
    """w_hat <- w_hat + mu e x."""
    e = y - predict(state, x)
    mu = effective_mu(policy, x)
    return FilterState(w_hat=state.w_hat + (mu * e) * x, n=state.n + 1), e


def regularized_step(
    state: FilterState,
    x: np.ndarray,
    y: float,
    policy: StepSizePolicy,
    penalty: Penalty,
    rho: float,
    weights: Optional[Weights] = None,
) -> Tuple[FilterState, float]:
    """w_hat <- w_hat + mu e x - rho df(w_hat), both terms evaluated at w_hat.

    This is a raw subgradient step, so a coefficient may change sign. With
    rho == 0 the result is exactly that of lms_step.
    """
    if rho < 0:
        raise ValueError(f"rho must be non-negative, got {rho}")
    if rho == 0.0:
        return lms_step(state, x, y, policy)

    e = y - predict(state, x)
    mu = effective_mu(policy, x)
    if weights is None:
        weights = compute_weights(penalty, state.w_hat)
    g = subgradient(penalty, weights, state.w_hat)
    return FilterState(w_hat=state.w_hat + (mu * e) * x - rho * g, n=state.n + 1), e


class AdaptiveFilter:
    """One filter of a bank: a FilterSpec bound to its own running state."""

    def __init__(self, spec: FilterSpec, n_taps: int, sigma_x2: float = 1.0):
        self.spec = spec
        self.name = spec.name
        self.state = FilterState.zeros(n_taps)
        self.penalty = spec.penalty.build(n_taps) if spec.penalty is not None else None
        self.sigma_x2 = sigma_x2
        self.skipped = 0
        self.last_rho = 0.0

        if spec.rho is not None and spec.rho.kind == RhoKind.THEOREM1_LMS:
            if spec.rho.sigma_x2 is not None:
                self.sigma_x2 = spec.rho.sigma_x2
            if spec.step.mu * self.sigma_x2 >= 1.0:
                logger.warning("filter %s: mu * sigma_x^2 = %.3g >= 1, the white-input rho policy assumes < 1",
                               self.name, spec.step.mu * self.sigma_x2)

    @property
    def w_hat(self) -> np.ndarray:
        return self.state.w_hat

    def update(self, x: np.ndarray, y: float, iteration: int, w_true: Optional[np.ndarray] = None) -> float:
        """Adapt on one sample; returns the a-priori error, or nan if the sample was skipped."""
        try:
            if self.penalty is None:
                self.state, e = lms_step(self.state, x, y, self.spec.step)
                return e
            mu = effective_mu(self.spec.step, x)
            weights = compute_weights(self.penalty, self.state.w_hat)
            self.last_rho = select_rho(
                self.spec.rho, self.penalty, weights, self.state.w_hat, x,
                mu_eff=mu, alpha=self.spec.step.alpha, sigma_x2=self.sigma_x2,
                iteration=iteration, w_true=w_true,
            )
            self.state, e = regularized_step(self.state, x, y, self.spec.step, self.penalty,
                                             self.last_rho, weights=weights)
            return e
        except DegenerateRegressorError:
            self.skipped += 1
            self.state = FilterState(w_hat=self.state.w_hat, n=self.state.n + 1)
            logger.debug("filter %s: skipped all-zero regressor at iteration %d", self.name, iteration)
            return float("nan")
