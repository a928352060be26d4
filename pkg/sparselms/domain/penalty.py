"""
Regularization functions f_n, their subgradients and the reweighting coefficients.

All four penalties are written as a weighted sum of group l2 norms over the
penalty's partition; the scalar kinds use the all-singleton partition, where
a group norm is simply |w_i|. Weights are computed once per iteration at the
current estimate and then held fixed, which keeps f_n convex in w.
"""
import numpy as np

from sparselms.domain.models import Penalty
from sparselms.exceptions import DimensionError

CoefficientVector = np.ndarray
Weights = np.ndarray


def _check_vector(penalty: Penalty, w: CoefficientVector, what: str = "coefficient vector") -> None:
    if w.ndim != 1 or w.shape[0] != penalty.n_taps:
        raise DimensionError(what, penalty.n_taps, w.size)


def _check_weights(penalty: Penalty, weights: Weights) -> None:
    expected = penalty.partition.n_groups
    if weights.ndim != 1 or weights.shape[0] != expected:
        raise DimensionError("weights", expected, weights.size)


def group_norms(penalty: Penalty, w: CoefficientVector) -> np.ndarray:
    """l2 norm of every group subvector, in partition order."""
    if not penalty.kind.is_group:
        return np.abs(w)
    partition = penalty.partition
    return np.sqrt(np.bincount(partition.labels, weights=w * w, minlength=partition.n_groups))


def compute_weights(penalty: Penalty, w_ref: CoefficientVector) -> Weights:
    """Reweighting coefficients beta at the reference estimate.

    Weighted kinds use 1 / (||w_ref_Ij||_2 + delta); unweighted kinds use ones.
    """
    _check_vector(penalty, w_ref, "reference vector")
    if not penalty.kind.is_weighted:
        return np.ones(penalty.partition.n_groups)
    return 1.0 / (group_norms(penalty, w_ref) + penalty.delta)


def evaluate(penalty: Penalty, weights: Weights, w: CoefficientVector) -> float:
    """f_n(w) = sum_j beta_j ||w_Ij||_2, without smoothing."""
    _check_vector(penalty, w)
    _check_weights(penalty, weights)
    return float(np.sum(weights * group_norms(penalty, w)))


def subgradient(penalty: Penalty, weights: Weights, w: CoefficientVector) -> CoefficientVector:
    """Subgradient direction used by the regularized update.

    Scalar kinds return beta_i * sgn(w_i) with sgn(0) = 0. Group kinds return
    beta_j * w_Ij / (||w_Ij||_2 + delta), so an all-zero group maps to zeros.
    """
    _check_vector(penalty, w)
    _check_weights(penalty, weights)
    if not penalty.kind.is_group:
        return weights * np.sign(w)
    scale = weights / (group_norms(penalty, w) + penalty.delta)
    return w * scale[penalty.partition.labels]
