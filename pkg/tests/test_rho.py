import numpy as np
import pytest

from sparselms.domain.models import EtaBound, GroupPartition, Penalty, PenaltyKind, RhoKind, RhoPolicy
from sparselms.domain.penalty import compute_weights, evaluate, group_norms, subgradient
from sparselms.domain.rho import r_n, rho_star_correlated, rho_star_lms, rho_star_nlms, select_rho
from sparselms.exceptions import DimensionError


@pytest.fixture
def rng():
    """Seeded generator for property tests."""
    return np.random.default_rng(7)


def test_rho_star_lms():
    """Test the constant step size rule by hand arithmetic."""
    assert rho_star_lms(0.1, 1.0, 2.0, 1.0, 4.0) == pytest.approx(0.225)


def test_rho_star_lms_not_triggered():
    """Test that rho is zero while f <= eta."""
    assert rho_star_lms(0.1, 1.0, 1.0, 2.0, 4.0) == 0.0
    assert rho_star_lms(0.1, 1.0, 0.0, 1.0, 0.0) == 0.0


def test_rho_star_nlms():
    """Test the normalized step size rule by hand arithmetic."""
    assert rho_star_nlms(1.0, 100, 6.0, 5.0, 5.0) == pytest.approx(0.198)


def test_rho_star_nlms_alpha_equal_to_length():
    """Test that alpha = N switches the regularizer off."""
    assert rho_star_nlms(8.0, 8, 100.0, 0.0, 1.0) == 0.0
    assert rho_star_nlms(1.0, 100, 4.0, 5.0, 5.0) == 0.0


def test_rho_star_nlms_rejects_empty_filter():
    """Test the N >= 1 guard."""
    with pytest.raises(ValueError):
        rho_star_nlms(1.0, 0, 1.0, 0.0, 1.0)


def test_r_n_hand_example():
    """Test the correlated-input correction term by hand arithmetic."""
    partition = GroupPartition.singletons(2)
    r = r_n(np.array([1.0, 0.0]), np.array([1.0, 1.0]), np.array([1.0, 0.0]), 2.0, np.ones(2), partition)
    assert r == pytest.approx(3.0)


def test_r_n_vanishes():
    """Test that r is zero for a zero regressor, and for eta = 0 with w_hat orthogonal to x."""
    partition = GroupPartition.singletons(2)
    assert r_n(np.array([1.0, 2.0]), np.zeros(2), np.array([1.0, 1.0]), 3.0, np.ones(2), partition) == 0.0
    assert r_n(np.array([1.0, -1.0]), np.array([1.0, 1.0]), np.array([1.0, 0.0]), 0.0, np.ones(2), partition) == 0.0


def test_r_n_dimension_mismatch():
    """Test that r rejects vectors of the wrong length."""
    partition = GroupPartition.singletons(3)
    with pytest.raises(DimensionError):
        r_n(np.ones(3), np.ones(2), np.ones(3), 1.0, np.ones(3), partition)


def test_rho_star_correlated():
    """Test the correlated-input rule by hand arithmetic."""
    assert rho_star_correlated(0.1, 3.0, 1.0, 5.0, 2.0) == pytest.approx(0.75)
    assert rho_star_correlated(0.1, 3.0, 1.0, 20.0, 2.0) == 0.0
    assert rho_star_correlated(0.1, 3.0, 1.0, 0.0, 2.0) == pytest.approx(1.0)


def test_rho_policies_nonnegative_and_monotone(rng):
    """Test the clamp and the monotonicity in f and eta on random arguments."""
    for _ in range(2000):
        f, eta, r = rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)
        g2 = rng.uniform(0.01, 10)
        mu = rng.uniform(0.001, 0.99)
        df = rng.uniform(0, 1)
        rules = [
            lambda f_, eta_: rho_star_lms(mu, 1.0, f_, eta_, g2),
            lambda f_, eta_: rho_star_nlms(0.5, 16, f_, eta_, g2),
            lambda f_, eta_: rho_star_correlated(mu, f_, eta_, r, g2),
        ]
        for rule in rules:
            base = rule(f, eta)
            assert base >= 0.0
            assert rule(f + df, eta) >= base
            assert rule(f, eta + df) <= base


def test_correlated_rule_no_larger_than_plain_ratio(rng):
    """Test rho_star_correlated <= (f - eta) / ||df||^2 whenever mu r >= 0."""
    for _ in range(1000):
        f, eta = rng.uniform(0, 10), rng.uniform(0, 10)
        g2 = rng.uniform(0.1, 5)
        plain = max((f - eta) / g2, 0.0)
        assert rho_star_correlated(rng.uniform(0, 1), f, eta, rng.uniform(0, 5), g2) <= plain + 1e-15
        assert rho_star_nlms(rng.uniform(0.01, 1), 16, f, eta, g2) <= plain + 1e-15


@pytest.mark.parametrize("kind,group_size", [
    (PenaltyKind.WEIGHTED_L1, 1),
    (PenaltyKind.WEIGHTED_GROUP_L12, 4),
    (PenaltyKind.GROUP_L12, 3),
])
@pytest.mark.parametrize("draws", [5000, pytest.param(100_000, marks=pytest.mark.slow)])
def test_inner_product_bound(rng, kind, group_size, draws):
    """Test |w' x| <= eta * max_j ||x_Ij|| / beta_j whenever f(w) <= eta."""
    n_taps = 24
    penalty = Penalty(kind=kind, partition=GroupPartition.uniform(n_taps, group_size))
    for _ in range(draws):
        weights = compute_weights(penalty, rng.standard_normal(n_taps))
        w = rng.standard_normal(n_taps) * (rng.uniform(size=n_taps) < 0.3)
        x = rng.standard_normal(n_taps)
        eta = evaluate(penalty, weights, w) * rng.uniform(1.0, 2.0)
        bound = eta * float(np.max(group_norms(penalty, x) / weights))
        assert abs(float(w @ x)) <= bound * (1 + 1e-12) + 1e-12


def test_select_rho_fixed():
    """Test that a fixed policy returns its value."""
    penalty = Penalty(kind=PenaltyKind.L1, partition=GroupPartition.singletons(3))
    policy = RhoPolicy(kind=RhoKind.FIXED, rho=0.05)
    rho = select_rho(policy, penalty, np.ones(3), np.ones(3), np.ones(3), mu_eff=0.1)
    assert rho == 0.05


def test_select_rho_nlms_uses_oracle_eta():
    """Test that the oracle eta is the penalty value of the true system."""
    penalty = Penalty(kind=PenaltyKind.L1, partition=GroupPartition.singletons(4))
    w_hat = np.array([1.0, -1.0, 0.5, 0.5])
    w_true = np.array([1.0, 0.0, 0.0, 0.0])
    policy = RhoPolicy(kind=RhoKind.THEOREM1_NLMS, eta=EtaBound(oracle=True))
    rho = select_rho(policy, penalty, np.ones(4), w_hat, np.ones(4), mu_eff=0.25, alpha=1.0, w_true=w_true)
    # f = 3, eta = 1, ||df||^2 = 4
    assert rho == pytest.approx((1 - 1 / 4) * 2 / 4)


def test_select_rho_scale():
    """Test that the deployed rho is scale times the rule's value."""
    penalty = Penalty(kind=PenaltyKind.L1, partition=GroupPartition.singletons(2))
    w_hat = np.array([2.0, -2.0])
    base = RhoPolicy(kind=RhoKind.THEOREM1_LMS, eta=EtaBound(value=1.0))
    scaled = RhoPolicy(kind=RhoKind.THEOREM1_LMS, eta=EtaBound(value=1.0), scale=2.0)
    args = dict(mu_eff=0.1, sigma_x2=1.0)
    rho = select_rho(base, penalty, np.ones(2), w_hat, np.ones(2), **args)
    assert rho == pytest.approx(0.9 * 3 / 2)
    assert select_rho(scaled, penalty, np.ones(2), w_hat, np.ones(2), **args) == pytest.approx(2 * rho)


def test_select_rho_correlated_group():
    """Test the correlated-input policy against its closed form."""
    penalty = Penalty(kind=PenaltyKind.WEIGHTED_GROUP_L12, partition=GroupPartition.uniform(4, 2))
    w_hat = np.array([1.0, 2.0, 0.1, 0.0])
    x = np.array([0.5, -1.0, 2.0, 0.3])
    weights = compute_weights(penalty, w_hat)
    policy = RhoPolicy(kind=RhoKind.THEOREM2, eta=EtaBound(value=0.5))
    g = subgradient(penalty, weights, w_hat)
    r = r_n(w_hat, x, g, 0.5, weights, penalty.partition)
    expected = rho_star_correlated(0.2, evaluate(penalty, weights, w_hat), 0.5, r, float(g @ g))
    assert select_rho(policy, penalty, weights, w_hat, x, mu_eff=0.2) == pytest.approx(expected)


def test_eta_schedule():
    """Test piecewise-constant eta and the sweep factor."""
    eta = EtaBound(value=5.0, schedule=[(100, 2.0), (200, 3.0)], factor=2.0)
    assert eta.at(0) == 10.0
    assert eta.at(150) == 4.0
    assert eta.at(500) == 6.0


def test_eta_needs_a_source():
    """Test that eta without value, schedule or oracle is rejected."""
    with pytest.raises(ValueError):
        EtaBound()
    with pytest.raises(ValueError):
        EtaBound(oracle=True, value=1.0)
