"""
Comparisons and summaries computed from MSD traces.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from sparselms.domain.filter import FilterState, effective_mu, lms_step, regularized_step
from sparselms.domain.models import RhoKind, Scenario
from sparselms.domain.penalty import compute_weights
from sparselms.domain.rho import select_rho
from sparselms.domain.signals import TrialStreams, build_system, desired_output, sample_signal
from sparselms.exceptions import ScenarioConfigError, UnpairedTracesError
from sparselms.experiment.runner import MsdTrace, run_monte_carlo, to_db

logger = logging.getLogger(__name__)

STEADY_STATE_FRACTION = 0.1


@dataclass
class DominanceVerdict:
    passed: np.ndarray
    margin: np.ndarray

    @property
    def fraction(self) -> float:
        return float(self.passed.mean())


@dataclass
class SweepPoint:
    factor: float
    filter_name: str
    msd_linear: float

    @property
    def msd_db(self) -> float:
        return float(to_db(self.msd_linear))


@dataclass
class OneStepResult:
    mean_difference: float
    stderr: float
    draws: int
    triggered: int


def dominance_check(trace_reg: MsdTrace, trace_conv: MsdTrace, z: float = 3.0) -> DominanceVerdict:
    """Per-iteration test mean(reg) <= mean(conv) + z * stderr(paired difference)."""
    if trace_reg.pairing_key != trace_conv.pairing_key or trace_reg.samples.shape != trace_conv.samples.shape:
        raise UnpairedTracesError(
            f"{trace_reg.filter_name} {trace_reg.pairing_key} {trace_reg.samples.shape} vs "
            f"{trace_conv.filter_name} {trace_conv.pairing_key} {trace_conv.samples.shape}"
        )
    difference = trace_reg.samples - trace_conv.samples
    trials = difference.shape[0]
    stderr = difference.std(axis=0, ddof=1) / np.sqrt(trials) if trials > 1 else np.zeros(difference.shape[1])
    margin = z * stderr - difference.mean(axis=0)
    return DominanceVerdict(passed=margin >= 0.0, margin=margin)


def steady_state_window(horizon: int, fraction: float = STEADY_STATE_FRACTION) -> int:
    """First trace index of the final ``fraction`` of the horizon."""
    width = max(1, int(math.ceil(fraction * horizon)))
    return max(0, horizon + 1 - width)


def steady_state_msd(trace: MsdTrace, fraction: float = STEADY_STATE_FRACTION) -> float:
    """Mean linear MSD over the final ``fraction`` of the iterations."""
    return float(trace.mean[steady_state_window(trace.horizon, fraction):].mean())


def reconvergence_iterations(
    trace: MsdTrace, event_iteration: int, margin_db: float = 2.0, fraction: float = STEADY_STATE_FRACTION
) -> Optional[int]:
    """Iterations after a tracking event until the mean MSD is back within
    ``margin_db`` of its pre-event level; None if it never gets there.

    The pre-event level is the mean over the ``fraction`` of iterations
    preceding the event.
    """
    if not 0 < event_iteration <= trace.horizon:
        raise ValueError(f"event iteration {event_iteration} is outside (0, {trace.horizon}]")
    mean = trace.mean
    width = max(1, int(math.ceil(fraction * event_iteration)))
    before = float(mean[max(0, event_iteration + 1 - width):event_iteration + 1].mean())
    target = before * 10.0 ** (margin_db / 10.0)
    after = np.flatnonzero(mean[event_iteration + 1:] <= target)
    if after.size == 0:
        return None
    return int(after[0]) + 1


def window_msd(trace: MsdTrace, start: int, stop: int) -> float:
    return float(trace.mean[start:stop].mean())


def _swept_filters(scenario: Scenario, filters: Optional[Sequence[str]]) -> List[str]:
    if filters:
        names = list(filters)
    elif scenario.sweep is not None and scenario.sweep.filters:
        names = list(scenario.sweep.filters)
    else:
        names = [spec.name for spec in scenario.filters if spec.is_regularized]
    for name in names:
        spec = scenario.filter_named(name)
        if spec.rho is None or spec.rho.eta is None:
            raise ScenarioConfigError(f"filter '{name}' has no eta to sweep")
    return names


def eta_sensitivity_sweep(
    scenario: Scenario,
    eta_factors: Sequence[float],
    probe_iteration: int,
    filters: Optional[Sequence[str]] = None,
    workers: Optional[int] = None,
) -> List[SweepPoint]:
    """Re-run the scenario with every swept filter's eta multiplied by each factor
    and report the mean MSD at ``probe_iteration``."""
    if probe_iteration > scenario.horizon:
        raise ScenarioConfigError(f"probe iteration {probe_iteration} is beyond horizon {scenario.horizon}")
    names = _swept_filters(scenario, filters)
    points = []
    for factor in eta_factors:
        document = scenario.model_dump()
        document["sweep"] = None
        document["filters"] = []
        for name in names:
            spec = scenario.filter_named(name).model_dump()
            spec["rho"]["eta"]["factor"] = spec["rho"]["eta"]["factor"] * factor
            document["filters"].append(spec)
        variant = Scenario.model_validate(document)
        traces = run_monte_carlo(variant, workers)
        for name in names:
            points.append(SweepPoint(factor=float(factor), filter_name=name,
                                     msd_linear=float(traces[name].mean[probe_iteration])))
        logger.info("eta sweep %s: factor %.4g done", scenario.name, factor)
    return points


def sweep_spread_db(points: Sequence[SweepPoint]) -> Dict[str, float]:
    """max - min probe MSD in dB per filter."""
    by_filter: Dict[str, List[float]] = {}
    for point in points:
        by_filter.setdefault(point.filter_name, []).append(point.msd_db)
    return {name: max(values) - min(values) for name, values in by_filter.items()}


def coupled_one_step(
    scenario: Scenario,
    filter_name: str,
    draws: Optional[int] = None,
    perturbation: float = 0.5,
) -> OneStepResult:
    """Average one-step squared-deviation difference, regularized minus plain.

    Both filters start each draw from the same estimate w_hat = w + perturbation * z
    and take one step on the same regressor and observation. The regressor is
    a fresh stationary window of the scenario's input process.
    """
    spec = scenario.filter_named(filter_name)
    if spec.penalty is None:
        raise ScenarioConfigError(f"filter '{filter_name}' is not regularized")
    if spec.rho.kind == RhoKind.FIXED:
        logger.warning("one-step harness on %s uses a fixed rho", filter_name)
    penalty = spec.penalty.build(scenario.n_taps)
    draws = draws or scenario.trials

    differences = np.empty(draws)
    triggered = 0
    for d in range(draws):
        streams = TrialStreams.for_trial(scenario.master_seed, d)
        system = build_system(scenario.system, scenario.n_taps, streams.system)
        w = system.w
        w_hat = w + perturbation * streams.events.standard_normal(scenario.n_taps)
        x = sample_signal(scenario.input, scenario.n_taps, streams.input)[::-1].copy()
        y = desired_output(system, x, scenario.noise, streams.noise)

        state = FilterState(w_hat=w_hat)
        weights = compute_weights(penalty, w_hat)
        mu = effective_mu(spec.step, x)
        rho = select_rho(spec.rho, penalty, weights, w_hat, x, mu_eff=mu, alpha=spec.step.alpha,
                         sigma_x2=spec.rho.sigma_x2 or scenario.input.stationary_variance,
                         iteration=0, w_true=w)
        triggered += rho > 0.0
        plain, _ = lms_step(state, x, y, spec.step)
        regularized, _ = regularized_step(state, x, y, spec.step, penalty, rho, weights=weights)
        differences[d] = float(np.sum((regularized.w_hat - w) ** 2) - np.sum((plain.w_hat - w) ** 2))

    stderr = float(differences.std(ddof=1) / np.sqrt(draws)) if draws > 1 else 0.0
    return OneStepResult(mean_difference=float(differences.mean()), stderr=stderr,
                         draws=draws, triggered=int(triggered))
