"""
Paired Monte Carlo runs of a filter bank.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Dict, List, Optional, Tuple

import numpy as np

from sparselms.domain.filter import AdaptiveFilter, RegressorWindow
from sparselms.domain.models import Scenario
from sparselms.domain.signals import SystemModel, TrialStreams, apply_event, build_system, desired_output, step_signal

logger = logging.getLogger(__name__)


@dataclass
class TrialResult:
    """Squared deviation ||w_hat_n - w_n||^2 per filter for one trial, n = 0..horizon."""
    trial_index: int
    msd: Dict[str, np.ndarray]


@dataclass
class MsdTrace:
    """Per-trial squared deviations of one filter and their across-trial statistics."""
    filter_name: str
    samples: np.ndarray
    pairing_key: Tuple[str, int]

    @property
    def trials(self) -> int:
        return self.samples.shape[0]

    @property
    def horizon(self) -> int:
        return self.samples.shape[1] - 1

    @property
    def mean(self) -> np.ndarray:
        return self.samples.mean(axis=0)

    @property
    def stderr(self) -> np.ndarray:
        if self.trials < 2:
            return np.zeros(self.samples.shape[1])
        return self.samples.std(axis=0, ddof=1) / np.sqrt(self.trials)

    @property
    def db(self) -> np.ndarray:
        return to_db(self.mean)


def to_db(value):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(value)


def _squared_deviation(w_hat: np.ndarray, w: np.ndarray) -> float:
    d = w_hat - w
    return float(d @ d)


def _segments(scenario: Scenario, streams: TrialStreams) -> List[Tuple[int, np.ndarray]]:
    system = build_system(scenario.system, scenario.n_taps, streams.system)
    segments = [(0, system.w)]
    for event in system.events:
        system = apply_event(system, event, streams.events)
        if event.iteration == segments[-1][0]:
            segments[-1] = (event.iteration, system.w)
        else:
            segments.append((event.iteration, system.w))
    return segments


def system_segments(scenario: Scenario, trial_index: int = 0) -> List[Tuple[int, np.ndarray]]:
    """Realized true system of one trial: (first iteration, impulse response) per version."""
    return _segments(scenario, TrialStreams.for_trial(scenario.master_seed, trial_index))


def run_trial(scenario: Scenario, trial_index: int) -> TrialResult:
    """Run every filter of the scenario on one shared realization."""
    streams = TrialStreams.for_trial(scenario.master_seed, trial_index)
    segments = _segments(scenario, streams)
    sigma_x2 = scenario.input.stationary_variance
    bank = [AdaptiveFilter(spec, scenario.n_taps, sigma_x2) for spec in scenario.filters]
    window = RegressorWindow(scenario.n_taps)
    msd = {f.name: np.empty(scenario.horizon + 1) for f in bank}

    system = SystemModel(w=segments[0][1])
    pending = segments[1:]
    for f in bank:
        msd[f.name][0] = _squared_deviation(f.w_hat, system.w)

    signal_state = None
    for n in range(scenario.horizon):
        if pending and pending[0][0] == n:
            system = SystemModel(w=pending.pop(0)[1])
            logger.debug("trial %d: system changed at iteration %d", trial_index, n)
        sample, signal_state = step_signal(scenario.input, signal_state, streams.input)
        x = window.push(sample)
        y = desired_output(system, x, scenario.noise, streams.noise)
        for f in bank:
            f.update(x, y, n, system.w)
            msd[f.name][n + 1] = _squared_deviation(f.w_hat, system.w)

    logger.debug("trial %d of %s done", trial_index, scenario.name)
    return TrialResult(trial_index=trial_index, msd=msd)


def _run_trials(scenario: Scenario, workers: int) -> List[TrialResult]:
    indices = range(scenario.trials)
    if workers <= 1 or scenario.trials == 1:
        return [run_trial(scenario, i) for i in indices]
    chunksize = max(1, scenario.trials // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(partial(run_trial, scenario), indices, chunksize=chunksize))


def run_monte_carlo(scenario: Scenario, workers: Optional[int] = None) -> Dict[str, MsdTrace]:
    """Run all trials and stack them per filter, in trial order.

    The result does not depend on ``workers``: each trial draws from its own
    streams and the reduction always sees trials in index order.
    """
    workers = workers or 1
    logger.info("running %s: %d trials x %d iterations, %d filters, %d worker(s)",
                scenario.name, scenario.trials, scenario.horizon, len(scenario.filters), workers)
    results = _run_trials(scenario, workers)
    key = (scenario.name, scenario.master_seed)
    return {
        spec.name: MsdTrace(
            filter_name=spec.name,
            samples=np.stack([result.msd[spec.name] for result in results]),
            pairing_key=key,
        )
        for spec in scenario.filters
    }
