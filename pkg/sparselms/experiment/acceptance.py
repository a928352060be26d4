"""
Acceptance assertions evaluated by ``sparselms check``.

Each built-in scenario registers one function that runs the scenario and
returns the list of assertion outcomes, together with the filter names the
function reads.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sparselms.domain.models import Scenario, TrackingEventKind
from sparselms.exceptions import ScenarioConfigError
from sparselms.experiment.analysis import (
    coupled_one_step,
    dominance_check,
    eta_sensitivity_sweep,
    reconvergence_iterations,
    steady_state_msd,
    sweep_spread_db,
    window_msd,
)
from sparselms.experiment.runner import MsdTrace, run_monte_carlo, to_db
from sparselms.schemas.results import AssertionResult

logger = logging.getLogger(__name__)

CheckFunction = Callable[[Scenario, Optional[int]], List[AssertionResult]]


@dataclass(frozen=True)
class RegisteredCheck:
    func: CheckFunction
    filters: Tuple[str, ...]


_REGISTRY: Dict[str, RegisteredCheck] = {}

DOMINANCE_Z = 3.0
DOMINANCE_FRACTION = 0.99
RESET_WINDOW = 500


def acceptance_check(name: str, filters: Sequence[str] = ()) -> Callable[[CheckFunction], CheckFunction]:
    """Register the assertions of the built-in scenario ``name``.

    ``filters`` names the filter bank members the assertions read.
    """
    def register(func: CheckFunction) -> CheckFunction:
        if name in _REGISTRY:
            raise ValueError(f"checks for {name} registered twice")
        _REGISTRY[name] = RegisteredCheck(func=func, filters=tuple(filters))
        return func
    return register


def registered_checks() -> List[str]:
    return sorted(_REGISTRY)


def run_checks(scenario: Scenario, workers: Optional[int] = None) -> List[AssertionResult]:
    check = _REGISTRY.get(scenario.name)
    if check is None:
        raise ScenarioConfigError(f"no acceptance checks are registered for '{scenario.name}'")
    present = {spec.name for spec in scenario.filters}
    missing = [name for name in check.filters if name not in present]
    if missing:
        raise ScenarioConfigError(f"checks of '{scenario.name}' need filters named {missing}; "
                                  f"the scenario has {sorted(present)}")
    logger.info("checking %s", scenario.name)
    return check.func(scenario, workers)


def compare(name: str, measured: float, comparison: str, threshold: float, detail: str = "") -> AssertionResult:
    passed = {
        "<": measured < threshold,
        "<=": measured <= threshold,
        ">=": measured >= threshold,
        ">": measured > threshold,
    }[comparison]
    return AssertionResult(name=name, measured=measured, threshold=threshold,
                           comparison=comparison, passed=bool(passed), detail=detail)


def within(name: str, measured: float, target: float, tolerance: float, detail: str = "") -> AssertionResult:
    passed = abs(measured - target) <= tolerance
    detail = f"tolerance {tolerance:g}" + (f", {detail}" if detail else "")
    return AssertionResult(name=name, measured=measured, threshold=target,
                           comparison="within", passed=bool(passed), detail=detail)


def _steady_db(traces: Dict[str, MsdTrace]) -> Dict[str, float]:
    return {name: float(to_db(steady_state_msd(trace))) for name, trace in traces.items()}


def _conventional(scenario: Scenario) -> str:
    plain = [spec.name for spec in scenario.filters if not spec.is_regularized]
    if not plain:
        raise ScenarioConfigError(f"'{scenario.name}' has no unregularized filter to compare against")
    return plain[0]


@acceptance_check("fig4-white-sparse", filters=("NLMS", "ZA-NLMS", "RZA-NLMS"))
def check_white_sparse(scenario: Scenario, workers: Optional[int]) -> List[AssertionResult]:
    db = _steady_db(run_monte_carlo(scenario, workers))
    return [
        compare("steady-state dB: ZA-NLMS below NLMS by 1 dB", db["ZA-NLMS"], "<", db["NLMS"] - 1.0),
        compare("steady-state dB: RZA-NLMS below ZA-NLMS by 1 dB", db["RZA-NLMS"], "<", db["ZA-NLMS"] - 1.0),
        compare("steady-state dB: RZA-NLMS below NLMS", db["RZA-NLMS"], "<", db["NLMS"]),
    ]


@acceptance_check("fig5-eta-sensitivity", filters=("ZA-NLMS", "RZA-NLMS"))
def check_eta_sensitivity(scenario: Scenario, workers: Optional[int]) -> List[AssertionResult]:
    if scenario.sweep is None:
        raise ScenarioConfigError(f"'{scenario.name}' has no sweep block")
    points = eta_sensitivity_sweep(scenario, scenario.sweep.factors, scenario.sweep.probe_iteration,
                                   ["ZA-NLMS", "RZA-NLMS"], workers)
    spread = sweep_spread_db(points)
    return [
        compare("probe MSD spread dB: RZA-NLMS below ZA-NLMS", spread["RZA-NLMS"], "<", spread["ZA-NLMS"],
                detail=f"{len(scenario.sweep.factors)} eta factors, probe at {scenario.sweep.probe_iteration}"),
    ]


@acceptance_check("fig7-correlated-sparse", filters=("NLMS", "RZA-NLMS(white-rho)", "RZA-NLMS(corr-rho)"))
def check_correlated_sparse(scenario: Scenario, workers: Optional[int]) -> List[AssertionResult]:
    db = _steady_db(run_monte_carlo(scenario, workers))
    white, corr = db["RZA-NLMS(white-rho)"], db["RZA-NLMS(corr-rho)"]
    return [
        compare("steady-state dB: RZA-NLMS(white-rho) below NLMS", white, "<", db["NLMS"]),
        compare("steady-state dB: RZA-NLMS(corr-rho) not above NLMS", corr, "<=", db["NLMS"] + 0.2,
                detail="0.2 dB Monte Carlo slack"),
        compare("steady-state dB: RZA-NLMS(white-rho) not above RZA-NLMS(corr-rho)", white, "<=", corr + 0.2,
                detail="0.2 dB Monte Carlo slack"),
    ]


@acceptance_check("fig9-tracking", filters=("NLMS", "RZA-NLMS"))
def check_tracking(scenario: Scenario, workers: Optional[int]) -> List[AssertionResult]:
    traces = run_monte_carlo(scenario, workers)
    db = _steady_db(traces)
    results = []
    for event in scenario.system.events:
        if event.iteration == 0:
            continue
        plain = reconvergence_iterations(traces["NLMS"], event.iteration)
        plain_value = float(scenario.horizon - event.iteration if plain is None else plain)
        sparse = reconvergence_iterations(traces["RZA-NLMS"], event.iteration)
        sparse_value = float("inf") if sparse is None else float(sparse)
        results.append(compare(f"re-convergence iterations after {event.kind.value} at {event.iteration}: "
                               f"RZA-NLMS faster than NLMS", sparse_value, "<", plain_value,
                               detail="within 2 dB of the pre-event level"))
    results.append(compare("steady-state dB: RZA-NLMS below NLMS", db["RZA-NLMS"], "<", db["NLMS"]))
    return results


def _group_gain(scenario: Scenario, workers: Optional[int]) -> List[AssertionResult]:
    db = _steady_db(run_monte_carlo(scenario, workers))
    return [
        within("steady-state gain dB of GRZA-NLMS over NLMS", db["NLMS"] - db["GRZA-NLMS"], 10.0, 3.0),
        within("steady-state gain dB of RZA-NLMS over NLMS", db["NLMS"] - db["RZA-NLMS"], 10.0, 3.0),
    ]


GROUP_FILTERS = ("NLMS", "RZA-NLMS", "GRZA-NLMS")

acceptance_check("fig11-group-white", filters=GROUP_FILTERS)(_group_gain)


@acceptance_check("fig12-group-correlated", filters=GROUP_FILTERS)
def check_group_correlated(scenario: Scenario, workers: Optional[int]) -> List[AssertionResult]:
    db = _steady_db(run_monte_carlo(scenario, workers))
    return [
        compare("steady-state gap dB of GRZA-NLMS below RZA-NLMS", db["RZA-NLMS"] - db["GRZA-NLMS"], ">=", 2.0),
        compare("steady-state dB: RZA-NLMS not above NLMS", db["RZA-NLMS"], "<=", db["NLMS"]),
    ]


@acceptance_check("fig13-group-tracking", filters=GROUP_FILTERS)
def check_group_tracking(scenario: Scenario, workers: Optional[int]) -> List[AssertionResult]:
    traces = run_monte_carlo(scenario, workers)
    bounds = [event.iteration for event in scenario.system.events if event.iteration > 0] + [scenario.horizon]
    results = []
    for end in bounds:
        start = end - max(1, end // 10)
        level = {name: float(to_db(window_msd(trace, start, end + 1))) for name, trace in traces.items()}
        for name in ("GRZA-NLMS", "RZA-NLMS"):
            results.append(compare(f"MSD dB over iterations {start}-{end}: {name} below NLMS",
                                   level[name], "<", level["NLMS"]))
    for event in scenario.system.events:
        if event.kind != TrackingEventKind.RESET_ACTIVE or event.iteration == 0:
            continue
        end = min(scenario.horizon, event.iteration + RESET_WINDOW)
        level = {name: float(to_db(window_msd(traces[name], event.iteration + 1, end + 1)))
                 for name in ("GRZA-NLMS", "RZA-NLMS")}
        results.append(compare(f"MSD dB over iterations {event.iteration + 1}-{end} after the in-block reset: "
                               f"GRZA-NLMS below RZA-NLMS", level["GRZA-NLMS"], "<", level["RZA-NLMS"]))
    return results


def _dominance(scenario: Scenario, workers: Optional[int]) -> List[AssertionResult]:
    traces = run_monte_carlo(scenario, workers)
    conventional = _conventional(scenario)
    results = []
    for spec in scenario.filters:
        if not spec.is_regularized:
            continue
        verdict = dominance_check(traces[spec.name], traces[conventional], z=DOMINANCE_Z)
        results.append(compare(f"fraction of iterations where {spec.name} MSD <= {conventional} MSD",
                               verdict.fraction, ">=", DOMINANCE_FRACTION,
                               detail=f"{scenario.trials} paired trials, z={DOMINANCE_Z:g}"))
    return results


acceptance_check("theorem1-nlms-dominance")(_dominance)
acceptance_check("theorem1-lms-dominance")(_dominance)


@acceptance_check("theorem2-one-step")
def check_one_step(scenario: Scenario, workers: Optional[int]) -> List[AssertionResult]:
    results = []
    for spec in scenario.filters:
        if not spec.is_regularized:
            continue
        outcome = coupled_one_step(scenario, spec.name)
        results.append(compare(f"mean one-step squared-deviation change of {spec.name} vs plain step",
                               outcome.mean_difference, "<=", DOMINANCE_Z * outcome.stderr,
                               detail=f"{outcome.draws} coupled draws, rho > 0 in {outcome.triggered}"))
    return results
