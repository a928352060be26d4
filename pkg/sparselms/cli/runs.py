import argparse
import logging
from pathlib import Path

from sparselms.config import Settings
from sparselms.experiment.analysis import eta_sensitivity_sweep
from sparselms.experiment.runner import run_monte_carlo, system_segments
from sparselms.repositories.result_repository import ResultRepository
from sparselms.repositories.scenario_repository import ScenarioRepository
from sparselms.schemas.scenario import ScenarioConfig

logger = logging.getLogger(__name__)


def get_scenario_repository() -> ScenarioRepository:
    """Get scenario repository instance."""
    from sparselms.main import scenario_repo
    return scenario_repo


def resolve_scenario(args: argparse.Namespace) -> ScenarioConfig:
    """The referenced scenario with --set and --seed applied."""
    config = get_scenario_repository().resolve(args.scenario)
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"master_seed={args.seed}")
    return config.with_overrides(overrides)


def run_scenario(args: argparse.Namespace, settings: Settings) -> int:
    """Run a scenario and write its MSD traces, summary, trial-0 system and resolved config."""
    config = resolve_scenario(args)
    workers = args.workers or settings.workers
    results = ResultRepository(Path(args.out))
    results.prepare()

    traces = run_monte_carlo(config, workers)
    for trace in traces.values():
        print(results.save_trace(trace))
        if args.trial_traces:
            for path in results.save_trial_traces(trace, args.trial_traces):
                print(path)
    print(results.save_summary(traces))
    print(results.save_system(system_segments(config, 0)))
    if config.sweep is not None:
        points = eta_sensitivity_sweep(config, config.sweep.factors, config.sweep.probe_iteration,
                                       config.sweep.filters, workers)
        print(results.save_sweep(points))
    print(results.save_config(config))
    logger.info("run of %s finished", config.name)
    return 0


def register(subparsers, add_scenario_options) -> None:
    parser = subparsers.add_parser("run", help="run a scenario and write CSV artifacts")
    parser.add_argument("scenario", help="built-in scenario name or path to a YAML scenario file")
    parser.add_argument("--out", required=True, help="output directory for the artifacts")
    parser.add_argument("--trial-traces", type=int, default=0, metavar="K",
                        help="also write the first K single-trial traces per filter")
    add_scenario_options(parser)
    parser.set_defaults(handler=run_scenario)
