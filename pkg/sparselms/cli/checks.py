import argparse

from sparselms.cli.runs import resolve_scenario
from sparselms.config import Settings
from sparselms.experiment.acceptance import run_checks


def check_scenario(args: argparse.Namespace, settings: Settings) -> int:
    """Run the registered assertions of a built-in and print the report."""
    config = resolve_scenario(args)
    results = run_checks(config, args.workers or settings.workers)
    for result in results:
        print(result.describe())
    failed = sum(not result.passed for result in results)
    print(f"{config.name}: {len(results) - failed} passed, {failed} failed")
    return 1 if failed else 0


def register(subparsers, add_scenario_options) -> None:
    parser = subparsers.add_parser("check", help="run a built-in scenario's acceptance assertions")
    parser.add_argument("scenario", help="built-in scenario name")
    add_scenario_options(parser)
    parser.set_defaults(handler=check_scenario)
