import argparse

from sparselms.config import Settings
from sparselms.repositories.scenario_repository import ScenarioRepository


def get_scenario_repository() -> ScenarioRepository:
    """Get scenario repository instance."""
    from sparselms.main import scenario_repo
    return scenario_repo


def list_scenarios(args: argparse.Namespace, settings: Settings) -> int:
    """Print the built-in catalog, one scenario per line."""
    for config in get_scenario_repository().get_all():
        line = f"{config.name}\t{config.description}" if config.description else config.name
        print(line)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("list", help="list the built-in scenarios")
    parser.set_defaults(handler=list_scenarios)
