import argparse

from sparselms import __version__
from sparselms.cli import checks, runs, scenarios

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def add_scenario_options(parser: argparse.ArgumentParser) -> None:
    """Options shared by the commands that execute a scenario."""
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a scenario field by dotted path, e.g. trials=1 (repeatable)")
    parser.add_argument("--seed", type=int, default=None, help="master seed, replaces the scenario's")
    parser.add_argument("--workers", type=int, default=None,
                        help="worker processes for the trials (default: $SPARSELMS_WORKERS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparselms",
        description="Regularized LMS/NLMS filters for sparse system identification: "
                    "paired Monte Carlo experiments and their acceptance checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        help="log level for messages on stderr (default: $SPARSELMS_LOG_LEVEL or WARNING)")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    scenarios.register(subparsers)
    runs.register(subparsers, add_scenario_options)
    checks.register(subparsers, add_scenario_options)
    return parser
