import logging
import sys
from typing import List, Optional

from sparselms.cli.router import EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser
from sparselms.config import Settings
from sparselms.exceptions import (
    ArtifactWriteError,
    DimensionError,
    ScenarioConfigError,
    ScenarioNotFoundError,
    SparseLmsError,
)
from sparselms.repositories.database import InMemoryDatabase
from sparselms.repositories.scenario_repository import ScenarioRepository
from sparselms.schemas.scenario import ScenarioConfig

logger = logging.getLogger("sparselms")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Initialize in-memory store; built-ins are read on first access
scenario_db = InMemoryDatabase[ScenarioConfig]()

# Initialize repositories
scenario_repo = ScenarioRepository(scenario_db)


def configure_logging(level: str) -> None:
    """Send sparselms log records to stderr at ``level``."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.handlers[:] = [handler]
    logger.setLevel(level)


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point of the ``sparselms`` command; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    try:
        settings = Settings.from_env()
        configure_logging(args.log_level or settings.log_level)
        return args.handler(args, settings)
    except ScenarioNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ScenarioConfigError, DimensionError) as exc:
        print(f"error: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArtifactWriteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SparseLmsError as exc:
        logger.exception("run failed")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
