import logging
from pathlib import Path
from typing import List

from sparselms.exceptions import ScenarioConfigError, ScenarioNotFoundError
from sparselms.repositories.database import InMemoryDatabase
from sparselms.schemas.scenario import ScenarioConfig

logger = logging.getLogger(__name__)

BUILTIN_DIR = Path(__file__).resolve().parent.parent / "scenarios"


class ScenarioRepository:
    """Repository for the built-in scenario catalog and scenario files."""

    def __init__(self, db: InMemoryDatabase[ScenarioConfig], builtin_dir: Path = BUILTIN_DIR):
        self.db = db
        self.builtin_dir = builtin_dir

    def load_builtins(self) -> None:
        """Read every checked-in scenario document into the store."""
        for path in sorted(self.builtin_dir.glob("*.yaml")):
            config = self.load_file(path)
            if self.db.exists(config.name):
                raise ScenarioConfigError(f"{path}: duplicate built-in scenario '{config.name}'")
            self.db.create(config.name, config)
        logger.debug("loaded %d built-in scenarios from %s", len(self.db.keys()), self.builtin_dir)

    def _ensure_loaded(self) -> None:
        if not self.db.keys():
            self.load_builtins()

    def get_all(self) -> List[ScenarioConfig]:
        """Get all built-in scenarios, sorted by name."""
        self._ensure_loaded()
        return sorted(self.db.get_all(), key=lambda config: config.name)

    def get_by_name(self, name: str) -> ScenarioConfig:
        """Get a built-in scenario by name."""
        self._ensure_loaded()
        config = self.db.get(name)
        if config is None:
            raise ScenarioNotFoundError(name)
        return config

    def load_file(self, path: Path) -> ScenarioConfig:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ScenarioConfigError(f"cannot read {path}: {exc}") from exc
        return ScenarioConfig.from_yaml(text, source=str(path))

    def resolve(self, reference: str) -> ScenarioConfig:
        """A scenario file path, or else the name of a built-in."""
        path = Path(reference)
        if path.suffix in (".yaml", ".yml") or path.is_file():
            return self.load_file(path)
        return self.get_by_name(reference)
