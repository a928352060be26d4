"""
Scenario documents: YAML parsing, serialization and --set overrides.
"""
from typing import Any, Iterable

import yaml
from pydantic import ValidationError

from sparselms.domain.models import Scenario
from sparselms.exceptions import ScenarioConfigError


class ScenarioConfig(Scenario):
    """Schema for a scenario document as stored on disk.

    Same fields as the Scenario domain model; unknown keys are rejected.
    """

    @classmethod
    def from_document(cls, data: Any, source: str = "<document>") -> "ScenarioConfig":
        if not isinstance(data, dict):
            raise ScenarioConfigError(f"{source}: a scenario document must be a mapping")
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            raise ScenarioConfigError(f"{source}: {exc}") from exc

    @classmethod
    def from_yaml(cls, text: str, source: str = "<string>") -> "ScenarioConfig":
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ScenarioConfigError(f"{source}: {exc}") from exc
        return cls.from_document(data, source)

    def to_document(self) -> dict:
        return self.model_dump(mode="json")

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_document(), sort_keys=False)

    def with_overrides(self, overrides: Iterable[str]) -> "ScenarioConfig":
        """Apply ``key.path=value`` overrides; values are parsed as YAML scalars."""
        overrides = list(overrides)
        if not overrides:
            return self
        document = self.to_document()
        for item in overrides:
            apply_override(document, item)
        return self.from_document(document, source="overrides")


def apply_override(document: dict, item: str) -> None:
    key, sep, raw = item.partition("=")
    if not sep or not key:
        raise ScenarioConfigError(f"override '{item}' is not of the form key=value")
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ScenarioConfigError(f"override '{item}': {exc}") from exc

    path = key.split(".")
    node: Any = document
    for depth, part in enumerate(path):
        last = depth == len(path) - 1
        if isinstance(node, list):
            try:
                index = int(part)
                node[index]
            except (ValueError, IndexError):
                raise ScenarioConfigError(f"override '{key}': no list element '{part}'") from None
            if last:
                node[index] = value
            else:
                node = node[index]
        elif isinstance(node, dict):
            if last:
                node[part] = value
            else:
                if node.get(part) is None:
                    node[part] = {}
                node = node[part]
        else:
            raise ScenarioConfigError(f"override '{key}': '{part}' is not inside a mapping or list")
