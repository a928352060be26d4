"""
Runtime settings read from the environment.
"""
import os
from typing import Mapping, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from sparselms.exceptions import ScenarioConfigError

WORKERS_ENV = "SPARSELMS_WORKERS"
LOG_LEVEL_ENV = "SPARSELMS_LOG_LEVEL"


class Settings(BaseModel):
    workers: int = Field(1, ge=1, description="Default number of worker processes for trials")
    log_level: str = Field("WARNING", description="Root log level for the sparselms logger")

    @field_validator('log_level')
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level '{v}'")
        return level

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Settings":
        environ = os.environ if environ is None else environ
        values = {}
        if environ.get(WORKERS_ENV):
            values["workers"] = environ[WORKERS_ENV]
        if environ.get(LOG_LEVEL_ENV):
            values["log_level"] = environ[LOG_LEVEL_ENV]
        try:
            return cls.model_validate(values)
        except ValidationError as exc:
            raise ScenarioConfigError(f"environment: {exc}") from exc
