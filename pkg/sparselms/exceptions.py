"""
Exception hierarchy shared by the numerical modules, the repositories and the CLI.
"""


class SparseLmsError(Exception):
    """Base class for every error raised by sparselms."""


class DimensionError(SparseLmsError, ValueError):
    """Vector lengths do not agree with each other or with a group partition."""

    def __init__(self, what: str, expected: int, actual: int):
        super().__init__(f"{what}: expected length {expected}, got {actual}")
        self.expected = expected
        self.actual = actual


class DegenerateRegressorError(SparseLmsError):
    """Normalized step size requested for an all-zero regressor."""


class ScenarioConfigError(SparseLmsError):
    """A scenario document or override is invalid."""


class ScenarioNotFoundError(SparseLmsError, KeyError):
    """No built-in scenario with the requested name."""

    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"Scenario '{self.name}' not found"


class UnpairedTracesError(SparseLmsError):
    """Two MSD traces do not come from the same paired Monte Carlo run."""


class ArtifactWriteError(SparseLmsError):
    """An output artifact could not be written."""
