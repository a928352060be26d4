from typing import List

from pydantic import BaseModel, Field


def format_float(value: float) -> str:
    """Shortest round-trip representation, so CSV bytes depend only on the values."""
    return repr(float(value))


class MsdRow(BaseModel):
    """Schema for one row of msd_<filter>.csv."""
    iteration: int = Field(..., ge=0)
    msd_linear: float = Field(..., ge=0)
    msd_db: float
    stderr: float = Field(..., ge=0)

    @classmethod
    def columns(cls) -> List[str]:
        return ["iteration", "msd_linear", "msd_db", "stderr"]

    def to_csv_row(self) -> List[str]:
        return [str(self.iteration), format_float(self.msd_linear),
                format_float(self.msd_db), format_float(self.stderr)]


class SummaryRow(BaseModel):
    """Schema for one row of summary.csv: steady-state MSD of one filter."""
    filter: str
    msd_linear: float = Field(..., ge=0)
    msd_db: float
    window_start: int = Field(..., ge=0)

    @classmethod
    def columns(cls) -> List[str]:
        return ["filter", "msd_linear", "msd_db", "window_start"]

    def to_csv_row(self) -> List[str]:
        return [self.filter, format_float(self.msd_linear), format_float(self.msd_db), str(self.window_start)]


class SweepRow(BaseModel):
    """Schema for one row of sweep.csv."""
    eta_factor: float = Field(..., gt=0)
    filter: str
    msd_linear: float = Field(..., ge=0)
    msd_db: float

    @classmethod
    def columns(cls) -> List[str]:
        return ["eta_factor", "filter", "msd_linear", "msd_db"]

    def to_csv_row(self) -> List[str]:
        return [format_float(self.eta_factor), self.filter,
                format_float(self.msd_linear), format_float(self.msd_db)]


class SystemRow(BaseModel):
    """Schema for one row of system.csv: a true coefficient from an iteration on."""
    from_iteration: int = Field(..., ge=0)
    tap: int = Field(..., ge=0)
    coefficient: float

    @classmethod
    def columns(cls) -> List[str]:
        return ["from_iteration", "tap", "coefficient"]

    def to_csv_row(self) -> List[str]:
        return [str(self.from_iteration), str(self.tap), format_float(self.coefficient)]


class AssertionResult(BaseModel):
    """Outcome of one acceptance assertion of `check`."""
    name: str
    measured: float
    threshold: float
    comparison: str = Field(..., pattern=r'^(<|<=|>=|>|within)$')
    passed: bool
    detail: str = ""

    def describe(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        line = f"[{verdict}] {self.name}: measured {self.measured:.4g} {self.comparison} {self.threshold:.4g}"
        return f"{line} ({self.detail})" if self.detail else line
