import csv
import logging
import re
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from sparselms.exceptions import ArtifactWriteError
from sparselms.experiment.analysis import SweepPoint, steady_state_msd, steady_state_window
from sparselms.experiment.runner import MsdTrace, to_db
from sparselms.schemas.results import MsdRow, SummaryRow, SweepRow, SystemRow
from sparselms.schemas.scenario import ScenarioConfig

logger = logging.getLogger(__name__)

RESOLVED_CONFIG = "resolved_config.yaml"
SUMMARY = "summary.csv"
SWEEP = "sweep.csv"
SYSTEM = "system.csv"


def slugify(name: str) -> str:
    """File-name form of a filter name."""
    return re.sub(r'[^a-z0-9._-]', '_', name.lower())


class ResultRepository:
    """Writes the artifacts of one run into an output directory."""

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)

    def prepare(self) -> None:
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ArtifactWriteError(f"cannot create output directory {self.out_dir}: {exc}") from exc

    def _write_csv(self, filename: str, header: List[str], rows: Iterable[List[str]]) -> Path:
        path = self.out_dir / filename
        try:
            with path.open("w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(header)
                writer.writerows(rows)
        except OSError as exc:
            raise ArtifactWriteError(f"cannot write {path}: {exc}") from exc
        logger.info("wrote %s", path)
        return path

    def msd_path(self, filter_name: str) -> Path:
        return self.out_dir / f"msd_{slugify(filter_name)}.csv"

    def save_trace(self, trace: MsdTrace) -> Path:
        mean, db, stderr = trace.mean, trace.db, trace.stderr
        rows = (
            MsdRow(iteration=n, msd_linear=mean[n], msd_db=db[n], stderr=stderr[n]).to_csv_row()
            for n in range(trace.horizon + 1)
        )
        return self._write_csv(self.msd_path(trace.filter_name).name, MsdRow.columns(), rows)

    def save_trial_traces(self, trace: MsdTrace, count: int) -> List[Path]:
        """Write the first ``count`` individual trials of a trace; stderr is zero."""
        paths = []
        for k in range(min(count, trace.trials)):
            samples = trace.samples[k]
            db = to_db(samples)
            rows = (
                MsdRow(iteration=n, msd_linear=samples[n], msd_db=db[n], stderr=0.0).to_csv_row()
                for n in range(trace.horizon + 1)
            )
            paths.append(self._write_csv(f"trial_{k}_{slugify(trace.filter_name)}.csv", MsdRow.columns(), rows))
        return paths

    def save_summary(self, traces: Dict[str, MsdTrace]) -> Path:
        rows = []
        for name, trace in traces.items():
            value = steady_state_msd(trace)
            rows.append(SummaryRow(filter=name, msd_linear=value, msd_db=float(to_db(value)),
                                   window_start=steady_state_window(trace.horizon)).to_csv_row())
        return self._write_csv(SUMMARY, SummaryRow.columns(), rows)

    def save_sweep(self, points: Sequence[SweepPoint]) -> Path:
        rows = (
            SweepRow(eta_factor=p.factor, filter=p.filter_name,
                     msd_linear=p.msd_linear, msd_db=p.msd_db).to_csv_row()
            for p in points
        )
        return self._write_csv(SWEEP, SweepRow.columns(), rows)

    def save_system(self, segments: Sequence[Tuple[int, np.ndarray]]) -> Path:
        """True impulse response of one trial, one block of rows per version."""
        rows = (
            SystemRow(from_iteration=start, tap=k, coefficient=w[k]).to_csv_row()
            for start, w in segments
            for k in range(w.shape[0])
        )
        return self._write_csv(SYSTEM, SystemRow.columns(), rows)

    def save_config(self, config: ScenarioConfig) -> Path:
        path = self.out_dir / RESOLVED_CONFIG
        try:
            path.write_text(config.to_yaml(), encoding="utf-8")
        except OSError as exc:
            raise ArtifactWriteError(f"cannot write {path}: {exc}") from exc
        logger.info("wrote %s", path)
        return path


def read_trace(path: Path) -> Dict[str, np.ndarray]:
    """Columns of an msd CSV as float arrays."""
    with Path(path).open(newline="", encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    return {column: np.array([float(row[column]) for row in rows]) for column in MsdRow.columns()}
