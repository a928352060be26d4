import math

import pytest
import yaml

from sparselms.config import Settings
from sparselms.exceptions import ScenarioConfigError
from sparselms.main import main, scenario_repo
from sparselms.repositories.result_repository import read_trace, slugify

SMALL_RUN = ["--set", "trials=2", "--set", "horizon=40"]


@pytest.fixture(autouse=True)
def clear_database():
    """Clear the scenario store before each test."""
    scenario_repo.db.clear()
    yield
    scenario_repo.db.clear()


@pytest.fixture
def run_dir(tmp_path):
    """Output directory of a short fig4 run."""
    out = tmp_path / "run"
    assert main(["run", "fig4-white-sparse", "--out", str(out)] + SMALL_RUN) == 0
    return out


def test_list(capsys):
    """Test that list prints one built-in per line."""
    assert main(["list"]) == 0
    names = [line.split("\t")[0] for line in capsys.readouterr().out.splitlines()]
    assert "fig4-white-sparse" in names
    assert "fig13-group-tracking" in names


def test_run_writes_artifacts(run_dir):
    """Test one msd CSV per filter plus summary and resolved config."""
    for name in ("NLMS", "ZA-NLMS", "RZA-NLMS"):
        path = run_dir / f"msd_{slugify(name)}.csv"
        lines = path.read_text().splitlines()
        assert lines[0] == "iteration,msd_linear,msd_db,stderr"
        assert len(lines) == 1 + 41
    summary = (run_dir / "summary.csv").read_text().splitlines()
    assert summary[0] == "filter,msd_linear,msd_db,window_start"
    assert [row.split(",")[0] for row in summary[1:]] == ["NLMS", "ZA-NLMS", "RZA-NLMS"]
    resolved = yaml.safe_load((run_dir / "resolved_config.yaml").read_text())
    assert resolved["trials"] == 2
    assert resolved["master_seed"] == 4


def test_msd_db_column(run_dir):
    """Test msd_db = 10 log10(msd_linear) on every row."""
    columns = read_trace(run_dir / "msd_rza-nlms.csv")
    for linear, db in zip(columns["msd_linear"], columns["msd_db"]):
        assert db == pytest.approx(10 * math.log10(linear), rel=1e-9)


def test_single_trial_has_zero_stderr(tmp_path):
    """Test that trials=1 gives an all-zero stderr column."""
    out = tmp_path / "one"
    assert main(["run", "fig4-white-sparse", "--out", str(out), "--set", "trials=1", "--set", "horizon=20"]) == 0
    assert all(value == 0.0 for value in read_trace(out / "msd_nlms.csv")["stderr"])


def test_run_is_byte_for_byte_deterministic(tmp_path, run_dir):
    """Test identical bytes for a repeated run and for a parallel run."""
    again = tmp_path / "again"
    parallel = tmp_path / "parallel"
    assert main(["run", "fig4-white-sparse", "--out", str(again)] + SMALL_RUN) == 0
    assert main(["run", "fig4-white-sparse", "--out", str(parallel), "--workers", "2"] + SMALL_RUN) == 0
    for path in run_dir.iterdir():
        assert (again / path.name).read_bytes() == path.read_bytes()
        assert (parallel / path.name).read_bytes() == path.read_bytes()


def test_resolved_config_reruns_identically(tmp_path, run_dir):
    """Test that the resolved config reproduces the run."""
    rerun = tmp_path / "rerun"
    assert main(["run", str(run_dir / "resolved_config.yaml"), "--out", str(rerun)]) == 0
    for path in run_dir.glob("*.csv"):
        assert (rerun / path.name).read_bytes() == path.read_bytes()


def test_seed_changes_values_not_structure(tmp_path, run_dir):
    """Test that --seed changes the numbers but not the files."""
    seeded = tmp_path / "seeded"
    assert main(["run", "fig4-white-sparse", "--out", str(seeded), "--seed", "99"] + SMALL_RUN) == 0
    assert sorted(p.name for p in seeded.iterdir()) == sorted(p.name for p in run_dir.iterdir())
    assert (seeded / "msd_nlms.csv").read_bytes() != (run_dir / "msd_nlms.csv").read_bytes()
    assert yaml.safe_load((seeded / "resolved_config.yaml").read_text())["master_seed"] == 99


def test_trial_traces(tmp_path):
    """Test that --trial-traces writes single-trial CSVs."""
    out = tmp_path / "trials"
    assert main(["run", "fig4-white-sparse", "--out", str(out), "--trial-traces", "2"] + SMALL_RUN) == 0
    assert (out / "trial_0_nlms.csv").exists()
    assert (out / "trial_1_rza-nlms.csv").exists()
    assert not (out / "trial_2_nlms.csv").exists()


def test_sweep_artifact(tmp_path):
    """Test that scenarios with a sweep block also write sweep.csv."""
    out = tmp_path / "sweep"
    args = ["run", "fig5-eta-sensitivity", "--out", str(out), "--set", "trials=1", "--set", "horizon=30",
            "--set", "sweep.probe_iteration=20", "--set", "sweep.factors=[0.5, 2.0]"]
    assert main(args) == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "eta_factor,filter,msd_linear,msd_db"
    assert len(lines) == 1 + 4


def test_unknown_scenario(tmp_path, capsys):
    """Test the usage exit status for an unknown scenario."""
    assert main(["run", "nope", "--out", str(tmp_path)]) == 2
    assert "nope" in capsys.readouterr().err
    assert main(["check", "nope"]) == 2


def test_invalid_override(tmp_path, capsys):
    """Test that invalid configuration exits with status 2 and a diagnostic."""
    assert main(["run", "fig4-white-sparse", "--out", str(tmp_path), "--set", "trials=-1"]) == 2
    assert "trials" in capsys.readouterr().err


def test_unwritable_output(tmp_path):
    """Test that an output path below a regular file fails."""
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["run", "fig4-white-sparse", "--out", str(blocker / "out")] + SMALL_RUN) == 2


def test_missing_subcommand():
    """Test the usage exit status without a command."""
    assert main([]) == 2


def test_check_report(capsys):
    """Test that check prints one line per assertion and a total."""
    status = main(["check", "fig4-white-sparse"] + SMALL_RUN)
    out = capsys.readouterr().out
    assert status in (0, 1)
    assert "RZA-NLMS below NLMS" in out
    assert "fig4-white-sparse:" in out.splitlines()[-1]


def test_settings_from_env():
    """Test parallelism and log level from the environment."""
    settings = Settings.from_env({"SPARSELMS_WORKERS": "3", "SPARSELMS_LOG_LEVEL": "debug"})
    assert settings.workers == 3
    assert settings.log_level == "DEBUG"
    assert Settings.from_env({}) == Settings()
    with pytest.raises(ScenarioConfigError):
        Settings.from_env({"SPARSELMS_WORKERS": "0"})


def test_run_writes_true_system(run_dir):
    """Test that system.csv holds the trial-0 system, one row per tap."""
    lines = (run_dir / "system.csv").read_text().splitlines()
    assert lines[0] == "from_iteration,tap,coefficient"
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 100
    assert {row[0] for row in rows} == {"0"}
    assert sum(float(row[2]) != 0.0 for row in rows) == 5


def test_system_artifact_has_one_block_per_version(tmp_path):
    """Test that a shift event adds a second block shifted by its taps."""
    out = tmp_path / "tracking"
    assert main(["run", "fig9-tracking", "--out", str(out), "--set", "trials=1", "--set", "horizon=800"]) == 0
    rows = [line.split(",") for line in (out / "system.csv").read_text().splitlines()[1:]]
    assert len(rows) == 200
    before = [float(row[2]) for row in rows if row[0] == "0"]
    after = [float(row[2]) for row in rows if row[0] == "750"]
    assert after[:90] == before[10:]
    assert after[90:] == [0.0] * 10


def test_event_beyond_horizon_is_a_usage_error(capsys):
    """Test that shortening the horizon past a tracking event exits with status 2."""
    assert main(["check", "fig9-tracking", "--set", "trials=2", "--set", "horizon=500"]) == 2
    assert "outside the horizon" in capsys.readouterr().err


def test_check_with_renamed_filter_is_a_usage_error(capsys):
    """Test that check names the filter it needs when an override renames it."""
    assert main(["check", "fig4-white-sparse", "--set", "filters.1.name=ZA"] + SMALL_RUN) == 2
    assert "ZA-NLMS" in capsys.readouterr().err
