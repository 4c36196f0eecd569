import json

import pandas as pd
import pytest

from sigmak.utils import sweep
from sigmak.utils.classifier import ALL_LEAVES
from sigmak.utils.errors import IntegrationError
from sigmak.utils.ode_engine import IntegrationConfig, integrate
from sigmak.utils.sweep import SweepCell, build_grid, missing_leaves, run_cell, run_sweep, summarize, write_sweep


@pytest.fixture
def small_grid():
    return build_grid(n_values=[5], k_values=[2], signs=[1], h_values=["-1", "0", "0.6", "h*"], branches=[1])


def test_build_grid(small_grid) -> None:
    assert [(cell.h_label, cell.h) for cell in small_grid][:3] == [("-1", -1.0), ("0", 0.0), ("0.6", 0.6)]
    assert small_grid[3].h == pytest.approx(0.534992, abs=1e-6)
    assert [cell.index for cell in small_grid] == [0, 1, 2, 3]


def test_build_grid_drops_missing_thresholds_and_large_k() -> None:
    cells = build_grid(n_values=[4], k_values=[2, 5], signs=[1], h_values=["h*", "0"], branches=[1])
    assert [(cell.k, cell.h_label) for cell in cells] == [(2, "0")]


def test_build_grid_expands_components() -> None:
    cells = build_grid(n_values=[3], k_values=[2], signs=[-1], h_values=["h*", "3"], branches=[1])
    assert [(cell.h_label, cell.xi_tt_sign) for cell in cells] == [
        ("h*", -1), ("h*", 0), ("h*", 1), ("3", -1), ("3", 1)
    ]


def test_run_cell_statuses() -> None:
    inadmissible = run_cell(SweepCell(0, 5, 2, 1, "0.6", 0.6, 1), IntegrationConfig())
    assert inadmissible.status == "inadmissible"
    assert inadmissible.constraint == "Thm 1 Case I.3(a) requires h ≤ h*"
    rejected = run_cell(SweepCell(1, 5, 2, 1, "0", 0.0, 0), IntegrationConfig())
    assert rejected.status == "rejected"
    classified = run_cell(SweepCell(2, 5, 2, 1, "0", 0.0, 1), IntegrationConfig(), spot_integration=False)
    assert classified.status == "classified"
    assert classified.report.case_path == "Thm1.I.1"
    assert classified.events == []


def test_run_cell_spot_integration() -> None:
    result = run_cell(SweepCell(0, 5, 2, 1, "-1", -1.0, 1), IntegrationConfig())
    assert result.case_path == "Thm1.I.2"
    assert result.events.count("NullPoint") == 2
    assert result.attempts == 1
    assert result.state_consistent
    assert result.drift < 1e-6


def test_integration_is_retried_with_smaller_steps(monkeypatch) -> None:
    seen = []

    def flaky(state, params, config):
        seen.append(config.max_step)
        if len(seen) == 1:
            raise IntegrationError("step size underflow")
        return integrate(state, params, config)

    monkeypatch.setattr(sweep, "integrate", flaky)
    result = run_cell(SweepCell(0, 5, 2, 1, "0", 0.0, 1), IntegrationConfig(max_step=0.4))
    assert result.attempts == 2
    assert seen == [0.4, 0.2]
    assert result.status == "classified"


def test_exhausted_retries_are_reported(monkeypatch) -> None:
    def failing(state, params, config):
        raise IntegrationError("step size underflow")

    monkeypatch.setattr(sweep, "integrate", failing)
    result = run_cell(SweepCell(0, 5, 2, 1, "0", 0.0, 1), IntegrationConfig())
    assert result.status == "integration_failed"
    assert result.case_path == "Thm1.I.1"
    assert "step size underflow" in result.error


def test_run_sweep_and_outputs(small_grid, tmp_path) -> None:
    results = run_sweep(small_grid, spot_integration=False)
    assert [result.status for result in results] == ["classified", "classified", "inadmissible", "classified"]
    assert [result.case_path for result in results] == ["Thm1.I.2", "Thm1.I.1", None, "Thm1.I.3a"]
    missing = missing_leaves(results)
    assert "Thm1.I.1" not in missing
    assert len(missing) == len(ALL_LEAVES) - 3

    summary, counts = summarize(results)
    assert summary["status"].tolist() == ["classified", "classified", "inadmissible", "classified"]
    assert set(counts["case_path"]) == set(ALL_LEAVES)

    out_dir = write_sweep(results, tmp_path / "sweep")
    cell = json.loads((out_dir / "cell_2.json").read_text())
    assert cell["constraint"] == "Thm 1 Case I.3(a) requires h ≤ h*"
    written = pd.read_csv(out_dir / "counts.csv")
    assert written.loc[written["case_path"] == "Thm1.I.1", "count"].item() == 1
    assert len(pd.read_csv(out_dir / "summary.csv")) == 4


def test_six_dimensional_round_sphere_cell() -> None:
    result = run_cell(SweepCell(0, 6, 2, 1, "0", 0.0, 1), IntegrationConfig())
    assert result.case_path == "Thm1.I.1"
    assert result.status == "classified"
    assert result.drift < 1e-8


@pytest.mark.slow
def test_default_grid_runs_to_completion() -> None:
    cells = build_grid()
    results = [run_cell(cell, IntegrationConfig()) for cell in cells]
    assert [result.index for result in results] == list(range(len(cells)))
    statuses = {result.status for result in results}
    assert statuses <= {"classified", "inadmissible", "rejected", "integration_failed"}
    assert "classified" in statuses
