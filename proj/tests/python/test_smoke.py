import json

import numpy as np
import pytest

import tpsolve


def test_solve_returns_converged_report():
    report = tpsolve.solve("tp_mh", "rl1d", windows=10, steps_per_window=1)
    assert report["converged"] is True
    assert report["outer_iterations"] == 2
    assert report["solution"].shape == (1, 10)
    assert report["effective_solves"] <= report["total_solves"]


def test_run_experiment_writes_outputs(tmp_path):
    config = {
        "method": "pp_pc_mh",
        "model": {"name": "rl1d"},
        "grid": {"windows": 10, "steps_per_window": 200},
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config))
    out_dir = tmp_path / "out"

    exit_code = tpsolve.run_experiment(str(config_path), str(out_dir), workers=2)

    assert exit_code == 0
    report = json.loads((out_dir / "report.json").read_text())
    assert report["converged"] is True
    assert report["workers"] == 2
    assert (out_dir / "errors.csv").exists()
    assert (out_dir / "solution.csv").exists()


def test_mixed_norm_matches_hand_value():
    u = np.array([1.0, 0.0])
    v = np.array([1.0, 0.5])
    assert tpsolve.mixed_norm(u, v, 1.0, 0.0) == pytest.approx(0.5)
