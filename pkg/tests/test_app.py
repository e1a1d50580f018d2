import csv
import io
import json
import logging

import pytest

from app import OscIntApp
from controllers.app_controller import AppController, run_genericity
from core.events import event_manager
from views.report_view import ReportView


def _app():
    stream = io.StringIO()
    return OscIntApp(AppController(ReportView(stream))), stream


def _run(argv):
    app, stream = _app()
    return app.run(argv), stream.getvalue()


def test_predict_corpus_phase():
    code, output = _run(["predict", "--corpus", "thm_a_cubic"])
    assert code == 0
    data = json.loads(output)
    assert data["source"] == "ThmA/ThmC"
    assert data["r"] == "1/3"
    assert data["seed"] == 0


def test_output_is_reproducible():
    argv = ["predict", "--expr", "x1^2*z1 + x1*z1^2", "--seed", "7"]
    assert _run(argv) == _run(argv)


@pytest.mark.parametrize("argv", [
    ["newton"],
    ["newton", "--corpus", "no_such_phase"],
    ["newton", "--expr", "x1*z1 + $"],
    ["newton", "--expr", "x1*z1", "--corpus", "s0"],
    ["pencil", "--phi1", "1,0", "--phi2", "1,0,0"],
    ["sweep", "--corpus", "bilinear", "--lambda-min", "10", "--lambda-max", "5"],
    ["sweep", "--corpus", "bilinear", "--grid", "abc"],
])
def test_validation_failures_exit_with_one(argv):
    code, _ = _run(argv)
    assert code == 1


def test_help_exits_cleanly():
    code, _ = _run(["--help"])
    assert code == 0


def test_newton_reports_delta():
    code, output = _run(["newton", "--corpus", "s0"])
    assert code == 0
    assert json.loads(output)["delta"] == "3/4"


def test_check_reports_s0_conditions():
    code, output = _run(["check", "--corpus", "s0"])
    data = json.loads(output)
    assert code == 0
    assert data["thm14"]["passed"]
    assert data["round_trip"]


def test_unresolved_sweep_is_soft_failure():
    argv = ["sweep", "--corpus", "bilinear", "--grid", "8", "--points", "4"]
    assert _run(argv + ["--strict"])[0] == 2
    code, output = _run(argv)
    assert code == 0
    assert json.loads(output)["slope"] is None


def test_sweep_csv_output():
    code, output = _run(["sweep", "--corpus", "bilinear", "--lambda-min", "1", "--lambda-max", "4",
                         "--points", "4", "--grid", "16", "--format", "csv"])
    assert code == 0
    lines = output.splitlines()
    assert lines[0] == "lambda,norm,grid_n,iters,residual,resolved"
    assert len(lines) == 5


def test_fit_from_csv(tmp_path):
    path = tmp_path / "sweep.csv"
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["lambda", "norm", "grid_n", "iters", "residual", "resolved"])
        for lam in (50.0, 100.0, 200.0, 400.0, 800.0):
            writer.writerow([lam, 3.0 * lam ** -0.5, 4096, 12, 1e-9, "True"])
    code, output = _run(["fit", "--in", str(path)])
    assert code == 0
    assert json.loads(output)["slope"] == pytest.approx(-0.5, abs=1e-12)


def test_fit_rejects_csv_without_columns(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("lambda,norm\n1,1\n", encoding="utf-8")
    assert _run(["fit", "--in", str(path)])[0] == 1


def test_examples_writes_the_corpus(tmp_path):
    code, output = _run(["examples", "--write", str(tmp_path)])
    assert code == 0
    assert len(json.loads(output)["written"]) == 8
    assert len(list(tmp_path.glob("*.json"))) == 8


def test_report_written_to_file_with_metadata(tmp_path):
    out = tmp_path / "report.json"
    code, output = _run(["predict", "--corpus", "bilinear", "--out", str(out)])
    assert code == 0
    assert output == ""
    assert json.loads(out.read_text(encoding="utf-8"))["r"] == "1/2"
    meta = json.loads((tmp_path / "report.json.meta.json").read_text(encoding="utf-8"))
    assert meta["command"] == "predict"
    assert "timestamp" in meta


def test_genericity_rank_one_is_typical():
    result = run_genericity(2, 2, 3, trials=100, seed=1)
    assert result["trials"] == 100
    assert result["rank_one_pass_fraction"] >= 0.99, "seed=1 trials=100"
    assert result["thm14_pass_fraction"] >= 0.99, "seed=1 trials=100"


def test_capped_sweep_fits_but_is_soft_failure():
    argv = ["sweep", "--corpus", "bilinear", "--lambda-min", "100", "--lambda-max", "800",
            "--points", "4", "--grid-cap", "16"]
    assert _run(argv + ["--strict"])[0] == 2
    code, output = _run(argv)
    data = json.loads(output)
    assert code == 0
    assert data["slope"] is not None
    assert len(data["under_resolved"]) == 4


def test_sweep_progress_is_logged_and_handlers_released(caplog):
    with caplog.at_level(logging.INFO, logger="controllers.app_controller"):
        code, _ = _run(["sweep", "--corpus", "bilinear", "--lambda-min", "1", "--lambda-max", "4",
                        "--points", "4", "--grid", "16"])
    assert code == 0
    progress = [r for r in caplog.records if r.name == "controllers.app_controller" and "‖T_λ‖" in r.getMessage()]
    assert len(progress) == 4
    assert "normest.row" not in event_manager.get_registered_events()


def test_genericity_trials_are_logged(caplog):
    with caplog.at_level(logging.INFO, logger="controllers.app_controller"):
        code, _ = _run(["genericity", "--trials", "5"])
    assert code == 0
    trials = [r for r in caplog.records if "Ensayo" in r.getMessage()]
    assert len(trials) == 5
    assert event_manager.get_registered_events() == []
