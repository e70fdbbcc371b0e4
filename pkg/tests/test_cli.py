import json

import pytest

import pipeline
from main import run
from models import BetaParams, Command, FitMethod, FitReport, RunConfig
from pipeline import PipelineManager, trace_file_name
from errors import ConfigurationError


SIMULATE = ["--alpha", "0.5", "--beta", "0.5", "--cells", "200", "--k", "1000", "--repeats", "3", "--seed", "5"]


def simulate(out_dir):
    assert run(["simulate", *SIMULATE, "--out", str(out_dir)]) == 0
    return out_dir


def test_thresholds_reproduce_published_quaternary_set(tmp_path):
    out = tmp_path / "thresholds.json"
    status = run(["thresholds", "--alpha", "0.0032", "--beta", "0.0028", "--k", "1048575", "--t-bits", "2", "--out", str(out)])
    assert status == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert list(payload) == ["t_bits", "alphabet", "alpha", "beta", "min_freq", "max_freq", "thresholds"]
    assert payload["alphabet"] == 4
    low, middle, high = payload["thresholds"]
    assert low == pytest.approx(0.0010616, rel=0.15)
    assert middle == pytest.approx(0.5049029, abs=5e-3)
    assert 1 - high == pytest.approx(1 - 0.998969, rel=0.15)


def test_simulate_writes_traces_and_experiment(tmp_path):
    out_dir = simulate(tmp_path / "run")
    assert sorted(path.name for path in out_dir.iterdir()) == [
        "experiment.json", trace_file_name(0), trace_file_name(1), trace_file_name(2),
    ]
    experiment = json.loads((out_dir / "experiment.json").read_text(encoding="utf-8"))
    assert experiment["spec"]["n_cells"] == 200
    assert len(experiment["per_repeat"]) == 2


def test_pipeline_closure_on_self_comparison(tmp_path):
    out_dir = simulate(tmp_path / "run")
    traces = str(out_dir / trace_file_name(0))
    profile = tmp_path / "profile.json"
    metrics = tmp_path / "metrics.json"

    assert run(["enroll", "--traces", traces, "--out", str(profile)]) == 0
    assert run(["evaluate", "--traces", traces, "--profile", str(profile), "--out", str(metrics)]) == 0
    report = json.loads(metrics.read_text(encoding="utf-8"))
    assert report["symbol_error_rate"] == 0.0
    assert report["bit_error_rate"] == 0.0
    assert report["n_cells"] == 200


def test_pipeline_outputs_are_byte_identical(tmp_path):
    outputs = []
    for attempt in ("a", "b"):
        base = tmp_path / attempt
        out_dir = simulate(base / "run")
        profile, responses, key = base / "profile.json", base / "responses.json", base / "key.txt"
        metrics = base / "metrics.json"
        assert run(["enroll", "--traces", str(out_dir / trace_file_name(0)), "--t-bits", "3", "--out", str(profile)]) == 0
        measured = str(out_dir / trace_file_name(1))
        assert run(["reconstruct", "--traces", measured, "--profile", str(profile), "--out", str(responses), "--bits", str(key)]) == 0
        assert run(["evaluate", "--traces", measured, "--profile", str(profile), "--out", str(metrics)]) == 0
        files = [out_dir / "experiment.json", out_dir / trace_file_name(2), profile, responses, key, metrics]
        outputs.append([path.read_bytes() for path in files])
    assert outputs[0] == outputs[1]

    key_text = (tmp_path / "a" / "key.txt").read_text(encoding="utf-8")
    assert key_text.endswith("\n") and set(key_text.strip()) <= {"0", "1"}


def test_fit_writes_model(tmp_path):
    out_dir = simulate(tmp_path / "run")
    model = tmp_path / "model.json"
    assert run(["fit", "--traces", str(out_dir / trace_file_name(0)), "--fit", "moments", "--out", str(model)]) == 0
    payload = json.loads(model.read_text(encoding="utf-8"))
    assert payload["method"] == "moments"
    assert payload["log_likelihood"] is None

    thresholds = tmp_path / "thresholds.json"
    status = run(["thresholds", "--model", str(model), "--traces", str(out_dir / trace_file_name(0)), "--out", str(thresholds)])
    assert status == 0
    assert json.loads(thresholds.read_text(encoding="utf-8"))["min_freq"] == 0.001


def test_fit_exits_3_without_convergence(tmp_path, monkeypatch, capsys):
    out_dir = simulate(tmp_path / "run")

    def stalled(samples, method, censoring=None):
        return FitReport(
            params=BetaParams(alpha=0.4, beta=0.6), method=FitMethod.MLE, sample_count=len(samples), converged=False
        )

    monkeypatch.setattr(pipeline, "fit_beta", stalled)
    model = tmp_path / "model.json"
    assert run(["fit", "--traces", str(out_dir / trace_file_name(0)), "--out", str(model)]) == 3
    assert json.loads(model.read_text(encoding="utf-8"))["converged"] is False
    assert "error: numeric.convergence:" in capsys.readouterr().err


def test_fit_and_enroll_with_censored_likelihood(tmp_path):
    out_dir = simulate(tmp_path / "run")
    traces = str(out_dir / trace_file_name(0))
    model, profile = tmp_path / "model.json", tmp_path / "profile.json"
    assert run(["fit", "--traces", traces, "--fit", "censored", "--out", str(model)]) == 0
    payload = json.loads(model.read_text(encoding="utf-8"))
    assert payload["method"] == "censored" and payload["converged"] is True
    assert payload["sample_count"] == 200

    assert run(["enroll", "--traces", traces, "--fit", "censored", "--out", str(profile)]) == 0
    enrolled = json.loads(profile.read_text(encoding="utf-8"))
    assert (enrolled["alpha"], enrolled["beta"]) == (payload["alpha"], payload["beta"])


@pytest.mark.parametrize("fmt", ["text", "json"])
def test_report(tmp_path, fmt):
    out_dir = simulate(tmp_path / "run")
    out = tmp_path / f"report.{fmt}"
    args = ["report", "--format", fmt, "--out", str(out)]
    for repeat in range(3):
        args += ["--traces", str(out_dir / trace_file_name(repeat))]
    assert run(args) == 0

    text = out.read_text(encoding="utf-8")
    if fmt == "json":
        rows = json.loads(text)["rows"]
        assert [row["alphabet"] for row in rows] == [2, 4, 8, 16]
        assert rows[0]["symbol_error_rate"] is None
        lengths = [row["effective_key_length"] for row in rows[1:]]
        assert lengths == sorted(lengths)
    else:
        labels = [line.split()[0] for line in text.splitlines()[2:]]
        assert labels == ["binary", "4-ary", "8-ary", "16-ary"]


def test_report_without_measurements(tmp_path):
    out_dir = simulate(tmp_path / "run")
    out = tmp_path / "report.json"
    assert run(["report", "--format", "json", "--traces", str(out_dir / trace_file_name(0)), "--out", str(out)]) == 0
    rows = json.loads(out.read_text(encoding="utf-8"))["rows"]
    assert all(row["bit_error_rate"] is None for row in rows)


@pytest.mark.parametrize(
    "argv",
    [
        ["enroll", "--out", "x.json"],
        ["enroll", "--traces", "a.csv"],
        ["thresholds", "--alpha", "1", "--out", "x.json", "--k", "10"],
        ["simulate", "--alpha", "1", "--beta", "1", "--out", "run"],
        ["enroll", "--traces", "a.csv", "--out", "x.json", "--t-bits", "9"],
        ["enroll", "--traces", "a.csv", "--out", "x.json", "--fit", "bayes"],
        ["enroll", "--traces", "a.csv", "--out", "x.json", "--no-such-flag"],
        ["explode"],
    ],
)
def test_usage_errors_exit_1(argv):
    assert run(argv) == 1


def test_missing_flags_are_listed_together(capsys):
    assert run(["reconstruct"]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error: usage.config: ")
    assert "--out is required" in err and "--profile is required" in err
    assert len(err.strip().splitlines()) == 1


def test_data_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("cell_id,k,ones\n5,8,9\n", encoding="utf-8")
    assert run(["enroll", "--traces", str(bad), "--out", str(tmp_path / "p.json")]) == 2
    assert "error: data.schema: row 1:" in capsys.readouterr().err

    stable = tmp_path / "stable.csv"
    stable.write_text("cell_id,k,ones\n0,8,8\n1,8,0\n", encoding="utf-8")
    assert run(["enroll", "--traces", str(stable), "--out", str(tmp_path / "p.json")]) == 2
    assert "data.too_few_variable_cells" in capsys.readouterr().err

    assert run(["enroll", "--traces", str(tmp_path / "absent.csv"), "--out", str(tmp_path / "p.json")]) == 2


def test_reconstruct_with_foreign_cells_exits_2(tmp_path):
    out_dir = simulate(tmp_path / "run")
    profile = tmp_path / "profile.json"
    assert run(["enroll", "--traces", str(out_dir / trace_file_name(0)), "--out", str(profile)]) == 0
    other = tmp_path / "other.csv"
    other.write_text("cell_id,k,ones\n0,1000,3\n", encoding="utf-8")
    assert run(["reconstruct", "--traces", str(other), "--profile", str(profile), "--out", str(tmp_path / "r.json")]) == 2


def test_validate_configuration_accepts_complete_config(tmp_path):
    config = RunConfig(command=Command.ENROLL, traces=[tmp_path / "a.csv"], out=tmp_path / "p.json", t_bits=4)
    assert PipelineManager().validate_configuration(config) is config


def test_validate_configuration_thresholds_needs_shape_and_k(tmp_path):
    config = RunConfig(command=Command.THRESHOLDS, out=tmp_path / "t.json")
    with pytest.raises(ConfigurationError) as excinfo:
        PipelineManager().validate_configuration(config)
    assert "--model" in str(excinfo.value) and "--k or --traces" in str(excinfo.value)
