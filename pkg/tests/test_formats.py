import json

import pytest

from conftest import PUBLISHED_K, make_traces
from errors import InputOutputError, SchemaError
from formats import (
    ExperimentDocument,
    ModelDocument,
    ProfileDocument,
    ResponsesDocument,
    parse_trace_file,
    read_document,
    read_model,
    read_profile,
    render_document,
    write_document,
    write_trace_file,
)
from models import BetaParams, CellClass, PopulationSpec
from puf import classify_cells, enroll, fit_mle, reconstruct, run_experiment


def write_csv(tmp_path, text, name="traces.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_parse_small_trace_file(tmp_path):
    traces = parse_trace_file(write_csv(tmp_path, "cell_id,k,ones\n0,8,8\n1,8,0\n2,8,3\n"))
    assert [trace.cell_class for trace in traces] == [CellClass.STABLE_ONE, CellClass.STABLE_ZERO, CellClass.VARIABLE]
    assert [trace.k for trace in traces] == [8, 8, 8]


def test_parse_published_population(tmp_path):
    rows = [f"{i},{PUBLISHED_K},{PUBLISHED_K}" for i in range(520)]
    rows += [f"{i},{PUBLISHED_K},0" for i in range(520, 969)]
    rows += [f"{i},{PUBLISHED_K},{1000 * (i - 968)}" for i in range(969, 1024)]
    traces = parse_trace_file(write_csv(tmp_path, "cell_id,k,ones\n" + "\n".join(rows) + "\n"))
    partition = classify_cells(traces)
    assert (len(partition.stable_one), len(partition.stable_zero), len(partition.variable)) == (520, 449, 55)


@pytest.mark.parametrize(
    "text, row",
    [
        ("cell_id,k,ones\n0,8,3\n5,8,9\n", 2),
        ("cell_id,k,ones\n0,8,3\n0,8,4\n", 2),
        ("cell_id,k,ones\n0,8,3\n1,9,4\n", 2),
        ("cell_id,k,ones\n0,8,x\n", 1),
        ("cell_id,k,ones\n-1,8,3\n", 1),
        ("cell_id,k,ones\n0,0,0\n", 1),
    ],
)
def test_parse_errors_name_the_row(tmp_path, text, row):
    with pytest.raises(SchemaError) as excinfo:
        parse_trace_file(write_csv(tmp_path, text))
    assert excinfo.value.row == row
    assert str(excinfo.value).startswith(f"row {row}: ")


@pytest.mark.parametrize(
    "text", ["cell,k,ones\n0,8,3\n", "cell_id,k\n0,8\n", "cell_id,k,ones,extra\n0,8,3,1\n", "cell_id,k,ones\n", ""]
)
def test_parse_rejects_bad_structure(tmp_path, text):
    with pytest.raises(SchemaError):
        parse_trace_file(write_csv(tmp_path, text))


def test_parse_missing_file(tmp_path):
    with pytest.raises(InputOutputError):
        parse_trace_file(tmp_path / "absent.csv")


def test_written_traces_are_sorted_and_parse_back(tmp_path):
    traces = make_traces(50, [5, 50, 0, 17])
    path = tmp_path / "out.csv"
    write_trace_file(path, list(reversed(traces)))
    assert path.read_text(encoding="utf-8") == "cell_id,k,ones\n0,50,5\n1,50,50\n2,50,0\n3,50,17\n"
    assert parse_trace_file(path) == traces


def test_write_trace_file_failure_is_an_io_error(tmp_path):
    with pytest.raises(InputOutputError):
        write_trace_file(tmp_path / "missing" / "out.csv", make_traces(10, [1, 2]))


def test_profile_round_trip(tmp_path, enrollment_traces):
    profile = enroll(enrollment_traces, t_bits=3)
    path = tmp_path / "profile.json"
    write_document(path, ProfileDocument.from_profile(profile))
    assert read_profile(path) == profile


def test_profile_json_layout(enrollment_traces):
    profile = enroll(enrollment_traces, t_bits=2)
    payload = json.loads(render_document(ProfileDocument.from_profile(profile)))
    assert list(payload) == [
        "version", "t_bits", "alphabet", "alpha", "beta", "k", "min_freq", "max_freq", "thresholds", "cells",
    ]
    assert payload["version"] == 1 and payload["alphabet"] == 4
    assert [cell["id"] for cell in payload["cells"]] == list(range(len(enrollment_traces)))
    stable, variable = payload["cells"][0], payload["cells"][-1]
    assert stable == {"id": 0, "class": "stable0", "bits": "0"}
    assert list(variable) == ["id", "class", "symbol", "bits"]


def test_rendering_is_canonical(enrollment_traces):
    document = ProfileDocument.from_profile(enroll(enrollment_traces, t_bits=2))
    text = render_document(document)
    assert text == render_document(ProfileDocument.from_profile(enroll(enrollment_traces, t_bits=2)))
    assert text.endswith("}\n") and "\n  " in text


def test_profile_with_wrong_alphabet_is_rejected(tmp_path, enrollment_traces):
    payload = json.loads(render_document(ProfileDocument.from_profile(enroll(enrollment_traces, t_bits=2))))
    payload["alphabet"] = 8
    path = tmp_path / "profile.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    with pytest.raises(SchemaError):
        read_profile(path)


def test_profile_with_wrong_version_is_rejected(tmp_path, enrollment_traces):
    payload = json.loads(render_document(ProfileDocument.from_profile(enroll(enrollment_traces, t_bits=2))))
    payload["version"] = 2
    path = tmp_path / "profile.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    with pytest.raises(SchemaError):
        read_profile(path)


def test_read_document_errors(tmp_path):
    with pytest.raises(InputOutputError):
        read_document(tmp_path / "absent.json", ModelDocument)
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError):
        read_document(broken, ModelDocument)
    incomplete = tmp_path / "incomplete.json"
    incomplete.write_text('{"alpha": 1.0}', encoding="utf-8")
    with pytest.raises(SchemaError):
        read_document(incomplete, ModelDocument)


def test_model_document(tmp_path):
    fit = fit_mle([0.1, 0.2, 0.35, 0.5, 0.8, 0.9])
    path = tmp_path / "model.json"
    write_document(path, ModelDocument.from_fit(fit))
    payload = json.loads(path.read_text(encoding="utf-8"))
    assert list(payload) == ["alpha", "beta", "method", "sample_count", "log_likelihood", "converged"]
    assert payload["method"] == "mle" and payload["sample_count"] == 6
    assert read_model(path) == fit.params


def test_responses_document_omits_stable_symbols(enrollment_traces):
    profile = enroll(enrollment_traces, t_bits=2)
    document = ResponsesDocument(t_bits=2, cells=reconstruct(enrollment_traces, profile))
    payload = json.loads(render_document(document))
    assert payload["version"] == 1
    assert all(("symbol" in cell) == (cell["class"] == "variable") for cell in payload["cells"])


def test_experiment_document():
    spec = PopulationSpec(n_cells=60, params=BetaParams(alpha=0.5, beta=0.5), k=100, seed=1, repeats=2)
    result = run_experiment(spec, 2)
    payload = json.loads(render_document(ExperimentDocument.from_result(result)))
    assert list(payload) == [
        "spec", "t_bits", "profile", "per_repeat", "mean_symbol_error_rate", "mean_bit_error_rate",
        "true_probabilities",
    ]
    assert payload["spec"]["params"] == {"alpha": 0.5, "beta": 0.5}
    assert len(payload["per_repeat"]) == 1
    assert payload["true_probabilities"] == result.true_probabilities
