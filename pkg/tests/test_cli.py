"""Command-line contract: golden files, exit codes, deterministic reports."""

import io
import json
import math
import subprocess
import sys
from contextlib import redirect_stdout
from pathlib import Path

import pytest

from nvk.cli import main

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def inverse_descriptor(tmp_path):
    doc = {"schema": "nvk-1", "a": 0.0, "b": [0.0],
           "measure": {"type": "atomic", "dimension": 1, "atoms": [[0.0, math.pi]]}}
    path = tmp_path / "q.json"
    path.write_text(json.dumps(doc))
    return str(path)


def run_main(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        rc = main(argv)
    return rc, buf.getvalue()


def test_eval_matches_golden(inverse_descriptor):
    rc, out = run_main(["eval", inverse_descriptor, "--z", "0+1i", "--z", "1+1i"])
    assert rc == 0
    assert out == (GOLDEN / "eval_inverse.json").read_text()


def test_eval_rejects_lower_half_plane(inverse_descriptor, capsys):
    rc, _ = run_main(["eval", inverse_descriptor, "--z", "0-1i"])
    assert rc == 2
    assert "poly-upper half-plane" in capsys.readouterr().err


def test_eval_rejects_malformed_literal(inverse_descriptor):
    rc, _ = run_main(["eval", inverse_descriptor, "--z", "1+2j"])
    assert rc == 2


def test_eval_linear_descriptor(tmp_path):
    doc = {"schema": "nvk-1", "a": 0.0, "b": [1.0, 1.0],
           "measure": {"type": "atomic", "dimension": 2, "atoms": []}}
    path = tmp_path / "lin.json"
    path.write_text(json.dumps(doc))
    rc, out = run_main(["eval", str(path), "--z", "0+1i,0+1i"])
    assert rc == 0
    assert json.loads(out)["results"][0]["value"] == "0+2i"


def test_eval_numerical_failure_exit_code(tmp_path):
    doc = {"schema": "nvk-1", "a": 0.0, "b": [0.0, 0.0],
           "measure": {"type": "lebesgue", "dimension": 2, "density": "1+t1^2"}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    rc, _ = run_main(["eval", str(path), "--z", "0+1i,0+1i"])
    assert rc == 3


def test_transform_matches_golden(inverse_descriptor, tmp_path):
    out_path = tmp_path / "out.json"
    rc, _ = run_main(["transform", inverse_descriptor, "--k", "0.5,0.5",
                      "--out", str(out_path)])
    assert rc == 0
    assert out_path.read_text() == (GOLDEN / "transform_half.json").read_text()


def test_transform_roundtrip_evaluates(inverse_descriptor, tmp_path):
    out_path = tmp_path / "out.json"
    run_main(["transform", inverse_descriptor, "--k", "0.5,0.25,0.25",
              "--out", str(out_path)])
    doc = json.loads(out_path.read_text())
    assert doc["measure"]["b"] == [0.5, 1.0]
    assert doc["measure"]["scale"] == 2.0
    # Re-parse and evaluate through the library: q~(i,i,i) = -1/i = i.
    from nvk.descriptors import data_from_json
    from nvk.ladder import ladder_closed_form

    data = data_from_json(doc)
    closed = ladder_closed_form((1j, 1j, 1j), data.mu) / math.pi ** 3
    assert abs(closed - 1j) < 1e-12


def test_transform_output_evaluates_like_library(inverse_descriptor, tmp_path):
    # cmd_eval on the emitted descriptor agrees with in-process evaluation.
    out_path = tmp_path / "out.json"
    run_main(["transform", inverse_descriptor, "--k", "0.5,0.5",
              "--out", str(out_path)])
    rc, text = run_main(["eval", str(out_path), "--z", "0.5+1.5i,-0.25+0.75i"])
    assert rc == 0
    from nvk.descriptors import data_from_json, parse_complex
    from nvk.representation import evaluate

    reported = parse_complex(json.loads(text)["results"][0]["value"])
    data = data_from_json(json.loads(out_path.read_text()))
    direct = evaluate(data, (0.5 + 1.5j, -0.25 + 0.75j))
    assert abs(reported - direct) <= 1e-12 * max(1.0, abs(direct))


def test_eval_tolerance_override(inverse_descriptor, tmp_path):
    out_path = tmp_path / "qt.json"
    run_main(["transform", inverse_descriptor, "--k", "0.5,0.5", "--out", str(out_path)])
    rc, text = run_main(["eval", str(out_path), "--z", "0+1i,0+1i", "--tol", "1e-6"])
    assert rc == 0
    result = json.loads(text)["results"][0]
    from nvk.descriptors import parse_complex

    assert abs(parse_complex(result["value"]) - 1j) < 1e-6
    assert 0 < result["error_estimate"] < 1e-6


def test_transform_rejects_bad_sum(inverse_descriptor):
    rc, _ = run_main(["transform", inverse_descriptor, "--k", "0.5,0.4"])
    assert rc == 2


def test_transform_zero_coefficient_padding(inverse_descriptor, tmp_path):
    out_path = tmp_path / "out.json"
    rc, _ = run_main(["transform", inverse_descriptor, "--k", "1,0",
                      "--out", str(out_path)])
    assert rc == 0
    doc = json.loads(out_path.read_text())
    assert doc["measure"]["type"] == "product"
    assert doc["measure"]["factors"][1]["type"] == "lebesgue"


def test_classify_representing(tmp_path):
    mu = {"schema": "nvk-1",
          "measure": {"type": "atomic", "dimension": 1, "atoms": [[0.0, math.pi]]}}
    path = tmp_path / "mu.json"
    path.write_text(json.dumps(mu))
    rc, out = run_main(["classify", "--alpha", "1", "--beta", "1", "--gamma", "1",
                        "--delta", "-1", "--mu", str(path), "--grid", "9"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["case"] == "iii1b"
    assert doc["representing"] is True
    assert doc["evidence"]["growth_converged"] is True
    assert abs(doc["evidence"]["growth_value"] - math.pi ** 2 / 2) < 1e-9
    assert doc["evidence"]["trait_conflict"] is None

    rc, out = run_main(["classify", "--alpha", "1", "--beta", "1", "--gamma", "1",
                        "--delta", "1", "--mu", str(path), "--grid", "9"])
    doc = json.loads(out)
    assert doc["case"] == "not_representing"
    assert doc["representing"] is False

    rc, out = run_main(["classify", "--alpha", "1", "--beta", "0", "--gamma", "1",
                        "--delta", "0", "--mu", str(path), "--grid", "9"])
    doc = json.loads(out)
    assert doc["representing"] is False
    assert doc["evidence"]["growth_converged"] is False


def test_verify_deterministic_under_seed(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        rc, _ = run_main(["verify", "--suite", "ladder", "--n", "2",
                          "--samples", "3", "--seed", "9", "--out", str(path)])
        assert rc == 0
    assert a.read_text() == b.read_text()


def test_verify_env_seed(tmp_path, monkeypatch):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    monkeypatch.setenv("NVK_SEED", "31")
    run_main(["verify", "--suite", "kernels", "--samples", "4", "--out", str(a)])
    monkeypatch.delenv("NVK_SEED")
    run_main(["verify", "--suite", "kernels", "--samples", "4", "--seed", "31",
              "--out", str(b)])
    assert a.read_text() == b.read_text()
    assert json.loads(a.read_text())["seed"] == 31


def test_verify_csv_format(tmp_path):
    path = tmp_path / "r.csv"
    rc, _ = run_main(["verify", "--suite", "kernels", "--samples", "4",
                      "--format", "csv", "--out", str(path)])
    assert rc == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "index,inputs,lhs_re,lhs_im,rhs_re,rhs_im,rel_error"
    assert len(lines) == 5


def test_verify_parallel_matches_serial(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_main(["verify", "--suite", "kernels", "--samples", "6", "--seed", "4",
              "--jobs", "1", "--out", str(a)])
    run_main(["verify", "--suite", "kernels", "--samples", "6", "--seed", "4",
              "--jobs", "2", "--out", str(b)])
    assert a.read_text() == b.read_text()


def test_verify_conditions_suite(tmp_path):
    path = tmp_path / "cond.json"
    rc, _ = run_main(["verify", "--suite", "conditions", "--out", str(path)])
    assert rc == 0
    doc = json.loads(path.read_text())
    assert len(doc["rows"]) == 11
    assert doc["max_rel_error"] == 0.0


def test_verify_unknown_suite_usage_error():
    rc = main(["verify", "--suite", "bogus"])
    assert rc == 2


def test_entry_point_subprocess(inverse_descriptor):
    proc = subprocess.run(
        [sys.executable, "-m", "nvk.cli", "eval", inverse_descriptor, "--z", "0+1i"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"][0]["value"] == "0+1i"


def test_invalid_descriptor_schema_exit_code(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema": "nvk-1", "measure": {"type": "bogus"}}))
    rc, _ = run_main(["eval", str(path), "--z", "0+1i"])
    assert rc == 2
