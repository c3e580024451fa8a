import json
import math
import subprocess
import sys

import numpy as np
import pytest

from curv4.cli import main
from curv4.curvature import random_curvature
from curv4.errors import BianchiViolation, ParseError
from curv4.io import dumps, load_tensor, model_document, parse_tensor, save_tensor, to_jsonable
from curv4.models import cp2


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out.strip() else None), err


@pytest.fixture
def identity_file(tmp_path):
    p = tmp_path / "id.json"
    p.write_text(json.dumps({"basis": "lex-eij", "matrix": np.eye(6).tolist()}))
    return p


@pytest.fixture
def bianchi_file(tmp_path):
    M = np.eye(6)
    M[0, 5] = M[5, 0] = 1.0
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"matrix": M.tolist()}))
    return p


# --- io ---------------------------------------------------------------------

def test_round_trip_is_exact(tmp_path):
    R = random_curvature(3)
    path = tmp_path / "r.json"
    save_tensor(path, R, metadata={"note": "x"})
    R2, meta = load_tensor(path)
    np.testing.assert_array_equal(R2.matrix, 0.5 * (R.matrix + R.matrix.T))
    assert meta == {"note": "x"}


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_tensor({"matrix": [[1, 2], [3, 4]]})
    with pytest.raises(ParseError):
        parse_tensor({"basis": "other", "matrix": np.eye(6).tolist()})
    with pytest.raises(ParseError):
        parse_tensor([1, 2, 3])
    with pytest.raises(ParseError):
        parse_tensor({"matrix": [["a"] * 6] * 6})


def test_parse_bianchi_uses_document_tolerance():
    M = np.eye(6)
    M[0, 5] = M[5, 0] = 1e-6
    with pytest.raises(BianchiViolation):
        parse_tensor({"matrix": M.tolist()})
    parse_tensor({"matrix": M.tolist(), "tolerance": 1e-5})


def test_jsonable_normalizes_numbers():
    assert to_jsonable(np.float64(-0.0)) == 0.0
    assert math.copysign(1, to_jsonable(-0.0)) == 1
    assert to_jsonable(float("nan")) is None
    assert to_jsonable(np.bool_(True)) is True
    assert json.loads(dumps({"x": np.arange(3)})) == {"x": [0, 1, 2]}


def test_model_document_metadata():
    doc = model_document(cp2(12.0))
    assert doc["basis"] == "lex-eij"
    assert doc["metadata"]["kind"] == "cp2"
    assert doc["metadata"]["lambda1"] == 6.0


def test_floats_round_trip_exactly():
    x = 0.1 + 0.2
    assert json.loads(dumps([x]))[0] == x


# --- cli --------------------------------------------------------------------

def test_decompose_cp2(capsys):
    code, doc, _ = run_json(capsys, "decompose", "catalog", "cp2", "--scale", "S=12")
    assert code == 0
    np.testing.assert_allclose(doc["result"]["wplus_spectrum"], [-1, -1, 2], atol=1e-12)
    np.testing.assert_allclose(doc["result"]["wminus_spectrum"], [0, 0, 0], atol=1e-12)
    assert doc["config"]["seed"] is not None and "tolerance" in doc["config"]


def test_decompose_identity_file(capsys, identity_file):
    code, doc, _ = run_json(capsys, "decompose", str(identity_file))
    assert code == 0
    assert doc["result"]["part_norms"]["weyl"] == 0
    assert doc["result"]["S"] == 12.0


def test_decompose_bianchi_violation(capsys, bianchi_file):
    code, doc, err = run_json(capsys, "decompose", str(bianchi_file))
    assert code == 2 and doc is None
    assert "residual" in err and "1" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "decompose", str(tmp_path / "nope.json"))
    assert code == 2 and "error" in err


def test_extremes_s2s2(capsys):
    code, doc, _ = run_json(capsys, "extremes", "catalog", "product_s2s2", "1", "1")
    assert code == 0
    r = doc["result"]
    assert r["kmax"] == pytest.approx(1) and r["kmin"] == pytest.approx(0, abs=1e-12)
    assert r["kperp_max"] == pytest.approx(1) and r["kperp_min"] == pytest.approx(0, abs=1e-12)


def test_extremes_sphere(capsys):
    code, doc, _ = run_json(capsys, "extremes", "catalog", "sphere4", "1")
    assert code == 0
    for key in ("kmin", "kmax", "kperp_min", "kperp_max"):
        assert doc["result"][key] == pytest.approx(1.0)


def _both_methods(capsys, tmp_path, seed):
    path = tmp_path / "r.json"
    save_tensor(path, random_curvature(seed))
    _, a, _ = run_json(capsys, "extremes", str(path))
    _, b, _ = run_json(capsys, "extremes", str(path), "--method", "sample", "--samples",
                       "100000")
    return a["result"], b["result"]


def test_extremes_optimizer_bounds_sampler(capsys, tmp_path):
    opt, smp = _both_methods(capsys, tmp_path, 17)
    assert opt["kmax"] >= smp["kmax"] - 1e-9
    assert opt["kmin"] <= smp["kmin"] + 1e-9
    assert opt["kperp_max"] >= smp["kperp_max"] - 1e-9


@pytest.mark.xfail(reason="a 1e5-point grid on S2 x S2 resolves extremes of unit-scale random "
                          "tensors only to about 1e-2", strict=False)
def test_extremes_methods_agree_to_1e3(capsys, tmp_path):
    opt, smp = _both_methods(capsys, tmp_path, 17)
    for key in ("kmin", "kmax", "kperp_min", "kperp_max"):
        assert abs(opt[key] - smp[key]) < 1e-3


def test_check_s2s2_condition_two_fails(capsys):
    code, doc, _ = run_json(capsys, "check", "catalog", "product_s2s2", "--k", "1",
                            "--lambda1", "2", "--conditions", "2")
    assert code == 1 and doc["status"] == "fail"
    assert doc["result"]["conditions"][0]["measured"] == pytest.approx(1.0)


def test_check_cp2_condition_two_passes(capsys):
    code, doc, _ = run_json(capsys, "check", "catalog", "cp2", "--scale", "S=4", "--k", "1",
                            "--lambda1", "1.3334", "--conditions", "2")
    assert code == 0 and doc["status"] == "pass"


def test_check_sphere_condition_three(capsys):
    code, doc, _ = run_json(capsys, "check", "catalog", "sphere4", "--lambda1", "4",
                            "--conditions", "3")
    assert code == 0


def test_check_missing_k(capsys):
    code, _, err = run(capsys, "check", "catalog", "sphere4", "--lambda1", "4",
                       "--conditions", "2")
    assert code == 2 and "MissingK" in err


def test_check_uses_catalog_lambda1(capsys):
    code, doc, _ = run_json(capsys, "check", "catalog", "cp2")
    assert doc["config"]["lambda1"] == 6.0
    assert [c["condition"] for c in doc["result"]["conditions"]] == [1, 3, 4]


@pytest.mark.parametrize("argv,chi,tau", [(["sphere4", "1"], 2, 0), (["cp2"], 3, 1),
                                          (["product_s2s2", "1", "1"], 4, 0), (["rp4"], 1, 0)])
def test_invariants(capsys, argv, chi, tau):
    code, doc, _ = run_json(capsys, "invariants", "catalog", *argv)
    assert code == 0
    assert doc["result"]["chi"] == pytest.approx(chi, abs=1e-8)
    assert doc["result"]["tau"] == pytest.approx(tau, abs=1e-8)


def test_invariants_file_needs_volume(capsys, identity_file):
    code, _, _ = run(capsys, "invariants", str(identity_file))
    assert code == 2
    code, doc, _ = run_json(capsys, "invariants", str(identity_file), "--volume",
                            str(8 * math.pi ** 2 / 3))
    assert code == 0 and doc["result"]["chi"] == pytest.approx(2.0)


def test_invariants_bad_params(capsys):
    code, _, err = run(capsys, "invariants", "catalog", "sphere4", "--scale", "r=-1")
    assert code == 2 and "BadParams" in err


def test_normal_form(capsys):
    code, doc, _ = run_json(capsys, "normal-form", "catalog", "cp2")
    assert code == 0
    np.testing.assert_allclose(doc["result"]["a"], [-0.5, -0.5, 1.0], atol=1e-12)


def test_einstein(capsys):
    code, doc, _ = run_json(capsys, "einstein", "--alpha", "1")
    assert code == 0
    assert doc["result"]["contradiction"] is True
    assert doc["result"]["beta"] == pytest.approx(-0.11596, abs=1e-5)
    code, doc, _ = run_json(capsys, "einstein", "--alpha", "0.9")
    assert code == 0 and doc["result"]["alpha"] == 0.9
    code, _, err = run(capsys, "einstein", "--alpha", "1.5")
    assert code == 2 and "OutOfRange" in err


def test_export_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "export", "catalog", "cp2")
    assert code == 0
    path = tmp_path / "cp2.json"
    path.write_text(out)
    R, meta = load_tensor(path)
    np.testing.assert_array_equal(R.matrix, cp2(12.0).curvature.matrix)
    code, doc, _ = run_json(capsys, "check", str(path), "--conditions", "1")
    assert doc["config"]["lambda1"] == 6.0


def test_verify_einstein_suite(capsys):
    code, doc, _ = run_json(capsys, "verify", "--suite", "einstein", "--format", "json")
    assert code == 0
    notes = json.dumps(doc["result"]["suites"][0]["notes"])
    assert "3.4409" in notes


def test_verify_table_and_elapsed_on_stderr(capsys):
    code, out, err = run(capsys, "verify", "--suite", "threshold", "-n", "50",
                         "--format", "table")
    assert code == 0
    assert "threshold" in out and "elapsed" in err and "elapsed" not in out


def test_output_is_byte_identical(capsys):
    argv = ["extremes", "catalog", "cp2", "--seed", "5"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("CURV4_SEED", "123")
    _, doc, _ = run_json(capsys, "decompose", "catalog", "sphere4")
    assert doc["config"]["seed"] == 123


def test_table_format(capsys):
    code, out, _ = run(capsys, "invariants", "catalog", "cp2", "--format", "table")
    assert code == 0 and "result.chi" in out


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "curv4", "einstein"], capture_output=True,
                          text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["contradiction"] is True
