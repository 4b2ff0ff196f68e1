import csv
import io
import json
import shutil
import subprocess

import numpy as np
import pytest

from rankone import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_eval_phi_grid(capsys):
    code, out, _ = run(capsys, "eval", "--group", "1,0", "--function", "phi", "--lambda", "0,0.5", "--t", "0:5:11")
    assert code == 0
    r = rows(out)
    assert len(r) == 11
    assert float(r[0]["re"]) == pytest.approx(1.0) and float(r[0]["im"]) == 0


def test_eval_b_lower_half_plane_is_usage_error(capsys):
    code, _, err = run(capsys, "eval", "--function", "b", "--lambda", "0,-1", "--t", "1")
    assert code == 2 and "error" in err


def test_transform_even(capsys):
    code, out, _ = run(
        capsys, "transform", "--family", "bump", "--params", "T=2", "--group", "2,1", "--lambda-grid", "-5:5:41"
    )
    assert code == 0
    r = rows(out)
    assert len(r) == 41
    v = np.array([complex(float(x["value_re"]), float(x["value_im"])) for x in r])
    assert np.max(np.abs(v - v[::-1])) < 1e-9


def test_transform_sampled_csv(tmp_path, capsys):
    path = tmp_path / "f.csv"
    t = np.linspace(0.05, 2.0, 40)
    path.write_text("t,value\n" + "".join(f"{a},{np.exp(-a * a)}\n" for a in t))
    code, out, _ = run(capsys, "transform", "--csv", str(path), "--lambda-grid", "0:1:3")
    assert code == 0 and len(rows(out)) == 3


def test_synthesize(capsys):
    code, out, _ = run(
        capsys, "synthesize", "--group", "2,0", "--expression", "sincpow", "--params", "n=8", "a=0.5", "--t", "0.5:3:6"
    )
    assert code == 0
    assert len(rows(out)) == 6


def test_resolvent_both_branches(capsys):
    code, out, _ = run(capsys, "resolvent", "--group", "2,0", "--xi0", "1.5", "--lambda-im-grid", "0.2:2.0:10")
    assert code == 0
    data = json.loads(out)
    ok = [r for r in data["rows"] if r.get("status") != "excluded"]
    assert {r["branch"] for r in ok} == {"T", "kernel"}
    assert max(r["relative_discrepancy"] for r in ok) < 1e-5
    assert data["max_relative_discrepancy"] < 1e-5


def test_verify_pass_and_deterministic(capsys):
    code, out1, _ = run(capsys, "verify", "3.4", "--group", "2,0")
    assert code == 0
    rep = json.loads(out1)
    assert rep["status"] == "pass" and rep["max_residual"] < 1e-6 and rep["runtime_ms"] is None
    _, out2, _ = run(capsys, "verify", "3.4", "--group", "2,0")
    assert out1 == out2


def test_verify_connection(capsys):
    code, out, _ = run(capsys, "verify", "connection", "--group", "4,3")
    assert code == 0 and json.loads(out)["max_residual"] < 1e-8


def test_verify_unknown(capsys):
    code, _, err = run(capsys, "verify", "bogus")
    assert code == 2 and "bogus" in err


def test_verify_tight_tolerance_fails(capsys):
    code, out, _ = run(capsys, "verify", "connection", "--group", "2,0", "--tol", "1e-30")
    assert code == 1 and json.loads(out)["status"] == "fail"


def test_verify_writes_to_directory(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "8.3", "--group", "2,1", "--out", str(tmp_path))
    assert code == 0 and out == ""
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    assert json.loads(files[0].read_text())["lemma_id"] == "8.3"


def test_scan_estimate(capsys):
    code, out, _ = run(capsys, "scan-estimate", "3.1", "--group", "2,1")
    assert code == 0
    assert "exponent" in out


def test_certify_bound(capsys):
    code, out, _ = run(capsys, "certify-bound", "--k", "1", "--R1", "1", "--R2", "1", "--samples", "50")
    assert code == 0
    assert json.loads(out)["violations"] == 0


def test_bad_group(capsys):
    code, _, _ = run(capsys, "eval", "--group", "zz", "--function", "phi", "--lambda", "1", "--t", "1")
    assert code == 2


def test_bad_grid(capsys):
    code, _, _ = run(capsys, "eval", "--function", "phi", "--lambda", "1", "--t", "0:1")
    assert code == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("tol = 1e-30  # impossible\n")
    code, _, _ = run(capsys, "verify", "connection", "--config", str(cfg))
    assert code == 1
    cfg.write_text("bogus = 1\n")
    code, _, _ = run(capsys, "verify", "connection", "--config", str(cfg))
    assert code == 2


@pytest.mark.skipif(shutil.which("rankone") is None, reason="console script not installed")
def test_console_script():
    p = subprocess.run(["rankone", "verify", "bogus"], capture_output=True, text=True)
    assert p.returncode == 2
