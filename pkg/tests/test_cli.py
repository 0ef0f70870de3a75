import json
import subprocess
import sys

import pytest

from syzmirror.cli import REFERENCE_NOTE, RunConfig, InputError, main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_fan_examples(capsys, data_dir):
    code, out, _ = run(capsys, "fan", "--n", 2)
    report = json.loads(out)
    assert code == 0 and len(report["rays"]) == 4 and len(report["cones"]) == 3
    assert report["smooth"] is True
    code, out, _ = run(capsys, "fan", "--triangulation", data_dir / "kp2.json")
    assert code == 0 and len(json.loads(out)["cones"]) == 3
    code, _, err = run(capsys, "fan", "--n", 0)
    assert code == 1 and "error" in err


def test_fan_non_unimodular_exit_2(capsys, data_dir):
    code, out, err = run(capsys, "fan", "--triangulation", data_dir / "nonunimodular.json")
    assert code == 2
    assert json.loads(out)["non_unimodular_cones"] == [[0, 1, 2]]
    assert "not unimodular" in err


def test_transform_examples(capsys, data_dir):
    roots = data_dir / "roots_1_2.json"
    code, out, _ = run(capsys, "transform", "--roots", roots, "--path", data_dir / "spiral_path.json")
    b = json.loads(out)
    assert code == 0 and (b["support"], b["i"], b["degree"], b["winding"]) == ("E_i", 1, -1, 1)
    assert b["reference"]["convention"] == REFERENCE_NOTE
    code, out, _ = run(capsys, "transform", "--roots", roots, "--path", data_dir / "reference_path.json")
    assert code == 0 and json.loads(out)["degree"] == 0
    code, out, err = run(capsys, "transform", "--roots", roots, "--path", data_dir / "backtrack_path.json")
    assert code == 2 and out == "" and "not strongly admissible" in err
    assert "Traceback" not in err


def test_wind_reports_backtracking_paths(capsys, data_dir):
    roots = data_dir / "roots_1_2.json"
    code, out, _ = run(capsys, "wind", "--roots", roots, "--path", data_dir / "backtrack_path.json")
    rep = json.loads(out)
    assert code == 0 and rep["winding"] == 1 and rep["strongly_admissible"] is False


def test_hms_examples(capsys):
    code, out, _ = run(capsys, "hms", "--n", 3)
    assert code == 0 and out.rstrip().endswith("PASS") and "pairs compared: 9" in out
    code, out, _ = run(capsys, "hms", "--n", 1)
    assert code == 0 and "{0:1, 2:1}" in out
    code, _, _ = run(capsys, "hms", "--n", 0)
    assert code == 1


def test_twist_and_classify(capsys, data_dir):
    code, out, _ = run(capsys, "twist", "--n", 2, "--i", 1, "--class", "0,1")
    assert code == 0 and json.loads(out)["result"] == [1, 1]
    assert run(capsys, "twist", "--n", 2, "--i", 3, "--class", "0,1")[0] == 1
    assert run(capsys, "twist", "--n", 2, "--i", 1, "--class", "0,x")[0] == 1
    code, out, _ = run(capsys, "classify", "--roots", data_dir / "roots_1_2.json", "--s", 0, "--lam", 0)
    assert code == 0 and json.loads(out)["fiber"] == "nodal"
    code, out, _ = run(capsys, "classify", "--roots", data_dir / "roots_1_2.json", "--s", 0.3, "--lam", 0, "--charts")
    assert json.loads(out)["fiber"] == "smooth" and "base" in json.loads(out)


def test_plot(capsys, data_dir, tmp_path):
    roots = data_dir / "roots_e.json"
    code, out, _ = run(capsys, "plot-base", "--roots", roots)
    assert code == 0 and out.count('class="wall"') == 3 and out.count('class="node"') == 3
    empty = tmp_path / "empty.json"
    empty.write_text("")
    code, _, err = run(capsys, "plot", "--roots", roots, "--path", empty)
    assert code == 1 and "empty" in err


def test_output_file_and_determinism(capsys, data_dir, tmp_path):
    args = ["plot", "--roots", data_dir / "roots_1_2.json", "--path", data_dir / "spiral_path.json"]
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run(capsys, *args, "-o", a)[1] == ""
    assert run(capsys, *args, "-o", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_input_errors(capsys, data_dir, tmp_path):
    assert run(capsys, "classify", "--roots", tmp_path / "missing.json", "--s", 0, "--lam", 0)[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "classify", "--roots", bad, "--s", 0, "--lam", 0)[0] == 1
    bad.write_text('{"roots": [[2, 0], [1, 0]]}')
    assert run(capsys, "classify", "--roots", bad, "--s", 0, "--lam", 0)[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "hms", "--n", 2, "--tol", 0)[0] == 1


def test_tolerance_precedence(capsys, data_dir, tmp_path, monkeypatch):
    # s = 1e-6 is a node at tol 1e-5 and smooth at the default 1e-9
    roots = data_dir / "roots_1_2.json"
    argv = ["classify", "--roots", roots, "--s", 1e-6, "--lam", 0]
    assert json.loads(run(capsys, *argv)[1])["fiber"] == "smooth"
    monkeypatch.setenv("SYZ_TOL", "1e-5")
    assert json.loads(run(capsys, *argv)[1])["fiber"] == "nodal"
    assert json.loads(run(capsys, *argv, "--tol", 1e-9)[1])["fiber"] == "smooth"
    with_tol = tmp_path / "r.json"
    with_tol.write_text(json.dumps({"roots": [[1, 0], [2, 0]], "tol": 1e-9}))
    assert json.loads(run(capsys, "classify", "--roots", with_tol, "--s", 1e-6, "--lam", 0)[1])["fiber"] == "smooth"
    monkeypatch.setenv("SYZ_TOL", "abc")
    assert run(capsys, *argv)[0] == 1


def test_run_config_validation(tmp_path):
    with pytest.raises(InputError):
        RunConfig("hms", n=0)
    with pytest.raises(InputError):
        RunConfig("plot", inputs={"roots": tmp_path / "nope"})


def test_console_script_entry_point(data_dir):
    res = subprocess.run(
        [sys.executable, "-m", "syzmirror.cli", "hms", "--n", "2"], capture_output=True, text=True
    )
    assert res.returncode == 0 and "PASS" in res.stdout
