import csv
import io
import json

import pytest

from levymoments import load_preset, stable
from levymoments.cli import EXIT_ERROR, EXIT_FAIL, EXIT_INAPPLICABLE, EXIT_PASS, main

MANIFEST_KEYS = {"command", "spec_hash", "config", "seed", "version", "wall_clock_s"}


def _json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def _csv(text):
    lines = text.splitlines()
    header = {}
    for ln in lines:
        if ln.startswith("# "):
            k, _, v = ln[2:].partition(": ")
            header[k] = json.loads(v)
    rows = list(csv.DictReader(io.StringIO("\n".join(ln for ln in lines if not ln.startswith("#")))))
    return header, rows


def test_bound_json_with_manifest(capsys):
    code, doc = _json(capsys, ["bound", "--spec", "AC6", "--regime", "BV_small_beta", "--kappa", "0.5",
                               "--alpha", "0.5", "--beta", "0", "--t", "0.5,1"])
    assert code == EXIT_PASS
    assert MANIFEST_KEYS <= set(doc["manifest"])
    assert doc["manifest"]["spec_hash"] == load_preset("AC6").spec_hash()
    assert doc["values"] == pytest.approx([3 ** 0.5, 2 * 3 ** 0.5])


def test_bound_inapplicable_exits_nonzero(capsys):
    code = main(["bound", "--spec", "AC6", "--regime", "BV_small_beta", "--kappa", "0.7", "--alpha", "0.5",
                 "--beta", "0"])
    err = capsys.readouterr().err
    assert code != 0
    assert "kappa out of range [0,α]" in err


def test_spec_from_file(tmp_path, capsys):
    path = tmp_path / "spec.json"
    path.write_text(stable(1.5).to_json())
    code, doc = _json(capsys, ["index", "--spec", str(path)])
    assert code == 0 and doc["index"]["beta_inf"] == pytest.approx(1.5, abs=0.05)


def test_unknown_spec(capsys):
    assert main(["report", "--spec", "nope"]) == EXIT_ERROR


def test_verify_exit_codes(capsys):
    assert main(["verify", "--spec", "AC4", "--check", "bg-index"]) == EXIT_PASS
    assert main(["verify", "--spec", "AC4", "--check", "bg-index", "--expected", "1.0"]) == EXIT_FAIL
    assert main(["verify", "--spec", "AC4", "--check", "wald", "--paths", "10"]) == EXIT_INAPPLICABLE
    out = capsys.readouterr().out
    assert '"inapplicable"' in out


def test_verify_wald_pass(capsys):
    code, doc = _json(capsys, ["verify", "--spec", "AC10", "--check", "wald", "--paths", "2000",
                               "--half-width", "1", "--horizon", "5"])
    assert code == EXIT_PASS and doc["passed"] is True


def test_simulate_csv_deterministic(tmp_path, monkeypatch):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["simulate", "--spec", "AC4", "--paths", "3", "--steps", "8", "--seed", "7", "--out", str(out1)])
    monkeypatch.setenv("LEVYMOM_SEED", "7")
    main(["simulate", "--spec", "AC4", "--paths", "3", "--steps", "8", "--out", str(out2)])
    h1, r1 = _csv(out1.read_text())
    h2, r2 = _csv(out2.read_text())
    assert list(r1[0]) == ["path_id", "t", "x", "running_sup"]
    assert len(r1) == 3 * 9 and r1 == r2
    assert h1["seed"] == 7 and h1["spec_hash"] == stable(1.5).spec_hash()


def test_simulate_summary(capsys):
    code, doc = _json(capsys, ["simulate", "--spec", "AC10", "--paths", "500", "--steps", "16", "--summary"])
    assert code == 0 and doc["summary"]["aborted"] == 0


def test_estimate_csv_monotone(capsys):
    code = main(["estimate", "--spec", "AC4", "--paths", "300", "--steps", "64", "--kappa", "0.75",
                 "--t", "0.25,0.5,1"])
    header, rows = _csv(capsys.readouterr().out)
    assert code == 0 and header["kappa"] == 0.75
    est = [float(r["estimate"]) for r in rows]
    assert est == sorted(est)


def test_estimate_endpoint(capsys):
    code, doc = _json(capsys, ["estimate", "--spec", "AC10", "--paths", "2000", "--steps", "4",
                               "--function", "abs_power:2", "--t", "1"])
    assert code == 0 and abs(doc["endpoint_moment"]["mean"] - 1.0) < 0.15


def test_index_symbol_csv(capsys):
    code = main(["index", "--spec", "AC10", "--symbol-csv", "--xi", "0,2,3"])
    header, rows = _csv(capsys.readouterr().out)
    assert code == 0 and [float(r["re_q"]) for r in rows] == [0.0, 0.5, 2.0]
    assert "beta_inf" in header


def test_report(capsys):
    code, doc = _json(capsys, ["report", "--spec", "AC1"])
    assert code == 0
    assert doc["moment_existence"]["power:2"]["exists"] is False
    assert set(doc["regimes"]) >= {"PureJump", "Martingale"}


def test_console_script_installed():
    import shutil
    import subprocess
    exe = shutil.which("levymoments")
    if exe is None:
        pytest.skip("package not installed with its console script")
    res = subprocess.run([exe, "bound", "--spec", "AC6", "--regime", "PureJump", "--kappa", "1.5"],
                         capture_output=True, text=True)
    assert res.returncode != 0 and "kappa out of range [0,α]" in res.stderr
