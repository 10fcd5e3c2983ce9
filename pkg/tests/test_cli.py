"""CLI: golden-file byte equality, determinism, exit codes, file round trips."""

import contextlib
import io
import json
import os

import pytest

from diffops.cli import main

from cli_cases import CASES, FIXTURES, expand

GOLDEN = os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden")


def run_cli(argv):
    buf = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(err):
        rc = main(argv)
    return rc, buf.getvalue(), err.getvalue()


@pytest.mark.parametrize("name,argv", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv):
    rc, out, _ = run_cli(expand(argv))
    assert rc == 0
    with open(os.path.join(GOLDEN, f"{name}.txt"), "r", encoding="utf-8") as fh:
        assert out == fh.read()


def test_identical_invocations_are_byte_identical():
    argv = expand(CASES[0][1])
    assert run_cli(argv) == run_cli(argv)


def test_exit_code_parse_error():
    rc, _, err = run_cli(["normalize", "x3", "--n", "2"])
    assert rc == 1
    assert "out of range" in err
    rc, _, err = run_cli(["normalize", "x1 + + y1"])
    assert rc == 1
    assert "line 1" in err


def test_exit_code_math_precondition():
    rc, _, err = run_cli(["reduce", "dh", "--char", "5"])
    assert rc == 2
    assert "characteristic" in err
    rc, _, err = run_cli(["weyl-decompose", "dx1", "--mode", "heisenberg"])
    assert rc == 2


def test_exit_code_bad_file():
    rc, _, err = run_cli(["azumaya-check", "no_such_file.json"])
    assert rc == 1


def test_usage_error_is_exit_one():
    rc, _, _ = run_cli(["normalize"])  # missing argument
    assert rc == 1
    rc, _, _ = run_cli(["no-such-command"])
    assert rc == 1


def test_env_default_characteristic(monkeypatch):
    monkeypatch.setenv("DIFFOPS_CHAR", "5")
    rc, out, _ = run_cli(["normalize", "5*x1"])
    assert rc == 0
    assert out == "0\n"
    monkeypatch.setenv("DIFFOPS_CHAR", "bogus")
    rc, _, err = run_cli(["normalize", "x1"])
    assert rc == 1


def test_decompose_out_reconstruct_roundtrip(tmp_path):
    alg = os.path.join(FIXTURES, "m2_f3t.json")
    mat = os.path.join(FIXTURES, "m2_f3t_matrix.json")
    comps = tmp_path / "comps.json"
    rc, out1, _ = run_cli(["decompose", alg, mat, "--out", str(comps)])
    assert rc == 0
    rebuilt = tmp_path / "rebuilt.json"
    rc, out2, _ = run_cli(["reconstruct", alg, str(comps), "--out", str(rebuilt)])
    assert rc == 0
    with open(mat, encoding="utf-8") as fh:
        original = json.load(fh)
    with open(rebuilt, encoding="utf-8") as fh:
        assert json.load(fh) == original


def test_eta_zeta_roundtrip_via_files(tmp_path):
    alg = os.path.join(FIXTURES, "m2_f3t.json")
    lifted = tmp_path / "lifted.json"
    rc, _, _ = run_cli(["eta", alg, "t^2*d[t]", "--out", str(lifted)])
    assert rc == 0
    with open(lifted, encoding="utf-8") as fh:
        records = json.load(fh)
    assert len(records) == 1
    single = tmp_path / "single.json"
    with open(single, "w", encoding="utf-8") as fh:
        json.dump(records[0], fh)
    rc, out, _ = run_cli(["zeta", alg, str(single)])
    assert rc == 0
    assert out == "t^2*d[t]\n"
