"""
Tests for the command line front end, configuration and result tables.

Acceptance criteria:
1. moment/spectrum/reconstruct/converge/validate produce the documented tables
2. Exit status 0 on success, 2 when no route applies, 1 on malformed input
3. Config documents merge under command line flags
4. SPECMOMENT_THREADS caps the worker count
"""
import io
import json
import math
import os
import sys
import tempfile

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config_manager import ConfigManager, build_function, build_model, parse_descriptor, parse_grid
from execution_engine import THREADS_ENV, ExecutionEngine, resolve_n_jobs, run_parallel
from main import run_cli
from paley_wiener import ComplexExponential, Polynomial, ShiftScale, Sinc
from results_writer import ResultsWriter, format_number
from spectral_errors import ConfigError


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run_cli(list(argv), stdout=out, stderr=err)
    return status, out.getvalue(), err.getvalue()


def test_moment_command():
    print("\n=== TEST: moment command ===")
    status, out, err = invoke("moment", "--model", "exponential", "--function", "sinc", "--band", "0.5")
    print(out)
    assert status == 0
    assert "value: 0.4636476" in out
    assert "route: FastPath" in out
    assert "=== Execution plan ===" in err
    n_nodes = next(line.split(": ")[1] for line in out.splitlines() if line.startswith("n_nodes: "))
    assert f"n_nodes={n_nodes}" in err

    status, out, _ = invoke("moment", "--function", "sinc:B=0.5", "--oracle", "--format", "json")
    assert status == 0
    row = json.loads(out)[0]
    assert abs(row["value"] - math.atan(0.5)) <= 1e-10
    assert row["abs_error"] <= 1e-8
    assert row["route"] == "FastPath"


def test_rounding_floor_exit():
    """gaussian with sinc(5): refused at the default tol, accepted at 1e-8."""
    print("\n=== TEST: rounding floor ===")
    argv = ("moment", "--model", "gaussian", "--function", "sinc", "--band", "5")
    status, out, err = invoke(*argv)
    print(f"  {err.strip()}")
    assert status == 1
    assert out == ""
    assert "error:" in err and "tolerance" in err

    status, out, err = invoke(*argv, "--tol", "1e-8")
    assert status == 0
    assert "value: 1.25331" in out
    assert "route: FastPath" in out


def test_validate_command():
    print("\n=== TEST: validate command ===")
    status, out, err = invoke("validate", "--model", "strip:tau0=1", "--function", "exp:t=2.5")
    print(f"  {err.strip()}")
    assert status == 2
    assert out == ""
    assert "2*tau0" in err

    status, out, _ = invoke("validate", "--model", "strip:tau0=1", "--function", "exp:t=1.5")
    assert status == 0
    assert out.startswith("route: StripBandLimited")


def test_converge_command():
    print("\n=== TEST: converge command ===")
    status, out, _ = invoke("converge", "--function", "exp:t=0.5", "--tau", "0.75",
                            "--n-list", "8,16,32,64", "--format", "csv")
    assert status == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n_nodes,value,abs_error,apriori_bound,route"
    assert len(lines) == 5
    errors = [float(line.split(",")[2]) for line in lines[1:]]
    assert all(e2 < e1 for e1, e2 in zip(errors, errors[1:]))
    assert [int(line.split(",")[0]) for line in lines[1:]] == [8, 16, 32, 64]


def test_spectrum_command():
    status, out, err = invoke("spectrum", "--function", "sinc", "--band", "0.5",
                            "--grid=-1:1:1", "--sigma", "1", "--format", "csv")
    assert status == 0
    lines = out.strip().splitlines()
    assert lines[0] == "omega0,sigma,value,route,bound"
    assert len(lines) == 4
    values = [float(line.split(",")[2]) for line in lines[1:]]
    assert abs(values[0] - values[2]) <= 1e-9
    assert abs(values[1] - math.atan(0.5)) <= 1e-9
    assert "=== Execution plans ===" in err
    assert err.count("omega0=") == 3
    assert "workers:" in err

    status, _, err = invoke("spectrum", "--model", "strip:tau0=1", "--function", "sinc", "--band", "1",
                            "--grid", "0:1:0.5", "--sigma", "0.4")
    assert status == 2
    assert "sigma must exceed 0.5" in err


def test_reconstruct_command():
    status, out, _ = invoke("reconstruct", "--model", "exponential", "--times", "0,1", "--format", "json")
    assert status == 0
    rows = json.loads(out)
    assert [r["t"] for r in rows] == [0.0, 1.0]
    assert abs(rows[1]["real"] - 0.5) <= 1e-8
    assert set(rows[0]) == {"t", "real", "imag", "abs_error", "route", "n_nodes"}


def test_error_exits():
    print("\n=== TEST: error exit codes ===")
    for argv in [("moment", "--bogus"), ("moment", "--model", "nonsense"),
                 ("moment", "--function", "exp"), ("spectrum", "--grid", "1:0:1"),
                 ("frobnicate",), ("moment", "--tol", "-1")]:
        status, out, err = invoke(*argv)
        assert status == 1, argv
        assert out == ""
        assert err.startswith("error:") or "error:" in err


def test_output_is_deterministic():
    argv = ("converge", "--function", "exp:t=0.5", "--n-list", "8,16", "--format", "csv")
    assert invoke(*argv)[1] == invoke(*argv)[1]


def test_config_document():
    print("\n=== TEST: config document ===")
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "run.json")
        with open(path, "w") as f:
            json.dump({"model": "exponential", "function": "sinc", "band": 0.5, "format": "csv"}, f)
        status, out, _ = invoke("moment", "--config", path)
        assert status == 0
        assert out.splitlines()[0] == "n_nodes,value,abs_error,apriori_bound,route"

        status, out, _ = invoke("moment", "--config", path, "--format", "plain")
        assert status == 0 and "value: 0.4636476" in out

        manager = ConfigManager(path)
        manager.set("tol", 1e-9)
        manager.save_config()
        assert ConfigManager(path).get("tol") == 1e-9

        with open(path, "w") as f:
            json.dump({"colour": "blue"}, f)
        with pytest.raises(ConfigError):
            ConfigManager(path)

    with pytest.raises(ConfigError):
        ConfigManager("/nonexistent/run.json")
    with pytest.raises(ConfigError):
        ConfigManager().set("colour", "blue")


def test_descriptors():
    assert parse_descriptor("free_particle:beta=2,hbar=1") == ("free_particle", {"beta": 2.0, "hbar": 1.0})
    assert parse_descriptor("poly:coeffs=1;0;1") == ("poly", {"coeffs": (1.0, 0.0, 1.0)})
    with pytest.raises(ConfigError):
        parse_descriptor("sinc:B")
    with pytest.raises(ConfigError):
        parse_descriptor("sinc:B=wide")

    assert build_model("strip:tau0=2").tau0 == 2.0
    with pytest.raises(ConfigError):
        build_model("exponential:rate=2")

    assert build_function("sinc", band=0.5) == Sinc(0.5)
    assert build_function("exp:t=0.25") == ComplexExponential(0.25)
    assert build_function("exp", time=1.0) == ComplexExponential(1.0)
    assert build_function("poly:coeffs=1;0;1") == Polynomial((1.0, 0.0, 1.0))
    shifted = build_function("sinc:B=1,center=2,sigma=0.5")
    assert isinstance(shifted, ShiftScale) and shifted.band_limit == 2.0
    for bad in ("sinc", "monomial:k=1.5", "bump:B=1,t=2", "lorentzian"):
        with pytest.raises(ConfigError):
            build_function(bad)

    assert np.allclose(parse_grid("-1:1:0.5"), [-1.0, -0.5, 0.0, 0.5, 1.0])
    assert np.allclose(parse_grid("0:0:1"), [0.0])
    with pytest.raises(ConfigError):
        parse_grid("0:1")


def test_results_writer():
    writer = ResultsWriter("csv")
    df = writer.moment_table([{"n_nodes": 64, "value": 0.5, "abs_error": None,
                               "apriori_bound": 1e-9, "route": "FastPath"}])
    text = writer.render(df)
    assert text == "n_nodes,value,abs_error,apriori_bound,route\n64,0.5,,1.0000000000000001e-09,FastPath\n"

    assert format_number(1 + 2j, 7) == "1+2j"
    assert format_number(float("nan"), 7) == ""
    assert ResultsWriter("plain").render(writer.scan_table([])) == "(no rows)\n"

    rows = json.loads(ResultsWriter("json").render(writer.reconstruct_table([
        {"t": 1.0, "real": 0.5, "imag": 0.0, "abs_error": 1e-12, "route": "FastPath", "n_nodes": 64}])))
    assert rows[0]["n_nodes"] == 64

    with pytest.raises(ConfigError):
        ResultsWriter("xml")


def test_thread_cap():
    print("\n=== TEST: SPECMOMENT_THREADS ===")
    saved = os.environ.get(THREADS_ENV)
    try:
        os.environ[THREADS_ENV] = "1"
        assert resolve_n_jobs(8) == 1
        assert ExecutionEngine().n_jobs == 1
        os.environ[THREADS_ENV] = "3"
        assert resolve_n_jobs(8) == 3
        assert resolve_n_jobs(2) == 2
        os.environ[THREADS_ENV] = "many"
        with pytest.raises(ConfigError):
            resolve_n_jobs(4)
    finally:
        if saved is None:
            os.environ.pop(THREADS_ENV, None)
        else:
            os.environ[THREADS_ENV] = saved

    assert run_parallel(lambda x: x * x, [1, 2, 3], n_jobs=2) == [1, 4, 9]
    assert run_parallel(lambda x: x, [], n_jobs=2) == []
    engine = ExecutionEngine(n_jobs=1)
    assert engine.timed(lambda a, b: a + b, 1, b=2) == 3
    assert engine.elapsed >= 0.0
    assert engine.summary().startswith("workers: 1")


TESTS = [
    ("moment command", test_moment_command),
    ("Rounding floor exit", test_rounding_floor_exit),
    ("validate command", test_validate_command),
    ("converge command", test_converge_command),
    ("spectrum command", test_spectrum_command),
    ("reconstruct command", test_reconstruct_command),
    ("Error exits", test_error_exits),
    ("Deterministic output", test_output_is_deterministic),
    ("Config document", test_config_document),
    ("Descriptors", test_descriptors),
    ("Results writer", test_results_writer),
    ("Thread cap", test_thread_cap),
]


def run_all_tests():
    """Run all command line tests."""
    print("=" * 60)
    print("COMMAND LINE TEST SUITE")
    print("=" * 60)

    results = []
    for name, test in TESTS:
        try:
            test()
            results.append((name, True))
        except AssertionError as e:
            print(f"  [FAIL] {name}: {e}")
            results.append((name, False))

    print("\n" + "=" * 60)
    print("TEST SUMMARY")
    print("=" * 60)
    for name, passed in results:
        print(f"  {'[PASS]' if passed else '[FAIL]'}: {name}")
    all_passed = all(r[1] for r in results)
    print("\n" + ("ALL TESTS PASSED" if all_passed else "SOME TESTS FAILED"))
    return all_passed


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
