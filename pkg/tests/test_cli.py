import json
import math
import subprocess
import sys

import jsonschema
import pytest

from afl.cli import (
    EXIT_NOT_IMPLIED,
    EXIT_OK,
    EXIT_OUT_OF_SCOPE,
    EXIT_USAGE,
    run,
)
from afl.schemas import DECISION, NORM, RECONSTRUCTION, REPORT, ZEROS


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def gaussian_file(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"kind": "gaussian", "scale": 1.0}))
    return str(p)


def test_zeros_plain_and_json(capsys):
    code, out = call(capsys, "zeros", "0.5", "3")
    assert code == EXIT_OK
    vals = [float(x) for x in out.split()]
    assert vals == pytest.approx([math.pi, 2 * math.pi, 3 * math.pi], rel=1e-12)
    code, out = call(capsys, "zeros", "1", "4", "--json")
    jsonschema.validate(json.loads(out), ZEROS)


def test_zeros_cache_is_written(capsys, tmp_path):
    cache = tmp_path / "zc"
    call(capsys, "zeros", "0", "5", "--cache-dir", str(cache))
    assert any(cache.iterdir())
    code, out = call(capsys, "zeros", "0", "5", "--cache-dir", str(cache))
    assert code == EXIT_OK and float(out.split()[0]) == pytest.approx(2.404825557695773, rel=1e-14)


def test_bad_arguments_are_usage_errors(capsys):
    assert run(["frobnicate"]) == EXIT_USAGE
    assert run(["zeros", "0.5", "0"]) == EXIT_USAGE
    assert run(["check"]) == EXIT_USAGE
    assert run(["check", "--bessel", "3", "1", "2", "7", "1", "--s1", "1"]) == EXIT_USAGE
    assert run(["norm", "--profile", "/nonexistent.json"]) == EXIT_USAGE
    capsys.readouterr()


def test_check_file_exit_codes(capsys, tmp_path):
    def query(q):
        p = tmp_path / f"q{q}.json"
        p.write_text(json.dumps({"bessel_potential": {"n": 3, "s": 1, "p": 2, "q": q, "c": 1}}))
        return str(p)

    code, out = call(capsys, "check", "--file", query(7))
    assert code == EXIT_OK
    d = json.loads(out)
    jsonschema.validate(d, DECISION)
    assert d["compactness"] == "HoldsBySufficientCondition"
    assert call(capsys, "check", "--file", query(8.01))[0] == EXIT_NOT_IMPLIED
    assert call(capsys, "check", "--file", query(2))[0] == EXIT_OUT_OF_SCOPE


def test_check_inline_and_bessel(capsys):
    code, out = call(capsys, "check", "--s1", "0.75", "--p1", "2", "--q1", "2",
                     "--s2", "0", "--p2", "2", "--q2", "2", "--gamma2", "-1")
    assert code == EXIT_OK and "power" in json.loads(out)["method"]
    code, out = call(capsys, "check", "--bessel", "3", "1", "2", "inf", "1")
    assert code == EXIT_NOT_IMPLIED


def test_malformed_query_file(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"source": {}}))
    assert run(["check", "--file", str(p)]) == EXIT_USAGE
    p.write_text("{not json")
    assert run(["check", "--file", str(p)]) == EXIT_USAGE
    capsys.readouterr()


def test_norm_command(capsys, gaussian_file):
    code, out = call(capsys, "norm", "--profile", gaussian_file, "--kind", "L")
    assert float(out) == pytest.approx(math.pi**0.75, rel=1e-12)
    code, out = call(capsys, "norm", "--profile", gaussian_file, "--s", "1", "--gamma", "1", "--json")
    assert code == EXIT_OK
    jsonschema.validate(json.loads(out), NORM)


def test_analyze_then_synthesize(capsys, tmp_path, gaussian_file):
    coef = tmp_path / "c.csv"
    code, _ = call(capsys, "analyze", "--profile", gaussian_file, "--mu-max", "6", "--k-max", "64", "-o", str(coef))
    assert code == EXIT_OK
    code, out = call(capsys, "synthesize", "--coefficients", str(coef), "--samples", "5")
    d = json.loads(out)
    jsonschema.validate(d, RECONSTRUCTION)
    assert d["rel_error"] < 1e-3 and len(d["samples"]["values"]) == 5
    assert d["l2_norm"] == pytest.approx(math.pi**0.75, rel=1e-4)


def test_analyze_json_format(capsys, gaussian_file):
    code, out = call(capsys, "analyze", "--profile", gaussian_file, "--mu-max", "3", "--k-max", "16",
                     "--format", "json")
    from afl.schemas import COEFFICIENTS

    jsonschema.validate(json.loads(out), COEFFICIENTS)


def test_verify_writes_reports(capsys, tmp_path):
    code, out = call(capsys, "verify", "lemmas", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert json.loads(out)[0]["passed"]
    jsonschema.validate(json.loads((tmp_path / "lemmas.json").read_text()), REPORT)
    assert (tmp_path / "lemmas.csv").exists()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "afl", "zeros", "0.5", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and len(proc.stdout.split()) == 2
