import json
import subprocess
import sys
from pathlib import Path

import pytest

from reinhardt_propmap import __version__
from reinhardt_propmap.cli import echo_problem, load_problem, main

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_classify_bezout(capsys):
    code, doc = run_json(capsys, "classify", PROBLEMS / "bezout_annulus.json")
    assert code == 0
    assert doc["source"]["canonical"]["tag"] == "AnnulusTimesCstar"
    assert doc["source"]["witness"]["E"] == [[2, 3], [1, 1]]
    assert doc["toolVersion"] == __version__


def test_classify_identity(capsys):
    code, doc = run_json(capsys, "classify", PROBLEMS / "identity_annulus.json")
    assert doc["source"]["witness"]["E"] == [[1, 0], [0, 1]]
    assert doc["source"]["witness"]["logModuli"] == ["0", "0"]


def test_malformed_element(capsys):
    code, out, err = run_cli(capsys, "classify", PROBLEMS / "malformed.json")
    assert code == 1
    assert "position 2" in err and "^" in err


def test_decide_irrational_annulus(capsys):
    code, doc = run_json(capsys, "decide", PROBLEMS / "irrational_annulus.json")
    assert code == 0
    assert doc["verdict"] == "exists" and doc["certificate"] == [3, 7, 2, 5]
    assert "family" not in doc


def test_decide_cross_type(capsys):
    code, doc = run_json(capsys, "decide", PROBLEMS / "cross_type.json")
    assert code == 0 and doc["verdict"] == "empty" and doc["theorem"] == "rozne"
    code, _ = run_json(capsys, "decide", PROBLEMS / "cross_type.json", "--expect-exists")
    assert code == 4


def test_unsupported_exit(capsys):
    code, doc = run_json(capsys, "decide", PROBLEMS / "elementary_rational.json")
    assert code == 2 and doc["verdict"] == "unsupported" and doc["theorem"] == "prop"
    assert "cited literature" in doc["citation"]


def test_enumerate_has_family(capsys):
    code, doc = run_json(capsys, "enumerate", PROBLEMS / "punctured_lattice.json")
    assert code == 0
    assert doc["family"]["lattice"]["rank"] == 2


def test_verify_pass_and_mutation(capsys):
    code, doc = run_json(capsys, "verify", PROBLEMS / "irrational_annulus.json")
    assert code == 0 and doc["verification"]["passed"]
    assert all(i["homogeneityMaxDeviation"] <= 1e-9 for i in doc["verification"]["instances"])
    code, doc = run_json(capsys, "verify", PROBLEMS / "irrational_annulus.json", "--mutate", "E11")
    assert code == 3 and "level_sets" in doc["verification"]["failedChecks"]


def test_verify_radial_not_applicable(capsys):
    code, doc = run_json(capsys, "verify", PROBLEMS / "elementary_irrational.json", "--radial")
    assert code == 0
    notes = doc["verification"]["instances"][0]["notes"]
    assert any("not applicable" in n for n in notes)
    assert doc["verification"]["instances"][0]["constraintDiscrimination"]["holding"] == "beta"


def test_verify_user_coefficients(capsys):
    f = PROBLEMS / "irrational_annulus.json"
    code, _ = run_json(capsys, "verify", f, "--coeff", "0-1√,1,0.3,2.0", "--member", "0")
    assert code == 0
    code, doc = run_json(capsys, "verify", f, "--coeff", "1,1")
    assert code == 3


def test_oracle(capsys):
    code, doc = run_json(capsys, "oracle", "7/3", "1/3", "5")
    assert code == 0 and [2, 1] in doc["solutions"] and [1, 4] in doc["solutions"]
    code, doc = run_json(capsys, "oracle", "3+2√", "0+1√", "10", "--radicand", "2")
    assert doc["solutions"] == [[3, 2]]
    code, doc = run_json(capsys, "oracle", "1/2", "0+1√", "50", "--radicand", "2")
    assert doc["solutions"] == []
    code, _, err = run_cli(capsys, "oracle", "3+", "1", "5")
    assert code == 1


def test_radius_power_rejected(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"source": {"alpha": ["1", "0"], "lower": "zero", "logUpper": "0",
                                        "radiusPowerOfE": 1},
                             "target": {"alpha": ["1", "0"], "lower": "zero", "logUpper": "0"}}))
    code, out, err = run_cli(capsys, "decide", p)
    assert code == 1 and "logUpper" in err


@pytest.mark.parametrize("doc,msg", [
    ({"radicand": 4, "source": {}, "target": {}}, "divisible"),
    ({"source": {"alpha": ["1"], "lower": "zero", "logUpper": "0"}}, "two elements"),
    ({"source": {"alpha": ["1", "1"], "lower": "sideways", "logUpper": "0"}}, "lower"),
    ({"source": {"alpha": ["1", "1"], "lower": "positive", "logUpper": "0", "logLower": "1"},
      "target": {"alpha": ["1", "1"], "lower": "zero", "logUpper": "0"}}, "below"),
    ({"source": {"tag": "Nope"}}, "unknown tag"),
    ({"source": {"alpha": [1, "1"], "lower": "zero", "logUpper": "0"}}, "strings"),
])
def test_validation_errors(capsys, tmp_path, doc, msg):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, out, err = run_cli(capsys, "decide", p)
    assert code == 1 and msg in err


def test_invalid_json(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{")
    code, _, err = run_cli(capsys, "decide", p)
    assert code == 1 and "invalid JSON" in err


@pytest.mark.parametrize("name", sorted(p.name for p in PROBLEMS.glob("*.json") if p.name != "malformed.json"))
def test_echo_roundtrip(capsys, name):
    raw = json.loads((PROBLEMS / name).read_text())
    p = load_problem(raw)
    echo = echo_problem(p)
    assert load_problem(echo) == p
    assert echo_problem(load_problem(echo)) == echo
    code, doc = run_json(capsys, "enumerate", PROBLEMS / name)
    assert doc["input"] == echo


def test_deterministic_output(capsys):
    f = PROBLEMS / "punctured_lattice.json"
    _, a, _ = run_cli(capsys, "verify", f, "--format", "json")
    _, b, _ = run_cli(capsys, "verify", f, "--format", "json")
    assert a == b


def test_text_output_no_color(capsys, monkeypatch):
    monkeypatch.setenv("REINHARDT_PROPMAP_NO_COLOR", "1")
    code, out, _ = run_cli(capsys, "verify", PROBLEMS / "cstar_fiber.json")
    assert code == 0 and "\033[" not in out and "verification: PASS" in out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "reinhardt_propmap", "decide",
                        str(PROBLEMS / "cross_type.json"), "--format", "json"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and json.loads(r.stdout)["theorem"] == "rozne"
