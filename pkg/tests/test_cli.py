import csv
import io
import json
import math
import subprocess
import sys

import pytest

from semisens.cli import main, parse_xi
from semisens.errors import ConfigError
from semisens.models import wf_family
from semisens.operators import family_to_dict


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_xi():
    assert parse_xi("x")[1].coeffs == (0, 1)
    assert parse_xi("x^3")[1].degree == 3
    assert parse_xi("1")[1].coeffs == (1,)
    label, p = parse_xi('[1, "1/2", 0.25]')
    assert label == '[1,"1/2",0.25]' and p.degree == 2
    with pytest.raises(ConfigError):
        parse_xi("x+1")


def test_sensitivity_wf(capsys):
    code, out, _ = run(capsys, "sensitivity", "--model", "wf", "--kappa", "1", "--degree", "8", "--t", "1", "--xi", "x")
    assert code == 0
    row = out.splitlines()[1].split(",")
    assert float(row[2]) == pytest.approx(1 - math.exp(-1), abs=1e-12)


def test_sensitivity_ou_with_oracle(capsys):
    code, out, _ = run(capsys, "sensitivity", "--model", "ou", "--degree", "6", "--t", "1", "--xi", "x", "--oracle")
    assert code == 0
    _, _, value, oracle, diff = out.splitlines()[1].split(",")
    assert float(value) == pytest.approx(1 - math.exp(-1), abs=1e-12)
    assert float(diff) < 1e-10


def test_zero_time_gives_zeros(capsys):
    code, out, _ = run(capsys, "sensitivity", "--t", "0", "--xi", "x", "--xi", "x^2", "--xi", "x^5")
    assert code == 0
    assert all(float(line.split(",")[2]) == 0 for line in out.splitlines()[1:])


def test_json_output_and_csv_roundtrip(capsys):
    args = ["sensitivity", "--model", "wf", "--kappa", "7/3", "--t", "0.5,2", "--xi", "x^2", "--xi", "[0,1,1]"]
    _, csv_out, _ = run(capsys, *args)
    _, json_out, _ = run(capsys, *args, "--format", "json")
    doc = json.loads(json_out)
    csv_vals = [float(r["value"]) for r in csv.DictReader(io.StringIO(csv_out))]
    assert len(csv_vals) == 4
    for a, b in zip(csv_vals, [r["value"] for r in doc["rows"]]):
        assert float(f"{a:.15g}") == float(f"{b:.15g}")


def test_determinism(capsys):
    args = ["sensitivity", "--model", "ou", "--t", "0.1,1", "--xi", "x^3", "--format", "json", "--oracle"]
    outs = {run(capsys, *args)[1] for _ in range(3)}
    assert len(outs) == 1


def test_custom_family(tmp_path, capsys):
    path = tmp_path / "fam.json"
    path.write_text(json.dumps(family_to_dict(wf_family(1))))
    code, out, _ = run(capsys, "sensitivity", "--model", "custom", "--family", str(path), "--t", "1", "--xi", "x")
    assert code == 0
    assert float(out.splitlines()[1].split(",")[2]) == pytest.approx(1 - math.exp(-1), abs=1e-12)


def test_out_file(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, stdout, _ = run(capsys, "sensitivity", "--t", "1", "--out", str(out))
    assert code == 0 and stdout == "" and out.read_text().startswith("xi_label")


@pytest.mark.parametrize(
    "argv",
    [
        ["sensitivity", "--t", "-1"],
        ["sensitivity", "--t", "1", "--xi", "x^20", "--degree", "4"],
        ["sensitivity", "--t", "1", "--kappa", "0"],
        ["sensitivity", "--t", "1", "--model", "custom"],
        ["sensitivity", "--t", "1", "--model", "custom", "--family", "/nonexistent.json"],
        ["sensitivity", "--t", "1", "--pi0", "uniform:0,1"],
        ["sensitivity", "--t", "1", "--degree", "-2"],
        ["sensitivity"],
        ["bogus"],
    ],
)
def test_config_errors_exit_1(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_non_stationary_pi0_is_config_error(capsys):
    code, _, err = run(capsys, "sensitivity", "--t", "1", "--pi0", "dirac:1")
    assert code == 1 and "stationary" in err


def test_oracle_discrepancy_exit_2(capsys):
    code, _, err = run(capsys, "sensitivity", "--t", "1", "--xi", "x", "--oracle", "--oracle-tol", "1e-30")
    assert code == 2 and "discrepancy" in err


def test_env_tolerance(monkeypatch, capsys):
    monkeypatch.setenv("SEMISENS_TOL", "1e-10")
    code, out, _ = run(capsys, "sensitivity", "--t", "1", "--format", "json")
    assert code == 0 and json.loads(out)["diagnostics"]["tol"] == 1e-10
    monkeypatch.setenv("SEMISENS_TOL", "zero")
    assert run(capsys, "sensitivity", "--t", "1")[0] == 1


def test_wf_recursion_text(capsys):
    code, out, _ = run(capsys, "wf-recursion", "--n", "2", "--kappa", "1", "--t", "1")
    assert code == 0
    assert "b_2,1 = 2" in out and "b_2,2 = -10" in out
    code, out, _ = run(capsys, "wf-recursion", "--n", "3", "--kappa", "1")
    assert "gamma_3,2 = -6/5" in out


def test_wf_recursion_json(capsys):
    code, out, _ = run(capsys, "wf-recursion", "--n", "4", "--kappa", "1/2", "--t", "0.5,2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert all(r["discrepancy"] <= 1e-8 for r in doc["rows"])
    assert doc["gammas"]["4"] == "1"


def test_wf_recursion_degree_warning(capsys):
    code, _, err = run(capsys, "wf-recursion", "--n", "5", "--degree", "3")
    assert code == 0 and "warning" in err


def test_wf_recursion_bad_n(capsys):
    assert run(capsys, "wf-recursion", "--n", "1")[0] == 1


def test_wf_recursion_tail_failure_exit_2(capsys):
    assert run(capsys, "wf-recursion", "--n", "6", "--t", "2", "--kmax", "10")[0] == 2


@pytest.mark.parametrize("scope", ["stationarity", "lemma", "recursion"])
def test_validate_scopes(capsys, scope):
    code, out, _ = run(capsys, "validate", scope)
    assert code == 0 and "FAIL" not in out


def test_validate_errata(capsys):
    for argv in (["validate", "errata"], ["validate", "--errata"]):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        assert len(json.loads(out)["errata"]) == 6


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "semisens", "sensitivity", "--t", "1", "--xi", "x"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("xi_label")
