import json
import subprocess
import sys

import numpy as np
import pytest

from springopt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(autouse=True)
def _no_env_config(monkeypatch):
    monkeypatch.delenv("SPRINGOPT_CONFIG", raising=False)


def test_list_cases(capsys):
    code, out, _ = run(capsys, "list-cases")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 10
    assert [line.split()[0] for line in lines] == [str(i) for i in range(1, 11)]
    assert lines[8] == "9  s(1,p(s(2,3),4))  R = 1/c1 + 1/(c4 + 1/(1/c2 + 1/c3))"


def test_list_subcases(capsys):
    code, out, _ = run(capsys, "list-cases", "--subcases", "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 16


def test_eval_optimum(capsys):
    code, out, _ = run(capsys, "eval", "--case", "9", "--c", "0.75,0.576923,0.576923,0.173077")
    assert code == 0
    assert "FR=0.500000" in out and "C=2.076923" in out


def test_eval_examples(capsys):
    code, out, _ = run(capsys, "eval", "--case", "2", "--c", "1,1,1,1")
    assert code == 0 and "FR=0.600000" in out
    code, _, _ = run(capsys, "eval", "--case", "9", "--c", "0.1,0.1,0.1,0.1")
    assert code == 2
    code, out, _ = run(capsys, "eval", "--topology", "p(1,2)", "--c", "1,1", "--format", "json")
    assert json.loads(out)["F"] == 2.0


def test_eval_tolerance_flag(capsys):
    c = "0.75,0.576923,0.576923,0.173077"
    assert run(capsys, "eval", "--case", "9", "--c", c, "--tol", "1e-12")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["eval", "--case", "11", "--c", "1,1,1,1"],
        ["eval", "--case", "9", "--c", "1,1,1"],
        ["eval", "--case", "9", "--c", "1,x,1,1"],
        ["eval", "--topology", "s(1,", "--c", "1"],
        ["eval", "--case", "9", "--topology", "s(1,2)", "--c", "1,1"],
        ["solve"],
        ["solve", "--all", "--alpha", "-1"],
        ["regions", "--case", "9"],
        ["verify", "--subcase", "99.9"],
        ["solve", "--all", "--format", "xml"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert "error" in err


def test_solve_all(capsys):
    code, out, _ = run(capsys, "solve", "--all")
    assert code == 0
    assert out.splitlines()[-1].startswith("BEST case=9.1 cost=2.076923 c*=(0.750000, 0.576923, 0.576923, 0.173077)")


def test_solve_case_2(capsys):
    code, out, _ = run(capsys, "solve", "--case", "2", "--format", "csv")
    assert code == 0
    row = out.splitlines()[1].split(",")
    assert row[0] == "2" and float(row[4]) == pytest.approx(3.0)


def test_solve_variants(capsys):
    _, out, _ = run(capsys, "solve", "--all", "--frmin", "0")
    assert "BEST case=8 cost=0.750000" in out
    code, out, _ = run(capsys, "solve", "--all", "--frmin", "10")
    assert code == 2 and "BEST none" in out


def test_csv_output_is_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "solve", "--all", "--format", "csv", "--out", str(a))
    run(capsys, "solve", "--all", "--format", "csv", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("subcase,status,x*,c*,cost,active_constraints\n")


def test_config_precedence(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"params": {"fr_min": 0}, "format": "csv"}))
    _, out, _ = run(capsys, "solve", "--all", "--config", str(cfg))
    assert out.startswith("subcase,")  # file beats default
    monkeypatch.setenv("SPRINGOPT_CONFIG", str(cfg))
    _, out, _ = run(capsys, "solve", "--all", "--format", "text")
    assert "BEST case=8 cost=0.750000" in out  # env file used, flag beats file
    _, out, _ = run(capsys, "solve", "--all", "--format", "text", "--frmin", "0.5")
    assert "BEST case=9.1" in out


def test_bad_config(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"nope": 1}')
    assert run(capsys, "solve", "--all", "--config", str(cfg))[0] == 1
    cfg.write_text("{not json")
    assert run(capsys, "solve", "--all", "--config", str(cfg))[0] == 1


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--all", "--samples", "20000", "--seed", "7")
    assert code == 0
    assert out.splitlines()[-1] == "0 violations across 15 subcases"


def test_verify_threshold_straddle(capsys):
    code, out, _ = run(capsys, "verify", "--case", "9", "--cstar", "2.0", "--samples", "20000")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "verify", "--case", "9", "--cstar", "2.1", "--samples", "20000")
    line = next(l for l in out.splitlines() if l.startswith("9.1"))
    assert "FAIL" in line
    assert code == 0  # the optimal case is allowed to reach its own optimum


def test_verify_violation_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--all", "--cstar", "2.3", "--samples", "20000")
    assert code == 3
    assert "not certified" in out


def test_verify_small_sample_warning(capsys):
    code, _, err = run(capsys, "verify", "--case", "1", "--samples", "10", "--seed", "1")
    assert code == 0
    assert "below the recommended 10000" in err


def test_regions(capsys, tmp_path):
    out_file = tmp_path / "r.csv"
    code, _, _ = run(capsys, "regions", "--subcase", "9.1", "--out", str(out_file), "--res", "50")
    assert code == 0
    data = np.genfromtxt(out_file, delimiter=",", names=True)
    assert data.dtype.names == ("x", "y", "F_tilde_R", "C_tilde", "feasible_strength", "feasible_FR", "in_reduced_domain")
    assert len(data) == 2500


def test_regions_one_dimensional(capsys):
    code, out, _ = run(capsys, "regions", "--subcase", "8", "--res", "30")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 31
    assert lines[0] == "x,F_tilde_R,C_tilde,feasible_strength,feasible_FR,in_reduced_domain"


def test_simulate(capsys, tmp_path):
    out_file = tmp_path / "s.csv"
    code, out, _ = run(
        capsys, "simulate", "--case", "9", "--c", "0.75,0.577,0.577,0.173", "--steps", "5000", "--ramp", "20",
        "--out", str(out_file),
    )
    assert code == 0
    assert out.startswith("F_sim=0.750 F_formula=0.750")
    assert len(out_file.read_text().splitlines()) == 5002
    code, out, err = run(capsys, "simulate", "--topology", "s(1,2)", "--c", "1,2")
    assert "F_sim=1.000" in err and out.startswith("elongation,force\n")
    _, _, err = run(capsys, "simulate", "--case", "8", "--c", "1,1,1,1")
    assert "F_sim=4.000" in err


def test_brute(capsys):
    code, out, _ = run(capsys, "brute", "--case", "2", "--grid-step", "0.05")
    assert code == 0
    assert "MIN case=2 cost=3.000000" in out
    code, _, _ = run(capsys, "brute", "--case", "2", "--grid-step", "0.1", "--grid-max", "0.5")
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "springopt", "list-cases"], capture_output=True, text=True)
    assert proc.returncode == 0 and len(proc.stdout.splitlines()) == 10
