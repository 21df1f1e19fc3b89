import json
import subprocess
import sys

import pytest


def run_cli(*args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "tfode.cli", *args],
        capture_output=True, text=True, cwd=cwd,
    )


class TestSolveCommand:
    def test_builtin_problem(self, tmp_path):
        r = run_cli(
            "solve", "--kind", "caputo", "--alpha", "0.5", "--lambda", "2",
            "--rhs", "builtin:example2", "--b", "1", "--steps", "40",
            "--NI", "7", "--out", "trace.csv", cwd=tmp_path,
        )
        assert r.returncode == 0, r.stderr
        lines = (tmp_path / "trace.csv").read_text().splitlines()
        assert lines[0] == "t,u,u_exact,abs_error"
        assert len(lines) == 42

    def test_expression_rhs(self, tmp_path):
        r = run_cli(
            "solve", "--alpha", "0.9", "--lambda", "5", "--rhs=-u",
            "--init", "1", "--b", "1.1", "--steps", "22", "--NI", "2",
            "--split-t0", "0.1", "--ntilde", "40",
            "--exact", "exp(-lambda*t)*ml(alpha,1,-t^alpha)",
            "--out", "t.csv", cwd=tmp_path,
        )
        assert r.returncode == 0, r.stderr
        assert "max error" in r.stdout

    def test_exact_from_builtin(self, tmp_path):
        r = run_cli(
            "solve", "--alpha", "0.9", "--lambda", "5", "--rhs=-u",
            "--init", "1", "--b", "1.1", "--steps", "22", "--NI", "2",
            "--split-t0", "0.1", "--exact", "builtin:example3",
            "--out", "t.csv", cwd=tmp_path,
        )
        assert r.returncode == 0, r.stderr
        header = (tmp_path / "t.csv").read_text().splitlines()[0]
        assert header == "t,u,u_exact,abs_error"

    def test_relax_alias_with_mu(self, tmp_path):
        r = run_cli(
            "solve", "--alpha", "0.9", "--lambda", "2", "--rhs", "builtin:relax",
            "--mu", "3", "--b", "1.1", "--steps", "22", "--NI", "2",
            "--split-t0", "0.1", "--out", "r.csv", cwd=tmp_path,
        )
        assert r.returncode == 0, r.stderr
        assert "max error" in r.stdout

    def test_parse_error_exit_code(self, tmp_path):
        r = run_cli("solve", "--alpha", "0.5", "--rhs", "t +", "--init", "1",
                    "--b", "1", "--steps", "30", "--NI", "3", cwd=tmp_path)
        assert r.returncode == 4
        assert "offset" in r.stderr

    def test_config_error_exit_code(self, tmp_path):
        r = run_cli("solve", "--alpha", "0.9", "--rhs", "builtin:example3",
                    "--b", "1.1", "--steps", "22", "--NI", "2",
                    "--split-t0", "0.013", cwd=tmp_path)
        assert r.returncode == 2

    def test_blow_up_exit_code(self, tmp_path):
        r = run_cli("solve", "--alpha", "0.5", "--rhs", "u*u", "--init", "2",
                    "--b", "4", "--steps", "64", "--NI", "3", cwd=tmp_path)
        assert r.returncode == 3
        assert "blow-up" in r.stderr


class TestSweepCommand:
    def test_sweep_from_config(self, tmp_path):
        cfg = {
            "problem": "example2", "alphas": [0.5], "lambdas": [2.0],
            "taus": [0.1, 0.05], "NI": 7, "T": 1.0, "out": "rep.csv",
        }
        (tmp_path / "sweep.json").write_text(json.dumps(cfg))
        r = run_cli("sweep", "--config", "sweep.json", cwd=tmp_path)
        assert r.returncode == 0, r.stderr
        lines = (tmp_path / "rep.csv").read_text().splitlines()
        assert lines[0] == "alpha,lambda,tau,max_error,order,wall_ms"
        assert len(lines) == 3

    def test_cli_overrides_config(self, tmp_path):
        cfg = {
            "problem": "example2", "alphas": [0.5], "lambdas": [2.0],
            "taus": [0.1], "NI": 7, "T": 1.0,
        }
        (tmp_path / "sweep.json").write_text(json.dumps(cfg))
        r = run_cli("sweep", "--config", "sweep.json", "--NI", "3",
                    "--out", "o.csv", cwd=tmp_path)
        assert r.returncode == 0, r.stderr
        assert (tmp_path / "o.csv").exists()

    def test_bad_config_key(self, tmp_path):
        (tmp_path / "sweep.json").write_text(json.dumps({"bogus": 1}))
        r = run_cli("sweep", "--config", "sweep.json", cwd=tmp_path)
        assert r.returncode == 2


class TestTablesCommand:
    def test_table4(self, tmp_path):
        r = run_cli("tables", "--which", "4", cwd=tmp_path)
        assert r.returncode == 0, r.stderr
        lines = (tmp_path / "table4.csv").read_text().splitlines()
        assert lines[0] == "alpha,lambda,tau,max_error,order"
        assert len(lines) == 13  # 3 alphas x 4 taus

    def test_invalid_table(self, tmp_path):
        r = run_cli("tables", "--which", "9", cwd=tmp_path)
        assert r.returncode == 2
