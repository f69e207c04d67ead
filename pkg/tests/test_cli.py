import json
import subprocess
import sys

import pytest

from thetapack.cli import main


def run_cli(args, tmp_path=None):
    import contextlib
    import io

    out = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(args)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def triangle_file(tmp_path):
    p = tmp_path / "tri.txt"
    p.write_text("0 1\n1 2\n0 2\n")
    return str(p)


class TestGen:
    def test_gen_theta(self, tmp_path):
        code, out, _ = run_cli(["gen", "--family", "theta", "--param", "r=3"])
        assert code == 0
        assert "0 1 3" in out

    def test_gen_to_file(self, tmp_path):
        dest = tmp_path / "w.txt"
        code, _, _ = run_cli(["gen", "--family", "wall", "--param", "n=4", "--out", str(dest)])
        assert code == 0
        assert dest.exists()

    def test_bad_family(self):
        code, _, err = run_cli(["gen", "--family", "fan", "--param", "q=2"])
        assert code == 2


class TestSolve:
    def test_solve_triangle(self, triangle_file, tmp_path):
        dest = tmp_path / "res.json"
        code, _, _ = run_cli(
            ["solve", "--input", triangle_file, "--r", "2", "--mode", "v", "--out", str(dest)]
        )
        assert code == 0
        res = json.loads(dest.read_text())
        assert res["k0"] == 2
        assert "covering" in res

    def test_solve_fixed_k(self, triangle_file):
        code, out, _ = run_cli(
            ["solve", "--input", triangle_file, "--r", "2", "--mode", "e", "--k", "1"]
        )
        assert code == 0
        res = json.loads(out)
        assert res["outcome"] == "packing"

    def test_missing_file(self):
        code, _, err = run_cli(["solve", "--input", "/nonexistent", "--r", "2", "--mode", "v"])
        assert code == 2


class TestOracle:
    def test_oracle_triangle(self, triangle_file):
        code, out, _ = run_cli(
            ["oracle", "--input", triangle_file, "--r", "2", "--mode", "e"]
        )
        assert code == 0
        res = json.loads(out)
        assert res["pack"] == 1 and res["cover"] == 1

    def test_oracle_double_theta(self, tmp_path):
        p = tmp_path / "dt.txt"
        p.write_text("0 1 2\n0 2 2\n")
        code, out, _ = run_cli(
            ["oracle", "--input", str(p), "--r", "2", "--rr", "2", "--mode", "e"]
        )
        assert code == 0
        res = json.loads(out)
        assert res["pack"] == 1 and res["cover"] == 1


class TestBench:
    def test_bench_reproducible(self, tmp_path):
        cfg = {
            "seed": 11,
            "oracle_cap": 12,
            "instances": [
                {"id": "t2", "family": "triangles", "params": {"k": 2}, "r": 2, "mode": "v"},
                {"id": "rnd", "family": "random", "params": {"n": 8, "m": 10, "max_mult": 2}, "r": 2, "mode": "e"},
                {"id": "dt", "family": "theta_double", "params": {"r": 2, "rp": 2}, "r": 2, "rp": 2, "mode": "e", "approx": False},
            ],
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        out1 = tmp_path / "run1"
        out2 = tmp_path / "run2"
        code1, csv1, _ = run_cli(["bench", "--config", str(cfg_path), "--out", str(out1)])
        code2, csv2, _ = run_cli(["bench", "--config", str(cfg_path), "--out", str(out2)])
        assert code1 == code2 == 0
        assert csv1 == csv2
        assert (out1.with_suffix(".csv")).read_text() == (out2.with_suffix(".csv")).read_text()
        rows = csv1.strip().splitlines()
        assert rows[0].startswith("schema,instance")
        assert len(rows) == 4
        # the double-theta row records the oracle pair
        dt_row = [r for r in rows if r.split(",")[1] == "dt"][0]
        assert ",1,1," in dt_row or ",1,1" in dt_row

    def test_bench_empty(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"seed": 0, "instances": []}))
        code, out, _ = run_cli(["bench", "--config", str(cfg_path), "--out", str(tmp_path / "b")])
        assert code == 0
        assert out.strip().startswith("schema,")

    def test_bench_error_recorded_and_continues(self, tmp_path):
        cfg = {
            "seed": 0,
            "instances": [
                {"id": "bad", "family": "nope", "params": {}},
                {"id": "ok", "family": "theta", "params": {"r": 2}, "r": 2, "mode": "v"},
            ],
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        code, out, _ = run_cli(["bench", "--config", str(cfg_path), "--out", str(tmp_path / "b")])
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 3
        assert "error" in lines[1]
        assert lines[2].split(",")[1] == "ok"


class TestEntryPoint:
    def test_module_runs(self, triangle_file):
        proc = subprocess.run(
            [sys.executable, "-m", "thetapack.cli", "oracle", "--input", triangle_file,
             "--r", "2", "--mode", "v"],
            capture_output=True,
            text=True,
            cwd="/root/pkg",
        )
        assert proc.returncode == 0
        assert '"pack": 1' in proc.stdout
