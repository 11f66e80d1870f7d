import json
import subprocess
import sys
from pathlib import Path

import pytest

PKG = Path(__file__).resolve().parents[1]


def run_cli(args, outdir):
    cmd = [sys.executable, "-m", "zoomax", *args, "--outdir", str(outdir)]
    return subprocess.run(cmd, capture_output=True, text=True, cwd=PKG)


def summary_of(outdir):
    data = json.loads((Path(outdir) / "summary.json").read_text())
    data.pop("wall_time_s", None)
    return data


class TestExitCodes:
    def test_valid_contraction_exits_zero(self, tmp_path):
        proc = run_cli(["contract", "validate", "--seq", "exp:lambda=0.693"], tmp_path)
        assert proc.returncode == 0, proc.stderr

    def test_counterexample_exits_one(self, tmp_path):
        proc = run_cli(["contract", "validate", "--seq", "power:a=2,b=0.5"], tmp_path)
        assert proc.returncode == 1
        summary = summary_of(tmp_path)
        assert summary["headline"]["verdict"] == "invalid"
        assert "(1, 1)" in summary["headline"]["supermultiplicative_detail"] or "a_1" in summary["headline"]["supermultiplicative_detail"]

    def test_unknown_map_exits_two(self, tmp_path):
        proc = run_cli(
            ["ergopt", "subaction", "--map", "nosuchmap", "--potential", "mixed"],
            tmp_path,
        )
        assert proc.returncode == 2
        err = json.loads(proc.stderr)
        assert err["error"] == "InvalidInputError"

    def test_budget_exits_three(self, tmp_path):
        proc = run_cli(
            [
                "ergopt",
                "subaction",
                "--map",
                "doubling",
                "--potential",
                "mixed",
                "--depth",
                "30",
                "--grid",
                "4",
            ],
            tmp_path,
        )
        assert proc.returncode == 3
        err = json.loads(proc.stderr)
        assert err["error"] == "BudgetError"

    def test_sandwich_hypothesis_error_exits_one(self, tmp_path):
        proc = run_cli(
            [
                "ergopt",
                "sandwich",
                "--map",
                "doubling",
                "--potential",
                "one-minus-cos",
                "--depth",
                "8",
                "--grid",
                "8",
            ],
            tmp_path,
        )
        assert proc.returncode == 1
        err = json.loads(proc.stderr)
        assert err["error"] == "HypothesisError"
        assert "0.333" in err["witness"]

    def test_unknown_config_key_exits_two(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus_knob": 3}))
        proc = run_cli(
            [
                "contract",
                "validate",
                "--seq",
                "exp:lambda=1",
                "--config",
                str(cfg),
            ],
            tmp_path,
        )
        assert proc.returncode == 2


class TestArtifacts:
    def test_subaction_writes_csv_and_summary(self, tmp_path):
        proc = run_cli(
            [
                "ergopt",
                "subaction",
                "--map",
                "doubling",
                "--potential",
                "mixed",
                "--depth",
                "10",
                "--grid",
                "8",
                "--tol",
                "1e-2",
            ],
            tmp_path,
        )
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "subaction.csv").exists()
        body = (tmp_path / "subaction.csv").read_text().splitlines()
        assert body[0] == "grid_x,lambda,defect"
        assert len(body) == 1 + 2**8
        summary = summary_of(tmp_path)
        assert summary["headline"]["min_defect"] >= -1e-2

    def test_zoom_times_csv(self, tmp_path):
        proc = run_cli(
            [
                "zoom",
                "times",
                "--map",
                "doubling",
                "--x0",
                "0.37",
                "--sigma",
                "0.5",
                "--horizon",
                "50",
            ],
            tmp_path,
        )
        assert proc.returncode == 0, proc.stderr
        lines = (tmp_path / "times.csv").read_text().splitlines()
        assert lines[0] == "n,is_time"
        assert all(line.endswith(",1") for line in lines[1:])

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seq": "power:a=2,b=1", "nmax": 16}))
        proc = run_cli(
            ["contract", "validate", "--seq", "power:a=2,b=1", "--config", str(cfg)],
            tmp_path,
        )
        assert proc.returncode == 0, proc.stderr
        summary = summary_of(tmp_path)
        assert summary["inputs"]["nmax"] == 16


class TestDeterminism:
    @pytest.mark.parametrize(
        "args",
        [
            [
                "ergopt",
                "subaction",
                "--map",
                "doubling",
                "--potential",
                "mixed",
                "--depth",
                "10",
                "--grid",
                "8",
            ],
            ["zoom", "freq", "--map", "quadratic:a=2", "--sigma", "0.9", "--beta", "1",
             "--points", "10", "--horizon", "100"],
            ["shift", "check", "--weights", "geom:q=0.25", "--contraction",
             "power:a=2,b=1", "--pairs", "100", "--depth", "10"],
        ],
    )
    def test_reruns_are_byte_identical(self, tmp_path, args):
        out1 = tmp_path / "run1"
        out2 = tmp_path / "run2"
        p1 = run_cli(args, out1)
        p2 = run_cli(args, out2)
        assert p1.returncode == p2.returncode
        csvs1 = sorted(f.name for f in out1.glob("*.csv"))
        csvs2 = sorted(f.name for f in out2.glob("*.csv"))
        assert csvs1 == csvs2
        for name in csvs1:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
        s1, s2 = summary_of(out1), summary_of(out2)
        s1["inputs"].pop("outdir")
        s2["inputs"].pop("outdir")
        assert s1 == s2
