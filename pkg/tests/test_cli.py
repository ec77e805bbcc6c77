import json
import subprocess
import sys
from importlib import resources

import pytest

from debtflow import tau
from debtflow.cli import main

DATA = resources.files("debtflow") / "data"
FY2016_JSON = str(DATA / "fy2016_strategy.json")
RECORDS = str(DATA / "fy2016_issuance.csv")
PATTERN = str(DATA / "example_auction_pattern.json")


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def run_json(capsys, *argv):
    assert main(list(argv)) == 0
    return json.loads(capsys.readouterr().out)


def run_csv(capsys, *argv):
    assert main(list(argv)) == 0
    lines = capsys.readouterr().out.splitlines()
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


class TestMetrics:
    def test_bills(self, capsys, tmp_path):
        out = run_json(capsys, "metrics", write(tmp_path, "f.json", {"1": 1.0}))
        assert out["rr_star"] == 1.0 and out["t_wac"] == 1.0
        assert out["theta_star"] == {"1": 1.0}
        assert out["equilibrium_wam"] == 0.5

    def test_fy2016(self, capsys):
        out = run_json(capsys, "metrics", FY2016_JSON)
        assert abs(out["rr_star"] - 0.253) < 0.0015
        assert round(out["wac_star"], 4) == 0.0439
        assert out["growth_dominance"] is True
        assert out["wac_star"] == 0.0439342  # six significant digits

    def test_g_override(self, capsys, tmp_path):
        out = run_json(capsys, "metrics", write(tmp_path, "f.json", {"3": 1}), "--g", "0.12")
        assert round(out["rr_star"], 3) == 0.296

    def test_assumptions_file_and_env(self, capsys, tmp_path, monkeypatch):
        a = write(tmp_path, "a.json", {"g": 0.12, "rates": [{"tenor": 1, "rate": 0.01}]})
        f = write(tmp_path, "f.json", {"1": 1})
        assert run_json(capsys, "metrics", f, "--assumptions", a)["wac_star"] == 0.01
        monkeypatch.setenv("DEBTFLOW_ASSUMPTIONS", a)
        assert run_json(capsys, "metrics", f)["wac_star"] == 0.01
        assert run_json(capsys, "metrics", f, "--rates", "1:0.02,30:0.05")["wac_star"] == 0.02

    def test_parse_error_line(self, capsys, tmp_path):
        bad = write(tmp_path, "f.json", '{"1": 1.0,\n "2": }')
        assert main(["metrics", bad]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_bad_sum(self, capsys, tmp_path):
        assert main(["metrics", write(tmp_path, "f.json", {"1": 0.5})]) == 2

    def test_missing_file(self, capsys):
        assert main(["metrics", "/nonexistent.json"]) == 2

    def test_growth_warning_and_strict(self, capsys):
        assert main(["metrics", FY2016_JSON, "--g", "0.04"]) == 0
        assert "warning" in capsys.readouterr().err
        assert main(["metrics", FY2016_JSON, "--g", "0.04", "--strict"]) == 3


class TestOutputFiles:
    def test_manifest_sidecar(self, capsys, tmp_path):
        out = tmp_path / "m.json"
        assert main(["metrics", FY2016_JSON, "-o", str(out), "--g", "0.1"]) == 0
        manifest = json.loads((tmp_path / "m.json.manifest.json").read_text())
        assert manifest["command"] == "metrics"
        assert manifest["inputs"] == [FY2016_JSON]
        assert manifest["outputs"] == [str(out)]
        assert manifest["assumptions"]["g"] == 0.1
        assert manifest["tool_version"] == "0.1.0"
        assert "created" in manifest
        assert "created" not in out.read_text()

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for p in (a, b):
            assert main(["history", RECORDS, "--fy", "2016", "-o", str(p)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestSimulate:
    def test_bills_zero_rate(self, capsys, tmp_path):
        cfg = write(tmp_path, "c.json", {
            "strategy": {"1": 1}, "g": 0, "rates": [{"tenor": 1, "rate": 0}],
            "initial_deficit": 100, "horizon": 3,
        })
        rows = run_csv(capsys, "simulate", cfg)
        assert [float(r["N"]) for r in rows] == [100, 200, 300]
        assert [float(r["rr"]) for r in rows] == [1, 1, 1]

    def test_five_year(self, capsys, tmp_path):
        cfg = write(tmp_path, "c.json", {"strategy": {"5": 1}})
        rows = run_csv(capsys, "simulate", cfg)
        assert len(rows) == 300
        assert abs(float(rows[-1]["wac"]) - 0.0422) < 1e-5

    def test_fy2016(self, capsys, tmp_path):
        strategy = json.loads(open(FY2016_JSON).read())
        cfg = write(tmp_path, "c.json", {"strategy": strategy, "renormalize": True})
        rows = run_csv(capsys, "simulate", cfg)
        assert abs(float(rows[-1]["rr"]) - 0.253) < 0.002

    def test_cli_override_beats_config(self, capsys, tmp_path):
        cfg = write(tmp_path, "c.json", {"strategy": {"5": 1}, "g": 0.2, "horizon": 300})
        rows = run_csv(capsys, "simulate", cfg, "--g", "0.08")
        assert abs(float(rows[-1]["rr"]) - tau(5, 0.08)) < 1e-5

    def test_missing_strategy(self, capsys, tmp_path):
        assert main(["simulate", write(tmp_path, "c.json", {"horizon": 3})]) == 2


class TestFrontier:
    def test_zero_growth(self, capsys):
        rows = run_csv(capsys, "frontier", "--g", "0", "--R-grid", "0.2")
        assert float(rows[0]["j_star"]) == 5.0

    def test_table_inversions(self, capsys):
        rows = run_csv(capsys, "frontier")
        assert [int(r["j_lower"]) for r in rows] == [1, 2, 3, 5, 7, 10, 30]
        assert [round(float(r["j_star"]), 6) for r in rows] == [1, 2, 3, 5, 7, 10, 30]

    def test_below_longest(self, capsys):
        assert main(["frontier", "--R-grid", "0.001"]) == 3


class TestOptimize:
    def test_unconstrained(self, capsys, tmp_path):
        w = write(tmp_path, "w.json", {})
        out = run_json(capsys, "optimize", w, "--R", repr(tau(5, 0.08)))
        assert out["optimum"]["optimal_f"]["5"] == 1.0
        assert out["optimum"]["objective"] == 0.0422

    def test_dominant(self, capsys, tmp_path):
        f = json.loads(open(FY2016_JSON).read())
        w = write(tmp_path, "w.json", {
            "lower": {k: max(v - 0.05, 0) for k, v in f.items()},
            "upper": {k: v + 0.05 for k, v in f.items()},
        })
        out = run_json(capsys, "optimize", w, "--R", "0.3", "--current", FY2016_JSON)
        assert out["cost_dominant"]["metrics"]["wac_star"] < out["current"]["wac_star"]
        assert out["risk_dominant"]["metrics"]["rr_star"] < out["current"]["rr_star"]

    def test_infeasible(self, capsys, tmp_path):
        w = write(tmp_path, "w.json", {"upper": {"10": 0, "30": 0}})
        assert main(["optimize", w, "--R", "0.05"]) == 3


class TestHistory:
    def test_fixture(self, capsys):
        rows = run_csv(capsys, "history", RECORDS, "--fy", "2016")
        assert len(rows) == 1
        assert abs(float(rows[0]["rr_star"]) - 0.253) < 0.0015
        assert abs(float(rows[0]["wac_star"]) - 0.0439) < 0.0005

    def test_identical_windows(self, capsys):
        rows = run_csv(
            capsys, "history", RECORDS, "--fy", "2016", "--range", "2015-10-01:2016-09-30"
        )
        assert {k: v for k, v in rows[0].items() if k != "period"} == {
            k: v for k, v in rows[1].items() if k != "period"
        }

    def test_empty(self, capsys):
        assert main(["history", RECORDS, "--fy", "2010"]) == 2

    def test_exclude_class(self, capsys):
        rows = run_csv(capsys, "history", RECORDS, "--fy", "2016", "--exclude-class", "tips")
        assert float(rows[0]["f_1"]) > 0.423

    def test_no_window(self, capsys):
        assert main(["history", RECORDS]) == 2


class TestScenario:
    def test_three_policies(self, capsys, tmp_path):
        gaps = write(tmp_path, "gaps.json", [150.0] * 10)
        rr = {}
        for policy in ("bills_only", "twist_short", "coupons_pro_rata"):
            rows = run_csv(capsys, "scenario", PATTERN, "--policy", policy, "--gaps", gaps)
            assert len(rows) == 11
            rr[policy] = [float(r["rr_star"]) for r in rows[1:]]
        for a, b, c in zip(rr["bills_only"], rr["twist_short"], rr["coupons_pro_rata"]):
            assert a > b > c

    def test_gap_csv(self, capsys, tmp_path):
        gaps = write(tmp_path, "gaps.csv", "year,gap\n1,0\n2,0\n")
        rows = run_csv(capsys, "scenario", PATTERN, "--policy", "bills_only", "--gaps", gaps)
        assert rows[0]["rr_star"] == rows[2]["rr_star"]


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "debtflow", "metrics", FY2016_JSON],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(res.stdout)["t_wac"] == pytest.approx(10.02, abs=0.01)
