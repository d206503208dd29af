import json

import pytest

from fracineq import cli
from fracineq.bounds import AS_STATED, PROOF_CONSISTENT, evaluate
from fracineq.harness import (
    CSV_COLUMNS,
    ConfigError,
    SweepConfig,
    run_sweep,
    sharpness_search,
)

SMALL = dict(
    theorem_ids=["E1", "e13", "e14", "T1", "L1", "T2", "h1", "kk", "h2"],
    functions=["power:0.5", "power:2", "exp:1", "affine:1,2"],
    alpha_grid=[0.5, 2.0],
    s_grid=[0.5],
    m_grid=[0.5, 1.0],
    q_grid=[1.0, 2.0],
    intervals=[[0.0, 1.0], [1.0, 3.0]],
)


@pytest.fixture(scope="module")
def small_report():
    return run_sweep(SweepConfig(**SMALL))


class TestConfig:
    @pytest.mark.parametrize(
        "override",
        [
            {"alpha_grid": []},
            {"s_grid": [0.0]},
            {"m_grid": [1.5]},
            {"q_grid": [0.5]},
            {"theorem_ids": ["X"]},
            {"variants": ["both"]},
            {"intervals": [[2, 1]]},
            {"functions": ["nope:1"]},
        ],
    )
    def test_invalid(self, override):
        with pytest.raises(ConfigError):
            SweepConfig(**override)

    def test_from_dict_layout(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"theorems": ["T1"], "tolerance": {"abs": 1e-9}, "output": {"json": "x.json"}}))
        cfg = SweepConfig.load(path)
        assert cfg.theorem_ids == ["T1"] and cfg.abs_tol == 1e-9 and cfg.out_json == "x.json"

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            SweepConfig.from_dict({"colour": "red"})


class TestSweep:
    def test_single_cell(self):
        cfg = SweepConfig(theorem_ids=["T1"], functions=["power:1"], s_grid=[1.0], alpha_grid=[1.0],
                          intervals=[[0.0, 1.0]], variants=[AS_STATED])
        rep = run_sweep(cfg)
        assert rep.runtime["cells_evaluated"] == 1
        cell = rep.cells[0]
        assert cell["terms"]["lhs"] == pytest.approx(0.5) and cell["terms"]["mid"] == pytest.approx(0.5)
        assert cell["verdict"] == "equality-within-tol"

    def test_counts_sum(self, small_report):
        for key, entry in small_report.summary.items():
            theorem, variant = key.split("/")
            n = sum(1 for c in small_report.cells if c["theorem_id"] == theorem and c["variant"] == variant)
            assert entry["holds"] + entry["violated"] + entry["equality-within-tol"] == n

    def test_skips_have_reasons(self, small_report):
        assert small_report.skipped
        reasons = {s["reason"] for s in small_report.skipped}
        assert any("unbounded" in r for r in reasons)  # power:0.5 derivative at 0
        assert any("m-convex" in r for r in reasons)  # exp:1 with m < 1

    def test_worst_cell_replays(self, small_report):
        for key, entry in small_report.summary.items():
            theorem, variant = key.split("/")
            cell = dict(entry["worst_cell"])
            spec, a, b = cell.pop("f"), cell.pop("a"), cell.pop("b")
            r = evaluate(theorem, spec, a, b, cell, variant)
            wm = -r.residual if r.kind == "identity" else min(r.margins.values())
            assert wm == entry["worst_margin"]

    def test_violations_replay(self, small_report):
        for c in small_report.cells:
            if c["verdict"] != "violated":
                continue
            params = {k: v for k, v in c["inputs"].items() if k not in ("f", "a", "b")}
            r = evaluate(c["theorem_id"], c["inputs"]["f"], c["inputs"]["a"], c["inputs"]["b"], params, c["variant"])
            assert min(r.margins.values()) < 0

    def test_parallel_equals_serial(self, small_report):
        par = run_sweep(SweepConfig(**SMALL, workers=2))
        assert par.to_json() == small_report.to_json()

    def test_csv_schema(self, small_report):
        lines = small_report.to_csv().splitlines()
        assert lines[0].split(",") == list(CSV_COLUMNS)
        assert len(lines) == len(small_report.cells) + 1


class TestSharpness:
    def test_e13_power_family(self):
        rec = sharpness_search("e13", "power:s", {"s": [0.25, 0.5, 0.75]})
        assert all(abs(p["margin"]) <= 1e-9 for p in rec.points)

    def test_classical_square(self):
        rec = sharpness_search("E1", "quadratic:0,0,1", {})
        assert rec.min_margin == pytest.approx(1 / 6, abs=1e-12)

    def test_T1_affine_alpha_grid(self):
        rec = sharpness_search("T1", "power:1", {"alpha": [0.25, 0.5, 1, 2, 3]}, variant=PROOF_CONSISTENT,
                               fixed={"s": 1.0})
        assert all(abs(p["margin"]) <= 1e-9 for p in rec.points)

    def test_identity_rejected(self):
        with pytest.raises(ValueError):
            sharpness_search("L1", "power:2", {"alpha": [1.0]})


class TestCli:
    def test_eval_both(self, capsys):
        argv = "eval --theorem T1 --f power:1 --a 0 --b 1 --s 1 --alpha 2 --variant both".split()
        assert cli.main(argv) == 0
        out = capsys.readouterr().out
        assert "[as-stated] margins: lower=0, upper=-0.25 -> violated" in out
        assert "[proof-consistent]" in out and "equality-within-tol" in out

    def test_eval_strict(self):
        argv = "eval --theorem T1 --f power:1 --a 0 --b 1 --s 1 --alpha 2 --strict".split()
        assert cli.main(argv) == 1

    def test_eval_json(self, capsys):
        argv = "eval --theorem L1 --f power:3 --a 0 --b 1 --alpha 0.5 --variant as-stated --json".split()
        assert cli.main(argv) == 0
        data = json.loads(capsys.readouterr().out)
        assert data[0]["margins"]["residual"] <= 1e-9

    def test_convexity(self, capsys):
        argv = "convexity --f power:0.5 --class s-convex --s 0.5 --a 0 --b 2".split()
        assert cli.main(argv) == 0
        assert capsys.readouterr().out.strip() == "holds (grid 33³ + 10000 random)"

    def test_convexity_violation(self, capsys):
        argv = "convexity --f quadratic:0,0,-1 --class convex --a 0 --b 1 --strict".split()
        assert cli.main(argv) == 1
        assert "violated at x=0, y=1, t=0.5" in capsys.readouterr().out

    def test_sharpness(self, capsys):
        assert cli.main("sharpness --theorem e13 --f power:s --grid s=0.25,0.5,0.75".split()) == 0
        assert "minimal rhs margin" in capsys.readouterr().out

    def test_sweep_writes_files(self, tmp_path, capsys):
        cfg = tmp_path / "sweep.json"
        cfg.write_text(json.dumps({"theorems": ["T1"], "functions": ["power:1"], "alpha_grid": [2],
                                   "s_grid": [1], "intervals": [[0, 1]]}))
        out, csv_path = tmp_path / "r.json", tmp_path / "r.csv"
        argv = ["sweep", "--config", str(cfg), "--out", str(out), "--csv", str(csv_path)]
        assert cli.main(argv) == 0
        assert json.loads(out.read_text())["summary"]["T1/as-stated"]["violated"] == 1
        assert csv_path.read_text().count("\n") == 3
        assert cli.main(argv + ["--strict"]) == 1

    @pytest.mark.parametrize(
        "argv",
        [
            ["bogus"],
            ["eval", "--theorem", "T1"],
            ["eval", "--theorem", "T1", "--f", "nope:1", "--a", "0", "--b", "1", "--s", "1", "--alpha", "2"],
            ["eval", "--theorem", "T1", "--f", "power:1", "--a", "0", "--b", "1"],
            ["sweep", "--config", "/nonexistent/sweep.json"],
            ["convexity", "--f", "power:1", "--class", "s-convex", "--a", "0", "--b", "1"],
        ],
    )
    def test_errors_exit_2(self, argv):
        assert cli.main(argv) == 2

    def test_empty_alpha_grid_config(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"alpha_grid": []}))
        assert cli.main(["sweep", "--config", str(cfg)]) == 2
