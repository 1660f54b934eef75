"""End-to-end CLI behavior: outputs, exit codes, determinism."""

import csv
import json

import numpy as np
import pytest

from pcskill.cli import main
from pcskill.core import GridField
from pcskill.fileio import write_grid, write_series


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def series_file(tmp_path, x, y, name="s.csv"):
    path = tmp_path / name
    write_series(np.arange(len(x)), x, y, path)
    return str(path)


def grid_file(tmp_path, values, name, lats=(0.0, 60.0), lons=(0.0, 180.0)):
    values = np.asarray(values, dtype=np.float64)
    field = GridField(
        times=np.arange(values.shape[0]),
        lats=list(lats),
        lons=list(lons),
        values=values,
        variable="t",
        units="K",
    )
    path = tmp_path / name
    write_grid(field, path)
    return str(path)


class TestPcCommand:
    def test_monotone_series_text(self, tmp_path, capsys):
        path = series_file(tmp_path, [1.0, 2.0, 3.0], [10.0, 20.0, 30.0])
        code, out, err = run_cli(capsys, "pc", "--input", path)
        assert code == 0 and err == ""
        lines = dict(line.split() for line in out.strip().splitlines())
        assert float(lines["pc"]) == 0.0
        assert float(lines["pcs"]) == 1.0
        assert "ql_0.9" in lines

    def test_reversed_pair_json(self, tmp_path, capsys):
        path = series_file(tmp_path, [1.0, 2.0], [2.0, 1.0])
        code, out, _ = run_cli(capsys, "pc", "--input", path, "--json")
        assert code == 0
        report = json.loads(out)
        assert report["pc"] == 0.25
        assert report["pc0"] == 0.25
        assert report["pcs"] == 0.0
        assert report["n"] == 2

    def test_alpha_flag_changes_label(self, tmp_path, capsys):
        path = series_file(tmp_path, [1.0, 2.0, 3.0], [3.0, 1.0, 2.0])
        code, out, _ = run_cli(capsys, "pc", "--input", path,
                               "--alpha", "0.5")
        assert code == 0 and "ql_0.5" in out

    def test_malformed_csv_exits_2_with_line(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("time,x,y\r\n1,2.0,3.0\r\n2,nope,4.0\r\n",
                        encoding="utf-8")
        code, _, err = run_cli(capsys, "pc", "--input", str(path))
        assert code == 2
        assert "line 3" in err

    def test_missing_file_exits_2(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "pc", "--input",
                               str(tmp_path / "absent.csv"))
        assert code == 2 and "error" in err

    def test_nonfinite_value_exits_3(self, tmp_path, capsys):
        path = tmp_path / "nan.csv"
        path.write_text("time,x,y\r\n1,nan,3.0\r\n", encoding="utf-8")
        code, _, err = run_cli(capsys, "pc", "--input", str(path))
        assert code == 3 and "error" in err


class TestGridEvalCommand:
    def make_pair(self, tmp_path):
        rng = np.random.default_rng(7)
        truth = rng.normal(size=(40, 2, 2))
        forecast = truth + 0.1 * np.tanh(truth)  # monotone distortion
        f = grid_file(tmp_path, forecast, "f.grid")
        t = grid_file(tmp_path, truth, "t.grid")
        return f, t, truth

    def test_writes_cells_and_aggregate(self, tmp_path, capsys):
        f, t, _ = self.make_pair(tmp_path)
        out = str(tmp_path / "cells.csv")
        code, stdout, _ = run_cli(capsys, "grid-eval", "--forecast", f,
                                  "--truth", t, "--out", out)
        assert code == 0
        with open(out, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["lat", "lon", "n_used", "pc", "pc0", "pcs"]
        assert len(rows) == 5  # header + 4 cells
        # monotone distortion preserves ranks, so every cell has pcs = 1
        assert all(float(r[5]) == 1.0 for r in rows[1:])
        with open(f"{out}.json", encoding="utf-8") as fh:
            aggregate = json.load(fh)
        assert aggregate["n_cells_used"] == 4
        assert aggregate["aggregate_pcs"] == 1.0
        assert aggregate["excluded"] == []
        assert "aggregate_pcs=1.0" in stdout

    def test_skill_ref_output(self, tmp_path, capsys):
        f, t, truth = self.make_pair(tmp_path)
        rng = np.random.default_rng(8)
        noisy = truth + rng.normal(scale=2.0, size=truth.shape)
        ref = grid_file(tmp_path, noisy, "ref.grid")
        out = str(tmp_path / "cells.csv")
        code, _, _ = run_cli(capsys, "grid-eval", "--forecast", f,
                             "--truth", t, "--out", out,
                             "--skill-ref", ref)
        assert code == 0
        with open(f"{out}.skill.csv", newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["lat", "lon", "skill"]
        assert len(rows) == 5
        # perfect-rank forecast has pc = 0, so skill vs any ref is 1
        assert all(float(r[2]) == 1.0 for r in rows[1:])

    def test_coordinate_mismatch_exits_3(self, tmp_path, capsys):
        rng = np.random.default_rng(9)
        f = grid_file(tmp_path, rng.normal(size=(10, 2, 2)), "f.grid")
        t = grid_file(tmp_path, rng.normal(size=(10, 2, 2)), "t.grid",
                      lats=(0.0, 50.0))
        code, _, err = run_cli(capsys, "grid-eval", "--forecast", f,
                               "--truth", t,
                               "--out", str(tmp_path / "o.csv"))
        assert code == 3 and "lats" in err

    def test_truncated_grid_exits_2(self, tmp_path, capsys):
        rng = np.random.default_rng(10)
        f = grid_file(tmp_path, rng.normal(size=(10, 2, 2)), "f.grid")
        broken = tmp_path / "broken.grid"
        broken.write_bytes(open(f, "rb").read()[:-4])
        code, _, err = run_cli(capsys, "grid-eval", "--forecast",
                               str(broken), "--truth", f,
                               "--out", str(tmp_path / "o.csv"))
        assert code == 2 and "error" in err


class TestCompareCommand:
    def test_outputs_and_determinism(self, tmp_path, capsys):
        rng = np.random.default_rng(12)
        truth = rng.normal(size=(60, 2, 2))
        a = truth + 0.05 * np.tanh(truth)
        b = truth + rng.normal(scale=1.5, size=truth.shape)
        fa = grid_file(tmp_path, a, "a.grid")
        fb = grid_file(tmp_path, b, "b.grid")
        ft = grid_file(tmp_path, truth, "t.grid")
        out1 = str(tmp_path / "p1.csv")
        out2 = str(tmp_path / "p2.csv")
        args = ["compare", "--model-a", fa, "--model-b", fb, "--truth", ft,
                "--lead-days", "2", "--permutations", "200", "--seed", "42"]
        code1, _, _ = run_cli(capsys, *args, "--out", out1)
        code2, _, _ = run_cli(capsys, *args, "--out", out2, "--threads", "3")
        assert code1 == 0 and code2 == 0
        assert open(out1, "rb").read() == open(out2, "rb").read()

        with open(out1, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["lat", "lon", "p"]
        p_values = [float(r[2]) for r in rows[1:]]
        assert len(p_values) == 4
        # rank-preserving model A dominates noisy B at every cell
        assert all(p <= 0.05 for p in p_values)

        with open(f"{out1}.summary.csv", newline="",
                  encoding="utf-8") as fh:
            srows = list(csv.reader(fh))
        assert srows[0][:2] == ["lead_days", "n_cells"]
        assert srows[1][0] == "2" and srows[1][1] == "4"
        assert float(srows[1][2]) <= float(srows[1][6])  # min <= max

    def test_bad_lead_days_exits_3(self, tmp_path, capsys):
        rng = np.random.default_rng(13)
        g = grid_file(tmp_path, rng.normal(size=(10, 2, 2)), "g.grid")
        code, _, err = run_cli(capsys, "compare", "--model-a", g,
                               "--model-b", g, "--truth", g,
                               "--lead-days", "0",
                               "--out", str(tmp_path / "o.csv"))
        assert code == 3 and "error" in err


class TestSimulateCommand:
    def test_smoke(self, tmp_path, capsys):
        out = str(tmp_path / "table.csv")
        code, stdout, _ = run_cli(capsys, "simulate", "--n", "200",
                                  "--seed", "4", "--out", out)
        assert code == 0
        with open(out, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "model" and len(rows) == 5
        svg = open(f"{out}.svg", encoding="utf-8").read()
        assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
        assert "state" in stdout and "cond-q90" in stdout

    def test_deterministic_outputs(self, tmp_path, capsys):
        out1, out2 = str(tmp_path / "t1.csv"), str(tmp_path / "t2.csv")
        run_cli(capsys, "simulate", "--n", "150", "--seed", "9",
                "--out", out1)
        run_cli(capsys, "simulate", "--n", "150", "--seed", "9",
                "--out", out2)
        assert open(out1, "rb").read() == open(out2, "rb").read()

    def test_squared_flag(self, tmp_path, capsys):
        out = str(tmp_path / "sq.csv")
        code, _, _ = run_cli(capsys, "simulate", "--n", "200", "--seed", "4",
                             "--squared", "--out", out)
        assert code == 0

    def test_invalid_n_exits_3(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "simulate", "--n", "0",
                               "--out", str(tmp_path / "o.csv"))
        assert code == 3 and "error" in err


class TestParserShape:
    def test_main_requires_subcommand(self, capsys):
        with pytest.raises(SystemExit):
            main([])

    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit):
            main(["frobnicate"])
