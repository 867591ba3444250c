import json
import math

import numpy as np
import pytest

from lzcqed.analytic import pud_finite_t
from lzcqed.cli import cmd_run, cmd_sweep, main


def write_config(path, **kw):
    base = dict(g=0.04, v=0.05, gamma=0.0, temperature=0.01, n_trunc=6,
                t_start=-400.0, t_end=400.0)
    base.update(kw)
    lines = ["# test configuration"]
    for k, v in base.items():
        lines.append(f"{k} = {v}")
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path):
    meta, header, rows = {}, None, []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            if "=" in line:
                k, _, v = line[1:].partition("=")
                meta[k.strip()] = v.strip()
            continue
        if header is None:
            header = line.split(",")
        else:
            rows.append(line.split(","))
    return meta, header, rows


@pytest.mark.slow
class TestRunCommand:
    def test_valid_config_writes_both_files(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.txt")
        code = cmd_run(str(cfg), str(tmp_path / "out"))
        assert code == 0
        meta, header, rows = read_csv(tmp_path / "out" / "timeseries.csv")
        assert header == ["t", "p_up", "p_down", "p_up_n0", "p_up_n1",
                          "trace_residual", "herm_residual"]
        assert len(rows) >= 2000
        assert meta["v"] == "0.05"
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert 0.0 <= summary["p_flip_final"] <= 1.0
        assert summary["manifest"]["config"]["g"] == 0.04
        assert summary["diagnostics"]["trace_residual"] < 1e-9
        # populations consistent in every row
        for row in rows[:: len(rows) // 10]:
            assert float(row[1]) + float(row[2]) == pytest.approx(1.0, abs=1e-8)

    def test_overdamped_config_exits_1_naming_field(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "cfg.txt", gamma=2.5)
        code = cmd_run(str(cfg), str(tmp_path / "out"))
        assert code == 1
        err = capsys.readouterr().err
        assert "gamma" in err
        assert not (tmp_path / "out" / "timeseries.csv").exists()

    def test_missing_config_exits_1(self, tmp_path):
        assert cmd_run(str(tmp_path / "absent.txt"), str(tmp_path / "out")) == 1


@pytest.mark.slow
class TestSweepCommand:
    def test_single_point_grid_rejected(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "cfg.txt")
        code = cmd_sweep(str(cfg), str(tmp_path / "out"), "T", 0.1, 0.5, 1)
        assert code == 1
        assert "points" in capsys.readouterr().err

    def test_unknown_axis_rejected(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.txt")
        assert cmd_sweep(str(cfg), str(tmp_path / "out"), "phi", 0.0, 1.0, 3) == 1

    def test_temperature_sweep_tracks_closed_form(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.txt")
        code = cmd_sweep(str(cfg), str(tmp_path / "out"), "T", 0.01, 0.6, 4)
        assert code == 0
        meta, header, rows = read_csv(tmp_path / "out" / "sweep.csv")
        assert header == ["axis_value", "p_flip", "pud_finite_t",
                          "pud_zero_t_dissipative", "lz_generalized", "status"]
        assert meta["axis"] == "T"
        for row in rows:
            t_val, p_flip, finite_t = float(row[0]), float(row[1]), float(row[2])
            assert row[-1] == "ok"
            assert finite_t == pytest.approx(pud_finite_t(0.04, 0.05, t_val),
                                             abs=1e-12)
            assert p_flip == pytest.approx(finite_t, abs=0.01)
        manifest = json.loads((tmp_path / "out" / "sweep.json").read_text())
        assert len(manifest["runs"]) == 4
        assert all(r["error"] is None for r in manifest["runs"])

    def test_partial_failure_flagged_exit_3(self, tmp_path, capsys):
        # a gamma grid reaching into the overdamped regime: that point fails
        # validation, its row is flagged, and the exit code is 3
        cfg = write_config(tmp_path / "cfg.txt", temperature=0.0)
        code = cmd_sweep(str(cfg), str(tmp_path / "out"), "gamma", 0.0, 2.5, 2)
        assert code == 3
        _, header, rows = read_csv(tmp_path / "out" / "sweep.csv")
        status = [row[-1] for row in rows]
        assert status == ["ok", "failed"]
        assert rows[1][1] == "nan"
        manifest = json.loads((tmp_path / "out" / "sweep.json").read_text())
        assert "overdamped" in manifest["runs"][1]["error"]

    def test_parallel_matches_serial_bitwise(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.txt")
        assert cmd_sweep(str(cfg), str(tmp_path / "s"), "g", 0.02, 0.05, 3,
                         threads=1) == 0
        assert cmd_sweep(str(cfg), str(tmp_path / "p"), "g", 0.02, 0.05, 3,
                         threads=2) == 0
        serial = (tmp_path / "s" / "sweep.csv").read_bytes()
        parallel = (tmp_path / "p" / "sweep.csv").read_bytes()
        assert serial == parallel

    def test_oracle_column(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.txt", gamma=0.01, temperature=0.5,
                           n_trunc=6)
        code = cmd_sweep(str(cfg), str(tmp_path / "out"), "v", 0.05, 0.1, 2,
                         oracle=True)
        assert code == 0
        _, header, rows = read_csv(tmp_path / "out" / "sweep.csv")
        assert "oracle_p_flip" in header
        k = header.index("oracle_p_flip")
        for row in rows:
            assert abs(float(row[k]) - float(row[1])) < 1e-3


class TestArgumentParsing:
    def test_main_requires_subcommand(self):
        with pytest.raises(SystemExit):
            main([])

    def test_sweep_rejects_unknown_axis_flag(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.txt")
        with pytest.raises(SystemExit):
            main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o"),
                  "--axis", "badaxis", "--from", "0", "--to", "1",
                  "--points", "2"])
