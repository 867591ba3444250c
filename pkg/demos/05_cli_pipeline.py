#!/usr/bin/env python3
"""End-to-end batch pipeline: config file -> CLI sweep -> CSV -> summary.

Drives the command-line interface programmatically, then reads back the CSV
it produced.  The same files feed the figure renderer package.
"""

import json
import tempfile
from pathlib import Path

from lzcqed.cli import cmd_run, cmd_sweep

CONFIG = """\
# fast demonstration parameters
g = 0.04
v = 0.05
gamma = 0.0
temperature = 0.01
n_trunc = 6
t_start = -400
t_end = 400
"""

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    cfg = tmp / "demo.cfg"
    cfg.write_text(CONFIG)

    code = cmd_run(str(cfg), str(tmp / "run"))
    print(f"lzcqed run exit code: {code}")
    summary = json.loads((tmp / "run" / "summary.json").read_text())
    print(f"  p_flip_final = {summary['p_flip_final']:.6f}")
    print(f"  wall time    = {summary['manifest']['wall_time_s']:.1f} s")
    print(f"  rows written = "
          f"{sum(1 for line in (tmp / 'run' / 'timeseries.csv').open() if not line.startswith('#')) - 1}")

    code = cmd_sweep(str(cfg), str(tmp / "sweep"), "T", 0.01, 0.8, 5)
    print(f"\nlzcqed sweep exit code: {code}")
    print("sweep.csv:")
    for line in (tmp / "sweep" / "sweep.csv").read_text().splitlines():
        if not line.startswith("#"):
            print("  " + line)
