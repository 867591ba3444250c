"""Batch front door: single sweeps, parameter scans, and oracle comparison.

Two subcommands, both driven by the flat key = value configuration format:

    lzcqed run   --config cfg.txt --out outdir/
    lzcqed sweep --config cfg.txt --out outdir/ --axis T --from 0.01 --to 1.0 \
                 --points 12 [--oracle] [--threads K]

``run`` writes timeseries.csv (columns: t, p_up, p_down, p_up_n0, p_up_n1,
trace_residual, herm_residual) and summary.json.  ``sweep`` writes sweep.csv
(columns: axis_value, p_flip, pud_finite_t, pud_zero_t_dissipative,
lz_generalized[, oracle_p_flip], status) and sweep.json.  CSV files start
with '#'-prefixed metadata lines carrying the resolved configuration, so
downstream tools never need to re-derive parameters.

Exit codes: 0 success, 1 configuration error, 2 solver failure,
3 partial sweep failure (failed rows are flagged in the CSV).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import lz_generalized, pud_finite_t, pud_zero_t_dissipative
from .fock import REDFIELD_N_MAX, redfield_propagate
from .params import DxpPolicy, ParameterError, SystemParams, load_config, validate
from .phasespace import SolverError, SweepResult, integrate

AXES = {"T": "temperature", "gamma": "gamma", "v": "v", "g": "g"}


def _fmt(x: float) -> str:
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return "nan"
    return f"{x:.12g}"


def _params_dict(p: SystemParams) -> dict:
    d = dataclasses.asdict(p)
    d["dxp_policy"] = p.dxp_policy.value
    return d


def _metadata_lines(kind: str, p: SystemParams, extra: dict | None = None):
    lines = [f"# lzcqed {kind}", f"# version = {__version__}"]
    for key, val in _params_dict(p).items():
        lines.append(f"# {key} = {val}")
    for key, val in (extra or {}).items():
        lines.append(f"# {key} = {val}")
    return lines


def _write_csv(path: Path, meta_lines, header, rows):
    out = list(meta_lines)
    out.append(",".join(header))
    for row in rows:
        out.append(",".join(row))
    path.write_text("\n".join(out) + "\n")


def cmd_run(config_path: str, out_dir: str) -> int:
    """Single sweep: time series plus a machine-readable summary."""
    try:
        params = load_config(config_path)
        vp = validate(params)
    except (ParameterError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1

    t0 = time.perf_counter()
    try:
        res = integrate(vp, fock_levels=(0, 1))
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2
    wall = time.perf_counter() - t0

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    header = ["t", "p_up", "p_down", "p_up_n0", "p_up_n1",
              "trace_residual", "herm_residual"]
    rows = []
    up0 = res.p_fock[("up", 0)]
    up1 = res.p_fock[("up", 1)]
    for i, t in enumerate(res.times):
        rows.append([_fmt(t), _fmt(res.p_up[i]), _fmt(res.p_down[i]),
                     _fmt(up0[i]), _fmt(up1[i]),
                     _fmt(res.trace_residuals[i]), _fmt(res.herm_residuals[i])])
    _write_csv(out / "timeseries.csv",
               _metadata_lines("run", res.params), header, rows)

    summary = {
        "p_flip_final": res.p_flip_final,
        "diagnostics": {
            "trace_residual": res.trace_residual,
            "herm_residual": res.herm_residual,
            "edge_spill": res.edge_spill,
            "n_steps": res.n_steps,
        },
        "manifest": {
            "version": __version__,
            "config": _params_dict(res.params),
            "warnings": list(vp.warnings),
            "wall_time_s": wall,
        },
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def _sweep_point(args):
    """Worker: one grid point -> (value, p_flip, oracle_p_flip, diag, error)."""
    params, field, value, want_oracle = args
    p = dataclasses.replace(params, **{field: value})
    try:
        vp = validate(p)
        res = integrate(vp, fock_levels=())
        oracle = float("nan")
        if want_oracle and vp.n_trunc <= REDFIELD_N_MAX:
            _, mats = redfield_propagate(vp)
            oracle = 1.0 - mats[-1].qubit_populations()[0]
        diag = {"trace_residual": res.trace_residual,
                "herm_residual": res.herm_residual,
                "edge_spill": res.edge_spill,
                "n_steps": res.n_steps,
                "warnings": list(vp.warnings)}
        return value, res.p_flip_final, oracle, diag, None
    except (ParameterError, SolverError) as exc:
        return value, float("nan"), float("nan"), {}, str(exc)


def _analytic_columns(params: SystemParams, field: str, value: float):
    p = dataclasses.replace(params, **{field: value})
    try:
        finite_t = pud_finite_t(p.g, p.v, p.temperature)
    except ValueError:
        finite_t = float("nan")
    try:
        zero_t = pud_zero_t_dissipative(p.g, p.v, p.gamma, p.omega)
    except ValueError:
        zero_t = float("nan")
    try:
        baseline = lz_generalized(p.g, p.v)
    except ValueError:
        baseline = float("nan")
    return finite_t, zero_t, baseline


def cmd_sweep(config_path: str, out_dir: str, axis: str, start: float,
              stop: float, points: int, *, oracle: bool = False,
              threads: int = 1) -> int:
    """Scan one parameter axis; one CSV row per grid point."""
    try:
        if axis not in AXES:
            raise ParameterError([("axis", f"unknown axis {axis!r}; "
                                           f"choose one of {sorted(AXES)}")])
        if points < 2:
            raise ParameterError([("points", "grid length must be >= 2")])
        params = load_config(config_path)
        validate(params)  # base configuration must be sound
    except (ParameterError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1

    field = AXES[axis]
    grid = np.linspace(start, stop, points)
    jobs = [(params, field, float(val), oracle) for val in grid]

    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_sweep_point, jobs))
    else:
        results = [_sweep_point(job) for job in jobs]

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    header = ["axis_value", "p_flip", "pud_finite_t",
              "pud_zero_t_dissipative", "lz_generalized"]
    if oracle:
        header.append("oracle_p_flip")
    header.append("status")

    rows = []
    diags = []
    failed = 0
    for value, p_flip, orc, diag, err in results:
        finite_t, zero_t, baseline = _analytic_columns(params, field, value)
        row = [_fmt(value), _fmt(p_flip), _fmt(finite_t), _fmt(zero_t),
               _fmt(baseline)]
        if oracle:
            row.append(_fmt(orc))
        row.append("ok" if err is None else "failed")
        rows.append(row)
        diags.append({"axis_value": value, "error": err, **diag})
        if err is not None:
            failed += 1

    meta = {"axis": axis, "axis_field": field, "points": points,
            "oracle": oracle}
    _write_csv(out / "sweep.csv", _metadata_lines("sweep", params, meta),
               header, rows)
    manifest = {
        "version": __version__,
        "config": _params_dict(params),
        "axis": meta,
        "runs": diags,
    }
    (out / "sweep.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))

    if failed:
        print(f"{failed} of {points} sweep points failed", file=sys.stderr)
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lzcqed", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="single sweep, time series output")
    run_p.add_argument("--config", required=True)
    run_p.add_argument("--out", required=True)

    sw = sub.add_parser("sweep", help="scan one parameter axis")
    sw.add_argument("--config", required=True)
    sw.add_argument("--out", required=True)
    sw.add_argument("--axis", required=True, choices=sorted(AXES))
    sw.add_argument("--from", dest="start", type=float, required=True)
    sw.add_argument("--to", dest="stop", type=float, required=True)
    sw.add_argument("--points", type=int, required=True)
    sw.add_argument("--oracle", action="store_true",
                    help="add Fock-basis oracle column where n_trunc permits")
    sw.add_argument("--threads", type=int, default=1)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args.config, args.out)
    return cmd_sweep(args.config, args.out, args.axis, args.start, args.stop,
                     args.points, oracle=args.oracle, threads=args.threads)


if __name__ == "__main__":
    sys.exit(main())
