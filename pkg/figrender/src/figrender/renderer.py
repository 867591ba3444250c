"""Draw publication-style figures from lzcqed CSV output.

The renderer never recomputes physics: it draws columns.  Numeric results
appear as symbols, analytic curves as solid lines.  Four layouts are
supported:

    3  flip probability vs temperature, one symbol+line pair per CSV
    4  normalized flip probability vs damping with the exact curve
    5  flip probability vs temperature for several damping/velocity families
    6  population time series with markers at the avoided crossings

Invoked as

    figrender --figure N --csv PATH [--csv PATH ...] --out PATH

Rendering is a pure function of the CSV bytes and the figure spec: the SVG
hash salt is pinned and date metadata is stripped, so byte-identical inputs
give byte-identical output files.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "figrender"

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


class RenderError(RuntimeError):
    """Bad input: empty CSV, missing column, unknown figure id."""


@dataclass
class CsvTable:
    """Parsed CSV with '#'-metadata, a header row, and float columns."""

    meta: dict
    columns: dict
    path: str

    def require(self, *names: str) -> None:
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise RenderError(f"{self.path}: missing column(s) "
                              f"{', '.join(missing)}")

    def col(self, name: str) -> np.ndarray:
        self.require(name)
        return self.columns[name]


def load_csv(path) -> CsvTable:
    """Read one lzcqed CSV file; refuses files without data rows."""
    meta: dict = {}
    header: list[str] | None = None
    rows: list[list[str]] = []
    text = Path(path).read_text()
    for line in text.splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, val = body.partition("=")
                meta[key.strip()] = val.strip()
            continue
        if not line.strip():
            continue
        if header is None:
            header = [h.strip() for h in line.split(",")]
        else:
            rows.append(line.split(","))
    if header is None or not rows:
        raise RenderError(f"{path}: no data rows")
    columns = {}
    for j, name in enumerate(header):
        vals = []
        for row in rows:
            cell = row[j].strip() if j < len(row) else "nan"
            try:
                vals.append(float(cell))
            except ValueError:
                vals.append(np.nan)
        columns[name] = np.asarray(vals)
    return CsvTable(meta, columns, str(path))


@dataclass
class FigureSpec:
    """What to draw: figure id, input CSVs, optional labels, output path."""

    figure: int
    csv_paths: list
    out_path: str
    xlabel: str | None = None
    ylabel: str | None = None
    xlim: tuple | None = None
    ylim: tuple | None = None
    extra: dict = field(default_factory=dict)


_SYMBOLS = ("o", "s", "D", "^", "v", "p")
_COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red", "tab:purple")


def _series_label(table: CsvTable) -> str:
    bits = []
    if "v" in table.meta:
        bits.append(f"v = {table.meta['v']}")
    if "gamma" in table.meta and float(table.meta.get("gamma", 0.0)) != 0.0:
        bits.append(f"gamma = {table.meta['gamma']}")
    return ", ".join(bits) or Path(table.path).stem


def _style(k: int):
    return _SYMBOLS[k % len(_SYMBOLS)], _COLORS[k % len(_COLORS)]


def _fig_temperature_families(tables, analytic_col: str):
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    for k, table in enumerate(tables):
        table.require("axis_value", "p_flip", analytic_col)
        marker, color = _style(k)
        label = _series_label(table)
        ax.plot(table.col("axis_value"), table.col(analytic_col), "-",
                color=color, lw=1.2)
        ax.plot(table.col("axis_value"), table.col("p_flip"),
                linestyle="none", marker=marker, ms=5, mfc="none",
                color=color, label=label)
    ax.set_xlabel(r"$k_B T / \hbar\Omega$")
    ax.set_ylabel(r"$P_{\uparrow\downarrow}$")
    ax.legend(frameon=False, fontsize=8)
    return fig, ax


def build_figure(spec: FigureSpec):
    """Assemble the matplotlib figure for a spec; raises RenderError on bad input."""
    tables = [load_csv(p) for p in spec.csv_paths]
    if not tables:
        raise RenderError("no CSV inputs given")

    if spec.figure == 3:
        fig, ax = _fig_temperature_families(tables, "pud_finite_t")
    elif spec.figure == 5:
        fig, ax = _fig_temperature_families(tables, "pud_finite_t")
    elif spec.figure == 4:
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        for k, table in enumerate(tables):
            table.require("axis_value", "p_flip", "pud_zero_t_dissipative")
            gammas = table.col("axis_value")
            num = table.col("p_flip")
            ana = table.col("pud_zero_t_dissipative")
            # normalize to the undamped value: the gamma = 0 row if present,
            # otherwise the first row
            ref = int(np.argmin(np.abs(gammas)))
            marker, color = _style(k)
            ax.plot(gammas, ana / ana[ref], "-", color=color, lw=1.2)
            ax.plot(gammas, num / num[ref], linestyle="none", marker=marker,
                    ms=5, mfc="none", color=color, label=_series_label(table))
        ax.set_xlabel(r"$\gamma / \Omega$")
        ax.set_ylabel(r"$P_{\uparrow\downarrow} / P_{\uparrow\downarrow}(\gamma=0)$")
        ax.legend(frameon=False, fontsize=8)
    elif spec.figure == 6:
        fig, axes = plt.subplots(2, 1, figsize=(5.0, 5.2), sharex=True)
        table = tables[0]
        table.require("t", "p_up_n0", "p_up_n1")
        t = table.col("t")
        panels = (("p_up_n0", r"$P_{\uparrow,0}$"), ("p_up_n1", r"$P_{\uparrow,1}$"))
        for ax, (colname, label) in zip(axes, panels):
            # optional comparison series (e.g. the undamped run) drawn gray
            for other in tables[1:]:
                other.require("t", colname)
                ax.plot(other.col("t"), other.col(colname), "-",
                        color="0.6", lw=1.0)
            ax.plot(t, table.col(colname), "-", color="tab:blue", lw=1.2)
            ax.set_ylabel(label)
            for tc in _crossing_times(table):
                ax.axvline(tc, color="0.3", lw=0.8, ls="--")
        axes[-1].set_xlabel(r"$t\,\Omega$")
        ax = axes[0]
    else:
        raise RenderError(f"unknown figure id {spec.figure}; supported: 3 4 5 6")

    if spec.xlabel:
        ax.set_xlabel(spec.xlabel)
    if spec.ylabel:
        ax.set_ylabel(spec.ylabel)
    if spec.xlim:
        ax.set_xlim(*spec.xlim)
    if spec.ylim:
        ax.set_ylim(*spec.ylim)
    fig.tight_layout()
    return fig


def _crossing_times(table: CsvTable):
    """Avoided-crossing positions t = -/+ omega / v from CSV metadata."""
    try:
        omega = float(table.meta.get("omega", 1.0))
        v = float(table.meta["v"])
    except (KeyError, ValueError) as exc:
        raise RenderError(f"{table.path}: metadata omega/v needed for "
                          f"crossing markers") from exc
    return (-omega / v, omega / v)


def render(spec: FigureSpec) -> Path:
    """Build and write the figure; the output file appears only on success."""
    fig = build_figure(spec)
    out = Path(spec.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(out, format=out.suffix.lstrip(".") or "svg",
                    metadata={"Date": None})
    finally:
        plt.close(fig)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="figrender", description=__doc__)
    ap.add_argument("--figure", type=int, required=True, choices=(3, 4, 5, 6))
    ap.add_argument("--csv", action="append", required=True,
                    help="input CSV (repeat for multiple series)")
    ap.add_argument("--out", required=True)
    ap.add_argument("--xlabel")
    ap.add_argument("--ylabel")
    args = ap.parse_args(argv)
    spec = FigureSpec(figure=args.figure, csv_paths=args.csv,
                      out_path=args.out, xlabel=args.xlabel,
                      ylabel=args.ylabel)
    try:
        path = render(spec)
    except RenderError as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
