"""Figure rendering for results CSV files.

The CSV is the primary artifact; figures are derived views written next
to it (or to an explicit output directory).
"""

from __future__ import annotations

import csv
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .errors import BadConfigError


def _load(csv_path: str) -> list[dict]:
    try:
        with open(csv_path, newline="") as f:
            rows = list(csv.DictReader(f))
    except OSError as e:
        raise BadConfigError(f"cannot read {csv_path}: {e}") from None
    if not rows:
        raise BadConfigError(f"{csv_path} has no data rows")
    return rows


def _series(rows: list[dict], column: str) -> dict[str, dict[int, list[float]]]:
    """column values grouped by kind, then by n (skipping empty cells)."""
    out: dict[str, dict[int, list[float]]] = defaultdict(lambda: defaultdict(list))
    for row in rows:
        cell = row[column]
        if cell == "":
            continue
        out[row["kind"]][int(row["n"])].append(float(cell))
    return out


def _plot(series, ylabel, title, path, hline=None):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for kind in sorted(series):
        by_n = series[kind]
        ns = sorted(by_n)
        means = [sum(by_n[n]) / len(by_n[n]) for n in ns]
        ax.plot(ns, means, marker="o", label=kind)
    if hline is not None:
        ax.axhline(hline, linestyle="--", linewidth=1, color="gray")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("n")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_figures(csv_path: str, outdir: str | None = None) -> list[str]:
    """Render per-kind mean curves from a results CSV; returns paths written.

    Produces cost_per_n (with the 6n reference line), max_amortized, and
    df_sum/n figures, each only when the CSV has data for it.
    """
    rows = _load(csv_path)
    if outdir is None:
        outdir = os.path.dirname(os.path.abspath(csv_path))
    os.makedirs(outdir, exist_ok=True)
    base = os.path.splitext(os.path.basename(csv_path))[0]
    written: list[str] = []

    cost = _series(rows, "cost_per_n")
    if cost:
        path = os.path.join(outdir, f"{base}_cost_per_n.png")
        _plot(cost, "total cost / n", "Splay cost per key", path, hline=6)
        written.append(path)

    ma = _series(rows, "max_amortized")
    if ma:
        path = os.path.join(outdir, f"{base}_max_amortized.png")
        _plot(ma, "max amortized step cost", "Worst amortized cost per run", path)
        written.append(path)

    df = _series(rows, "df_sum")
    if df:
        scaled = {
            kind: {n: [v / n for v in vals] for n, vals in by_n.items()}
            for kind, by_n in df.items()
        }
        path = os.path.join(outdir, f"{base}_df_per_n.png")
        _plot(scaled, "dynamic-finger sum / n", "Dynamic-finger bits per key", path)
        written.append(path)
    return written
