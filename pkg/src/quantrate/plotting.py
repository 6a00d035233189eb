"""Render CLI datasets as PNG figures next to their delimited output."""

from __future__ import annotations

import os
from collections import defaultdict
from typing import Dict, List, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_MARKER_STYLE = {"L_star": ("*", 140), "L_hat": ("^", 60), "L4": ("o", 40)}


def figure_path(output_path: str) -> str:
    root, _ = os.path.splitext(output_path)
    return root + ".png"


def _rate_column(columns: List[str], prefix: str = "gmi") -> str:
    for c in columns:
        if c.startswith(prefix):
            return c
    raise ValueError(f"no {prefix!r} column among {columns}")


def _groups(rows, keys) -> Dict[Tuple, List[dict]]:
    out: Dict[Tuple, List[dict]] = defaultdict(list)
    for row in rows:
        out[tuple(row[k] for k in keys)].append(row)
    return out


def _plot_rate_sweep(ds, ax) -> None:
    gcol = _rate_column(ds.columns)
    ccol = _rate_column(ds.columns, "capacity")
    for (b,), rows in sorted(_groups(ds.rows, ["b"]).items()):
        ax.plot([r["snr_db"] for r in rows], [r[gcol] for r in rows], label=f"b = {b}")
    first_b = ds.rows[0]["b"]
    cap = [(r["snr_db"], r[ccol]) for r in ds.rows if r["b"] == first_b]
    ax.plot([c[0] for c in cap], [c[1] for c in cap], "k--", label="capacity")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel(gcol.replace("_", " "))
    ax.legend()


def _plot_loading_sweep(ds, ax) -> None:
    gcol = _rate_column(ds.columns)
    for (b, snr_db), rows in sorted(_groups(ds.rows, ["b", "snr_db"]).items()):
        curve = [r for r in rows if not r["marker"]]
        ax.plot([r["L"] for r in curve], [r[gcol] for r in curve], label=f"b = {b}, {snr_db} dB")
        for r in rows:
            if r["marker"]:
                style, size = _MARKER_STYLE[r["marker"]]
                ax.scatter([r["L"]], [r[gcol]], marker=style, s=size, zorder=3)
    ax.set_xlabel("loading factor L")
    ax.set_ylabel(gcol.replace("_", " "))
    ax.legend()


def _plot_optimal_loading(ds, ax) -> None:
    bs = [r["b"] for r in ds.rows]
    for col, style in (("L_star", "o-"), ("L_hat", "s--"), ("scaling_law", ":"), ("L_mse", "x-")):
        ax.plot(bs, [r[col] for r in ds.rows], style, label=col)
    ax.set_xlabel("resolution b (bits)")
    ax.set_ylabel("loading factor")
    ax.legend()


def _plot_mc_validate(ds, ax) -> None:
    z = [r["z_score"] for r in ds.rows]
    ax.plot(range(len(z)), z, "o")
    for y in (-4.0, 4.0):
        ax.axhline(y, color="k", linestyle="--", linewidth=0.8)
    ax.set_xlabel("cell index")
    ax.set_ylabel("z-score")


_RENDERERS = {
    "rate-sweep": _plot_rate_sweep,
    "loading-sweep": _plot_loading_sweep,
    "optimal-loading": _plot_optimal_loading,
    "mc-validate": _plot_mc_validate,
}


def render_dataset(ds, output_path: str) -> str:
    """Draw the dataset and save a PNG alongside the output file.

    Returns the path of the written figure.
    """
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    _RENDERERS[ds.command](ds, ax)
    ax.set_title(ds.command)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = figure_path(output_path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
