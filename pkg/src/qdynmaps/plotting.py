"""Figure rendering for the CLI report paths.

Figures are written with the non-interactive Agg backend; nothing here is
needed for the numerical results, which always go to CSV.
"""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import SymLogNorm  # noqa: E402

from .markov import ConcurrenceTrajectory, ScanResult  # noqa: E402

LINESTYLES = ["-", "--", "-.", ":"]


def _figure(width: float = 5.0, height: float | None = None):
    if height is None:
        height = width * (math.sqrt(5) - 1.0) / 2.0
    return plt.subplots(figsize=(width, height))


def plot_concurrence(curves: dict[str, ConcurrenceTrajectory], path, time_scale: float = 1.0, xlabel: str = "$at$"):
    """Concurrence against scaled time, one line per labelled trajectory."""
    fig, ax = _figure()
    for k, (label, traj) in enumerate(curves.items()):
        ax.plot(time_scale * traj.t, traj.values, LINESTYLES[k % len(LINESTYLES)], color="k", lw=1.2, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("concurrence $C$")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_scan(scan: ScanResult, path, title: str = ""):
    """Heat map of the smallest intermediate-map Choi eigenvalue over (t1, t2).

    Cells below the diagonal and singular pairs are left blank; NCP pairs
    are outlined.
    """
    t1s = sorted({r.t1 for r in scan.rows} | {r.t2 for r in scan.rows})
    index = {t: i for i, t in enumerate(t1s)}
    grid = np.full((len(t1s), len(t1s)), np.nan)
    for r in scan.rows:
        grid[index[r.t2], index[r.t1]] = r.min_choi_eig
    finite = grid[np.isfinite(grid)]
    bound = max(1e-12, float(np.abs(finite).max())) if finite.size else 1.0
    # symmetric log scaling keeps both the O(1) CP values and large NCP values visible
    norm = SymLogNorm(linthresh=0.1, vmin=-bound, vmax=bound)

    fig, ax = _figure(5.0, 4.2)
    mesh = ax.pcolormesh(t1s, t1s, np.ma.masked_invalid(grid), cmap="RdBu", norm=norm, shading="nearest")
    ncp = [(r.t1, r.t2) for r in scan.rows if r.cp is False]
    if ncp:
        xs, ys = zip(*ncp)
        ax.plot(xs, ys, "x", color="k", ms=3, label="NCP")
        ax.legend(frameon=False, fontsize=8, loc="lower right")
    fig.colorbar(mesh, ax=ax, label="min eigenvalue of $B(t_2,t_1)$")
    ax.set_xlabel("$t_1$")
    ax.set_ylabel("$t_2$")
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
