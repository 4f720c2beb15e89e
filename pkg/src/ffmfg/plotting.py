"""Matplotlib figures written next to the CSV reports."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "figure.dpi": 100,
}


def figsize(scale=1.0, ratio=None):
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    width = 6.0 * scale
    return width, width * (ratio or golden)


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def plot_levelsets(rows, path):
    """Two panels of level curves, one per invariant; ``rows`` are ``(which, c, v, m)``."""
    rows = np.asarray(rows, dtype=float).reshape(-1, 4)
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, 2, figsize=figsize(1.2, 0.5), sharey=True)
        for which, ax in zip((1, 2), axes):
            sel = rows[rows[:, 0] == which]
            levels = np.unique(sel[:, 1])
            colors = plt.cm.viridis(np.linspace(0.1, 0.9, max(len(levels), 1)))
            for c, color in zip(levels, colors):
                pts = sel[sel[:, 1] == c]
                ax.plot(pts[:, 2], pts[:, 3], ".", ms=1.5, color=color, label=f"c = {c:g}")
            m_top = sel[:, 3].max() if len(sel) else 1.0
            vv = np.linspace(0, m_top / np.sqrt(3), 50)
            branch = vv if which == 2 else -vv
            ax.plot(branch, np.sqrt(3) * vv, "k--", lw=0.8, label="m² = 3v²")
            ax.set_title(f"Level sets of w{which}")
            ax.set_xlabel("v")
            if levels.size:
                ax.legend(loc="best", frameon=False)
        axes[0].set_ylabel("m")
        _save(fig, path)


def plot_diagnostics(records, path):
    t = np.array([r.time for r in records])
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=figsize(1.2, 0.45))
        for name, label in (("l1_v", "∫|v| dx"), ("l1_m", "∫|m - 1| dx")):
            y = np.array([getattr(r, name) for r in records])
            if np.all(y > 0):
                ax1.semilogy(t, y, label=label)
            else:
                ax1.plot(t, y, label=label)
        ax1.set_xlabel("t")
        ax1.set_title("distance to equilibrium")
        ax1.legend(frameon=False)
        ax2.plot(t, [r.min_m for r in records], label="min m")
        ax2.plot(t, [r.mass for r in records], label="mass")
        ax2.set_xlabel("t")
        ax2.legend(frameon=False)
        _save(fig, path)


def plot_fields(snapshots, path, second_label="m"):
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=figsize(1.2, 0.45), sharex=True)
        colors = plt.cm.plasma(np.linspace(0.0, 0.85, len(snapshots)))
        for snap, color in zip(snapshots, colors):
            x = snap.grid.centers
            ax1.plot(x, snap.v, color=color, label=f"t = {snap.time:g}")
            ax2.plot(x, snap.m, color=color)
        ax1.set_ylabel("v")
        ax2.set_ylabel(second_label)
        for ax in (ax1, ax2):
            ax.set_xlabel("x")
        if len(snapshots) <= 8:
            ax1.legend(frameon=False)
        _save(fig, path)


def plot_errors(rows, path):
    """Log-log refinement plot; ``rows`` are dicts with ``n_cells``, ``l1_error``, ``linf_error``."""
    n = np.array([r["n_cells"] for r in rows], dtype=float)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize(0.8))
        ax.loglog(n, [r["l1_error"] for r in rows], "o-", label="L1")
        ax.loglog(n, [r["linf_error"] for r in rows], "s-", label="Linf")
        ref = rows[0]["l1_error"] * n[0] / n
        ax.loglog(n, ref, "k:", label="first order")
        ax.set_xlabel("cells")
        ax.set_ylabel("error at t_end")
        ax.legend(frameon=False)
        _save(fig, path)
