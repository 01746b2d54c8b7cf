"""Figure rendering for the command-line reports.

Each saver mirrors one CSV layout and writes a PNG next to it.  Missing
cells arrive as NaN and simply leave gaps in the lines.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["save_curve_plot", "save_bounds_plot", "save_capacity_plot"]

_DPI = 150


def save_curve_plot(path: str, s, distortion, rate, mmse) -> None:
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6.0, 6.4), sharex=False)
    top.plot(distortion, rate, "o-", ms=3, color="tab:blue")
    top.set_xlabel("distortion")
    top.set_ylabel("rate [nats]")
    top.grid(True, alpha=0.3)
    bottom.plot(s, mmse, "o-", ms=3, color="tab:orange")
    bottom.set_xlabel("slope parameter s")
    bottom.set_ylabel("conditional distortion variance")
    s = np.asarray(s, dtype=float)
    if s.size > 1 and np.all(s > 0) and s.max() / s.min() > 50:
        bottom.set_xscale("log")
    bottom.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_bounds_plot(path: str, distortion, lower, upper, slb, numeric) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    series = [
        (lower, "lower bound", "tab:green", "--"),
        (upper, "upper bound", "tab:red", "--"),
        (slb, "Shannon lower bound", "tab:gray", ":"),
        (numeric, "computed rate", "tab:blue", "-"),
    ]
    for values, label, color, style in series:
        values = np.asarray(values, dtype=float)
        if np.all(np.isnan(values)):
            continue
        ax.plot(distortion, values, style, color=color, label=label)
    ax.set_xlabel("distortion")
    ax.set_ylabel("rate [nats]")
    ax.legend(frameon=False, fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_capacity_plot(path: str, s, mmse, partial, total: float) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(s, mmse, "o-", ms=3, color="tab:orange", label="estimation error")
    ax.plot(s, partial, "s-", ms=3, color="tab:blue", label="partial integral")
    ax.axhline(total, color="tab:gray", lw=0.8, ls=":", label="mutual information")
    ax.set_xlabel("interpolation parameter s")
    ax.set_ylabel("nats")
    ax.legend(frameon=False, fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
