"""Figure rendering for the CLI report paths (Agg backend, files only).

Each subcommand drops one PNG next to its delimited output: compartment time
series for simulate, eigenvalues against the stability sector for analyze,
distance-to-equilibrium curves for sweep. The delimited outputs stay fully
consumable without these figures.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_trajectory_figure",
    "save_stability_figure",
    "save_sweep_figure",
]

_COLORS = {"S": "tab:blue", "I": "tab:red", "C": "tab:green", "A": "tab:purple"}


def save_trajectory_figure(times, states, alpha: float, out_path: Path) -> Path:
    fig, (ax_s, ax_inf) = plt.subplots(1, 2, figsize=(10, 4))
    ax_s.plot(times, states[:, 0], color=_COLORS["S"])
    ax_s.set_xlabel("t (years)")
    ax_s.set_ylabel("S(t)")
    ax_s.set_title(f"susceptible, alpha = {alpha:g}")
    for idx, name in ((1, "I"), (2, "C"), (3, "A")):
        ax_inf.plot(times, states[:, idx], color=_COLORS[name], label=name)
    ax_inf.set_xlabel("t (years)")
    ax_inf.set_ylabel("population")
    ax_inf.set_title("infected compartments")
    ax_inf.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def save_stability_figure(reports: dict, out_path: Path) -> Path:
    """Eigenvalues in the complex plane with the sector edge per order."""
    fig, ax = plt.subplots(figsize=(6, 5))
    eigs = next(iter(reports.values())).eigenvalues
    radius = 1.2 * max(abs(z) for z in eigs)
    for alpha, report in sorted(reports.items()):
        half = alpha * math.pi / 2.0
        for sign in (1.0, -1.0):
            ax.plot(
                [0, radius * math.cos(half)],
                [0, sign * radius * math.sin(half)],
                linestyle="--",
                linewidth=0.8,
                alpha=0.7,
                label=f"sector edge, alpha = {alpha:g}" if sign > 0 else None,
            )
    ax.scatter(
        [z.real for z in eigs],
        [z.imag for z in eigs],
        color="tab:red",
        zorder=3,
        label="eigenvalues",
    )
    ax.axhline(0, color="gray", linewidth=0.5)
    ax.axvline(0, color="gray", linewidth=0.5)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title("disease-free equilibrium spectrum vs stability sector")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def save_sweep_figure(curves: dict, epsilon: float, out_path: Path) -> Path:
    """curves: alpha -> (times, max-norm distance to the target equilibrium)."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for alpha in sorted(curves):
        times, dist = curves[alpha]
        ax.plot(times, np.maximum(dist, 1e-16), label=f"alpha = {alpha:g}")
    ax.axhline(epsilon, color="k", linestyle=":", linewidth=1, label="epsilon")
    ax.set_yscale("log")
    ax.set_xlabel("t (years)")
    ax.set_ylabel("distance to equilibrium (max-norm)")
    ax.set_title("convergence toward the target equilibrium")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
