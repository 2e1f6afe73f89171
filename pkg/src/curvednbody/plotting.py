"""Optional figure rendering for CLI outputs.

All functions draw with the non-interactive Agg backend and write a
PNG next to the delimited output they illustrate.  Nothing here is
needed for the numerical results; the command-line layer calls these
only when plotting is requested.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .dynamics import Trajectory
from .equilibria import FixedPointSolution


def plot_trajectory(traj: Trajectory, path: str) -> None:
    """Two-panel figure: xy paths of all bodies, and conservation drift."""
    fig, (ax_xy, ax_drift) = plt.subplots(1, 2, figsize=(10, 4.5))
    try:
        n = traj.states[0].n
        kappa = traj.states[0].curvature.kappa
        pos = np.array([s.positions for s in traj.states])
        if kappa > 0:
            rad = 1.0 / math.sqrt(kappa)
            th = np.linspace(0, 2 * math.pi, 256)
            ax_xy.plot(rad * np.cos(th), rad * np.sin(th), ":", color="0.6", lw=0.8)
        for i in range(n):
            ax_xy.plot(pos[:, i, 0], pos[:, i, 1], lw=1.0, label=f"body {i + 1}")
            ax_xy.plot(pos[0, i, 0], pos[0, i, 1], "o", ms=4, color="k")
        ax_xy.set_aspect("equal")
        ax_xy.set_xlabel("x")
        ax_xy.set_ylabel("y")
        ax_xy.set_title("xy projection")
        if n <= 6:
            ax_xy.legend(fontsize=8)

        t = traj.times
        if len(t) > 1:
            h = traj.energies
            c = traj.momenta
            dh = np.abs(h - h[0])
            dc = np.max(np.abs(c - c[0]), axis=1)
            eps = 1e-20
            ax_drift.semilogy(t, dh + eps, label="|H - H(0)|")
            ax_drift.semilogy(t, dc + eps, label="max |c - c(0)|")
            ax_drift.legend(fontsize=8)
        ax_drift.set_xlabel("t")
        ax_drift.set_title("conservation drift")
        if traj.halted:
            ax_drift.annotate(
                f"halted: {traj.halted}", xy=(0.05, 0.9), xycoords="axes fraction", color="red"
            )
        fig.tight_layout()
        fig.savefig(path, dpi=150)
    finally:
        plt.close(fig)


def plot_criterion(
    r_values, delta_spreads, gamma_spreads, tol: float, path: str
) -> None:
    """Spread of the delta and gamma sums across the sampled r grid."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    try:
        eps = 1e-20
        r = np.asarray(r_values, dtype=float)
        ax.semilogy(r, np.asarray(delta_spreads) + eps, "o-", label="delta spread")
        ax.semilogy(r, np.asarray(gamma_spreads) + eps, "s-", label="gamma spread")
        ax.axhline(tol, color="0.5", ls="--", lw=0.8, label="tolerance")
        ax.set_xlabel("r")
        ax.set_ylabel("spread (max - min)")
        ax.set_title("homographic criterion across sizes")
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
    finally:
        plt.close(fig)


def plot_triangle(sol: FixedPointSolution, path: str) -> None:
    """Equatorial fixed point: bodies on the great circle, sized by mass."""
    fig, ax = plt.subplots(figsize=(5, 5))
    try:
        tri = sol.triangle
        rad = 1.0 / math.sqrt(tri.curvature.kappa)
        th = np.linspace(0, 2 * math.pi, 256)
        ax.plot(rad * np.cos(th), rad * np.sin(th), ":", color="0.6", lw=0.8)
        p = tri.positions()
        sizes = 200.0 * sol.masses / sol.masses.max()
        ax.scatter(p[:, 0], p[:, 1], s=sizes, zorder=3)
        for i in range(3):
            ax.annotate(
                f"m{i + 1}={sol.masses[i]:.4g}",
                xy=(p[i, 0], p[i, 1]),
                xytext=(6, 6),
                textcoords="offset points",
                fontsize=8,
            )
        ax.set_aspect("equal")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_title("equatorial fixed point")
        fig.tight_layout()
        fig.savefig(path, dpi=150)
    finally:
        plt.close(fig)
