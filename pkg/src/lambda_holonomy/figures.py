"""Figure rendering for the CLI report paths.

Everything goes through the Agg backend straight to files; nothing here
opens a window.  One saver per subcommand that has something worth
plotting, all returning the path they wrote.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 150


def save_spectrum_figure(path: str, theta: np.ndarray, energies: np.ndarray, title: str) -> str:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    labels = ("dark", "lower bright", "far-detuned bright")
    for k, label in enumerate(labels):
        ax.plot(theta, energies[:, k], label=label)
    ax.set_xlabel("theta")
    ax.set_ylabel("energy")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_curvature_figure(
    path: str, theta: np.ndarray, phi: np.ndarray, norm: np.ndarray, title: str
) -> str:
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    mesh = ax.pcolormesh(phi, theta, norm, shading="auto")
    fig.colorbar(mesh, ax=ax, label="||F||_F")
    ax.set_xlabel("phi")
    ax.set_ylabel("theta")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_holonomy_figure(
    path: str, steps: np.ndarray, errors: np.ndarray, title: str
) -> str:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(steps, errors, "o-", label="||U_n - U_ref||")
    guide = errors[0] * (steps / steps[0]) ** -2.0
    ax.loglog(steps, guide, "--", color="gray", label="n^-2 guide")
    ax.set_xlabel("steps")
    ax.set_ylabel("error")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_sweep_figure(path: str, rows, slopes: dict[str, float]) -> str:
    sines = np.array([r.sin_gamma for r in rows])
    series = [
        ("curvature_max", np.array([r.curvature_max for r in rows])),
        ("gp_deviation", np.array([r.gp_deviation for r in rows])),
        ("commutator_max", np.array([r.commutator_max for r in rows])),
        ("separability_gap", np.array([r.separability_gap for r in rows])),
        ("adiabatic_distance", np.array([r.adiabatic_distance for r in rows])),
    ]
    series = [(name, vals) for name, vals in series if np.all(np.isfinite(vals)) and np.all(vals > 0)]
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for name, values in series:
        slope = slopes.get(name)
        label = f"{name} (slope {slope:.2f})" if slope is not None else name
        ax.loglog(sines, values, "o-", label=label)
    ax.set_xlabel("sin(gamma)")
    ax.set_ylabel("magnitude")
    ax.set_title("finite-detuning scalings")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_evolve_figure(path: str, points) -> str:
    taus = np.array([pt.tau for pt in points])
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(taus, [pt.distance for pt in points], "o-", label="distance to 2-level evolution")
    leaks = np.array([pt.leakage for pt in points])
    if np.all(leaks > 0):
        ax.loglog(taus, leaks, "s-", label="leakage")
    ax.set_xlabel("tau")
    ax.set_ylabel("magnitude")
    ax.set_title("adiabatic approach")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_claims_figure(path: str, outcomes) -> str:
    """Margin chart: how far each claim's value sits from its threshold."""
    fig, ax = plt.subplots(figsize=(6.5, 4.0))
    ids = [o.claim_id for o in outcomes]
    margins = []
    for o in outcomes:
        # ratio > 1 means comfortable; direction-aware
        if o.threshold > 0 and o.value > 0:
            ratio = max(o.value, o.threshold) / min(o.value, o.threshold)
        else:
            ratio = 1.0
        margins.append(ratio if o.passed else 1.0 / ratio)
    colors = ["tab:green" if o.passed else "tab:red" for o in outcomes]
    ax.bar([str(i) for i in ids], margins, color=colors)
    ax.set_yscale("log")
    ax.axhline(1.0, color="black", linewidth=0.8)
    ax.set_xlabel("claim")
    ax.set_ylabel("margin (value vs threshold)")
    ax.set_title("claim margins")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
