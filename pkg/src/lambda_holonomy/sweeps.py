"""Detuning sweeps: how every finite-detuning effect scales with sin(gamma).

One row per Delta/Omega ratio, all computed on the same reference loop
and grid so the log-log fits across rows are meaningful:

* curvature_max        max Frobenius norm of the exact curvature on a
                       (theta, phi) grid; scales as sin^2(gamma)
* gp_deviation         distance between the exact-loop holonomy and the
                       corrected-variant one on the same loop; the
                       corrected holonomy is trivial, so this is how far
                       the true geometric phase strays from it
* commutator_max       worst ||[D, A_mu lambda-dot]||_F along the loop;
                       scales as sin(gamma), the non-separability driver
* separability_gap     best-ordering distance between the true subspace
                       evolution and geometric-times-dynamical
* adiabatic_distance   projected full-propagator distance to the coupled
                       two-level evolution at a fixed traversal time

Rows can be computed in a process pool; the worker takes only plain
data, results are returned in input order, and a pool of one worker is
byte-for-byte identical to the serial path.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .gauge import ConnectionVariant, curvature_batch
from .holonomy import holonomy, separability_diagnostic
from .lambda_system import mixing_angle
from .paths import build_loop


@dataclass(frozen=True)
class SweepRow:
    delta_over_omega: float
    sin_gamma: float
    curvature_max: float
    gp_deviation: float
    commutator_max: float
    separability_gap: float
    adiabatic_distance: float


def curvature_grid_max(
    variant: ConnectionVariant,
    omega: float,
    delta: float,
    grid_n: int = 50,
) -> float:
    """Max pointwise Frobenius norm of F on an interior (theta, phi) grid."""
    gamma = mixing_angle(omega, delta)
    theta = (np.arange(grid_n) + 0.5) * math.pi / grid_n
    phi = (np.arange(grid_n) + 0.5) * 2.0 * math.pi / grid_n
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    f = curvature_batch(variant, tt.ravel(), pp.ravel(), gamma)
    return float(np.max(np.linalg.norm(f, "fro", axis=(1, 2))))


def _row_worker(packed: tuple) -> SweepRow:
    ratio, omega, grid_n, loop_steps, adiabatic_tau, loop_kwargs = packed
    delta = ratio * omega
    gamma = mixing_angle(omega, delta)
    loop = build_loop(omega=omega, delta=delta, **loop_kwargs)
    curv = curvature_grid_max(ConnectionVariant.EXACT, omega, delta, grid_n)
    exact = holonomy(ConnectionVariant.EXACT, loop, n=loop_steps, richardson=False)
    corrected = holonomy(
        ConnectionVariant.APPROX_CORRECTED, loop, n=loop_steps, richardson=False
    )
    gp_dev = float(np.linalg.norm(exact.unitary - corrected.unitary, "fro"))
    sep = separability_diagnostic(loop, n=loop_steps)

    adiabatic = math.nan
    if adiabatic_tau > 0:
        # import here: keeps the module-import graph acyclic, the
        # propagation module already imports from holonomy
        from .propagation import adiabatic_comparison

        slow = build_loop(omega=omega, delta=delta, **{**loop_kwargs, "tau": adiabatic_tau})
        point = adiabatic_comparison(
            lambda tau: slow, np.array([adiabatic_tau]), steps_per_omega_time=2.0
        )[0]
        adiabatic = point.distance

    return SweepRow(
        delta_over_omega=float(ratio),
        sin_gamma=gamma.sin,
        curvature_max=curv,
        gp_deviation=gp_dev,
        commutator_max=sep.commutator_max,
        separability_gap=sep.gap,
        adiabatic_distance=adiabatic,
    )


def detuning_sweep(
    ratios: np.ndarray,
    omega: float = 1.0,
    grid_n: int = 50,
    loop_steps: int = 10_000,
    loop_kind: str = "lissajous",
    theta0: float = math.pi / 3,
    amplitude: float = 0.5,
    phi0: float = 0.0,
    seed: int = 0,
    waypoints: tuple[tuple[float, float], ...] | None = None,
    adiabatic_tau: float = 0.0,
    workers: int = 1,
) -> list[SweepRow]:
    """One SweepRow per Delta/Omega ratio, in the given order.

    adiabatic_tau > 0 adds the full-propagator comparison at that
    traversal time (the expensive column); 0 skips it and leaves NaN.

    Raises
    ------
    ValueError : on an empty or non-finite ratio list.
    """
    ratios = np.asarray(ratios, dtype=float)
    if ratios.size == 0:
        raise ValueError("detuning_sweep: empty ratio list")
    if not np.all(np.isfinite(ratios)):
        raise ValueError("detuning_sweep: ratios must be finite")
    loop_kwargs = {
        "kind": loop_kind,
        "theta0": theta0,
        "amplitude": amplitude,
        "phi0": phi0,
        "seed": seed,
        "waypoints": waypoints,
        "tau": 1.0,
    }
    packed = [
        (float(r), omega, grid_n, loop_steps, adiabatic_tau, loop_kwargs) for r in ratios
    ]
    if workers <= 1:
        return [_row_worker(p) for p in packed]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_row_worker, packed))


def loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log y against log x.

    Raises
    ------
    ValueError : if fewer than 2 points or any value is not positive.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        raise ValueError("loglog_slope: need at least 2 points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("loglog_slope: all values must be positive")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
