"""Three-level Lambda system in the rotating frame, hbar = 1.

Two ground states |1>, |2> couple to an excited state |3> with Rabi
amplitudes Omega*sin(theta)*e^{i phi} and Omega*cos(theta), both detuned
by the same Delta.  In the frame rotating at the drive frequencies the
Hamiltonian is

    H = -( Omega sin(theta) e^{i phi} |1><3| + Omega cos(theta) |2><3|
           + h.c. ) - 2 Delta |3><3|

where the diagonal term enters once (taking its conjugate again would
double it and break the exact spectrum below).  The eigensystem is
closed form: a dark state at energy 0 and two bright states at
-(Delta -+ sqrt(Delta^2 + Omega^2)), mixed into |3> by the angle gamma
with tan(gamma) = (sqrt(Delta^2 + Omega^2) - Delta)/Omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrices import eigh3


@dataclass(frozen=True)
class SystemParams:
    """Drive parameters at one point of the (theta, phi) control space."""

    omega: float
    delta: float
    theta: float
    phi: float

    def __post_init__(self) -> None:
        for name in ("omega", "delta", "theta", "phi"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"SystemParams.{name} must be finite, got {value!r}")
        if self.omega < 0:
            raise ValueError(f"SystemParams.omega must be >= 0, got {self.omega}")


@dataclass(frozen=True)
class MixingAngle:
    """Bright-state mixing angle gamma with its trig values cached."""

    gamma: float
    sin: float
    cos: float
    tan: float


@dataclass(frozen=True)
class LambdaSpectrum:
    """Closed-form eigensystem; vectors[:, k] belongs to energies[k].

    Column order is (dark, lower bright, far-detuned bright), i.e. the
    energies are (0, Omega*tan(gamma), -(Delta + sqrt(Delta^2+Omega^2))).
    """

    energies: np.ndarray
    vectors: np.ndarray


def hamiltonian(p: SystemParams) -> np.ndarray:
    h = np.zeros((3, 3), dtype=complex)
    h[0, 2] = -p.omega * np.sin(p.theta) * np.exp(1j * p.phi)
    h[1, 2] = -p.omega * np.cos(p.theta)
    h[2, 0] = np.conj(h[0, 2])
    h[2, 1] = np.conj(h[1, 2])
    h[2, 2] = -2.0 * p.delta  # single diagonal term, see module docstring
    return h


def hamiltonian_batch(
    theta: np.ndarray, phi: np.ndarray, omega: np.ndarray, delta: np.ndarray
) -> np.ndarray:
    """Stack of Hamiltonians, shape (n, 3, 3); the propagator's hot path."""
    theta, phi, omega, delta = np.broadcast_arrays(
        np.atleast_1d(np.asarray(theta, dtype=float)), phi, omega, delta
    )
    n = theta.shape[0]
    h = np.zeros((n, 3, 3), dtype=complex)
    h[:, 0, 2] = -omega * np.sin(theta) * np.exp(1j * np.asarray(phi))
    h[:, 1, 2] = -omega * np.cos(theta)
    h[:, 2, 0] = np.conj(h[:, 0, 2])
    h[:, 2, 1] = np.conj(h[:, 1, 2])
    h[:, 2, 2] = -2.0 * np.asarray(delta)
    return h


def mixing_angle(omega: float, delta: float) -> MixingAngle:
    """tan(gamma) = (sqrt(delta^2 + omega^2) - delta)/omega, gamma in [0, pi/2).

    Both algebraic forms of tan(gamma) are used, picked by the sign of
    delta so neither branch suffers cancellation.  omega = 0 is allowed
    only for delta > 0, where gamma -> 0 continuously (gamma ~ omega/(2 delta)).
    """
    if omega < 0 or not (math.isfinite(omega) and math.isfinite(delta)):
        raise ValueError(f"mixing_angle: bad arguments omega={omega}, delta={delta}")
    if omega == 0.0 and delta <= 0.0:
        raise ValueError(
            "mixing_angle undefined for omega = 0 with delta <= 0 "
            "(bright sector degenerate)"
        )
    hyp = math.hypot(omega, delta)
    if delta >= 0.0:
        tan = omega / (delta + hyp)
    else:
        tan = (hyp - delta) / omega
    gamma = math.atan(tan)
    return MixingAngle(gamma=gamma, sin=math.sin(gamma), cos=math.cos(gamma), tan=tan)


def mixing_angle_of(p: SystemParams) -> MixingAngle:
    return mixing_angle(p.omega, p.delta)


def spectrum(p: SystemParams) -> LambdaSpectrum:
    """Exact eigensystem in the (dark, bright, bright) column order.

    Requires omega > 0, or omega = 0 with delta > 0; omega = delta = 0 is
    rejected since the bright sector degenerates with the dark state.
    """
    if p.omega == 0.0 and p.delta <= 0.0:
        raise ValueError("spectrum: omega = 0 requires delta > 0")
    ma = mixing_angle(p.omega, p.delta)
    st, ct = np.sin(p.theta), np.cos(p.theta)
    ephi = np.exp(1j * p.phi)
    hyp = math.hypot(p.omega, p.delta)

    dark = np.array([ct, -st * np.conj(ephi), 0.0], dtype=complex)
    bright = np.array([st * ephi, ct, 0.0], dtype=complex)
    excited = np.array([0.0, 0.0, 1.0], dtype=complex)
    psi2 = ma.cos * bright - ma.sin * excited
    psi3 = ma.sin * bright + ma.cos * excited

    energies = np.array([0.0, hyp - p.delta, -(p.delta + hyp)])
    vectors = np.column_stack([dark, psi2, psi3])
    return LambdaSpectrum(energies=energies, vectors=vectors)


def spectrum_numeric(p: SystemParams):
    """Independent numeric route: eigh3 on the Hamiltonian.

    Returns the EigenDecomposition with its ascending eigenvalue order;
    callers match columns to the analytic spectrum by energy.
    """
    return eigh3(hamiltonian(p))


def dynamical_matrix(p: SystemParams) -> np.ndarray:
    """2x2 matrix D_kl = <psi_k|H|psi_l> over the lowest two eigenstates.

    Built from the analytic eigenvectors rather than asserted, so tests
    can pin D = diag(0, Omega*tan(gamma)) as a derived fact.
    """
    spec = spectrum(p)
    h = hamiltonian(p)
    low = spec.vectors[:, :2]
    return low.conj().T @ h @ low
