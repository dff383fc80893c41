"""Wilczek-Zee connections and curvature on the lowest two Lambda levels.

Conventions
-----------
The two-dimensional frame is (dark, lower bright) in that order, written
in the basis the closed-form eigenvectors define.  Connection components
are A_mu[a, b] = <psi_a | d_mu psi_b>, mu in (theta, phi), which makes
them anti-Hermitian.  The field strength follows the sign convention

    F_{theta phi} = d_phi A_theta - d_theta A_phi - [A_theta, A_phi]

throughout; the plaquette oracle extracts the same object, so the two
routes are directly comparable.

Variants
--------
exact               the full instantaneous-eigenframe connection, which
                    carries the bright-state admixture through cos(gamma)
approx-corrected    its gamma -> 0 limit, the large-detuning form; this
                    connection is pure gauge and all its holonomies are
                    trivial
du-sign             the disputed reconstruction: the sigma_y part of the
                    theta component flipped in sign, phi component kept
computational-basis the identically zero connection of the fixed frame
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .lambda_system import MixingAngle, SystemParams, mixing_angle_of, spectrum
from .matrices import expm_su2_batch, is_unitary


class ConnectionVariant(enum.Enum):
    EXACT = "exact"
    APPROX_CORRECTED = "approx-corrected"
    DU_SIGN = "du-sign"
    COMPUTATIONAL_BASIS = "computational-basis"

    @classmethod
    def from_tag(cls, tag: str) -> "ConnectionVariant":
        for member in cls:
            if member.value == tag:
                return member
        valid = ", ".join(m.value for m in cls)
        raise ValueError(f"unknown connection variant {tag!r}; expected one of: {valid}")


@dataclass(frozen=True)
class Connection:
    """Both connection components at one (theta, phi) point."""

    theta: float
    phi: float
    a_theta: np.ndarray
    a_phi: np.ndarray
    label: str


@dataclass(frozen=True)
class Curvature:
    """F_{theta phi} at one point, in the convention of the module docstring."""

    theta: float
    phi: float
    f: np.ndarray
    label: str


def _needs_gamma(variant: ConnectionVariant, gamma: MixingAngle | None) -> float:
    if variant is ConnectionVariant.EXACT:
        if gamma is None:
            raise ValueError("exact variant requires a MixingAngle")
        return gamma.cos
    return 1.0


def connection_batch(
    variant: ConnectionVariant,
    theta: np.ndarray,
    phi: np.ndarray,
    gamma: MixingAngle | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized connection components, shapes (n, 2, 2).

    The integrators evaluate thousands of points per loop, so this is the
    hot path; the pointwise ``connection`` wraps it.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    theta, phi = np.broadcast_arrays(theta, phi)
    n = theta.shape[0]
    a_t = np.zeros((n, 2, 2), dtype=complex)
    a_p = np.zeros((n, 2, 2), dtype=complex)
    if variant is ConnectionVariant.COMPUTATIONAL_BASIS:
        return a_t, a_p

    cg = _needs_gamma(variant, gamma)
    s, c = np.sin(theta), np.cos(theta)
    e = np.exp(1j * phi)

    if variant is ConnectionVariant.DU_SIGN:
        # sigma_y part flipped: off-diagonals become -conj(e) / +e
        a_t[:, 0, 1] = -np.conj(e)
        a_t[:, 1, 0] = e
    else:
        a_t[:, 0, 1] = cg * e
        a_t[:, 1, 0] = -cg * np.conj(e)

    cg_phi = cg if variant is ConnectionVariant.EXACT else 1.0
    a_p[:, 0, 0] = -1j * s * s
    a_p[:, 0, 1] = 1j * cg_phi * s * c * e
    a_p[:, 1, 0] = 1j * cg_phi * s * c * np.conj(e)
    a_p[:, 1, 1] = 1j * cg_phi * cg_phi * s * s
    return a_t, a_p


def connection(
    variant: ConnectionVariant,
    theta: float,
    phi: float,
    gamma: MixingAngle | None = None,
) -> Connection:
    a_t, a_p = connection_batch(variant, np.array([theta]), np.array([phi]), gamma)
    return Connection(
        theta=theta, phi=phi, a_theta=a_t[0], a_phi=a_p[0], label=variant.value
    )


def connection_fd(
    p: SystemParams, h: float = 1e-4, richardson: bool = True, max_truncation: float | None = None
) -> Connection:
    """Finite-difference oracle: central differences of the analytic eigenvectors.

    Independent of the closed-form connection entirely; it only uses the
    eigenvector formulas, whose phase is smooth in (theta, phi).  Plain
    central differences are O(h^2); with richardson=True the h and h/2
    stencils are combined to O(h^4).

    Raises
    ------
    ValueError : if h <= 0, or if the estimated truncation error (from
        the h vs h/2 comparison) exceeds max_truncation when given.
    """
    if h <= 0:
        raise ValueError(f"connection_fd: step h must be positive, got {h}")

    def low(theta: float, phi: float) -> np.ndarray:
        q = SystemParams(omega=p.omega, delta=p.delta, theta=theta, phi=phi)
        return spectrum(q).vectors[:, :2]

    def stencil(step: float) -> tuple[np.ndarray, np.ndarray]:
        base = low(p.theta, p.phi)
        d_th = (low(p.theta + step, p.phi) - low(p.theta - step, p.phi)) / (2 * step)
        d_ph = (low(p.theta, p.phi + step) - low(p.theta, p.phi - step)) / (2 * step)
        return base.conj().T @ d_th, base.conj().T @ d_ph

    at_h, ap_h = stencil(h)
    at_h2, ap_h2 = stencil(h / 2)
    truncation = max(
        float(np.max(np.abs(at_h - at_h2))), float(np.max(np.abs(ap_h - ap_h2)))
    ) * 4.0 / 3.0
    if max_truncation is not None and truncation > max_truncation:
        raise ValueError(
            f"connection_fd: step h={h:g} too coarse, estimated truncation "
            f"{truncation:.3e} exceeds {max_truncation:.3e}"
        )
    if richardson:
        a_t = (4.0 * at_h2 - at_h) / 3.0
        a_p = (4.0 * ap_h2 - ap_h) / 3.0
    else:
        a_t, a_p = at_h, ap_h
    return Connection(theta=p.theta, phi=p.phi, a_theta=a_t, a_phi=a_p, label="finite-difference")


def _partials_batch(
    variant: ConnectionVariant,
    theta: np.ndarray,
    phi: np.ndarray,
    gamma: MixingAngle | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Hand-differentiated (d_phi A_theta, d_theta A_phi) stacks."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    theta, phi = np.broadcast_arrays(theta, phi)
    n = theta.shape[0]
    dp_at = np.zeros((n, 2, 2), dtype=complex)
    dt_ap = np.zeros((n, 2, 2), dtype=complex)
    if variant is ConnectionVariant.COMPUTATIONAL_BASIS:
        return dp_at, dt_ap

    cg = _needs_gamma(variant, gamma)
    s, c = np.sin(theta), np.cos(theta)
    c2 = np.cos(2.0 * theta)
    e = np.exp(1j * phi)

    if variant is ConnectionVariant.DU_SIGN:
        dp_at[:, 0, 1] = 1j * np.conj(e)
        dp_at[:, 1, 0] = 1j * e
    else:
        dp_at[:, 0, 1] = 1j * cg * e
        dp_at[:, 1, 0] = 1j * cg * np.conj(e)

    cg_phi = cg if variant is ConnectionVariant.EXACT else 1.0
    dt_ap[:, 0, 0] = -2j * s * c
    dt_ap[:, 0, 1] = 1j * cg_phi * c2 * e
    dt_ap[:, 1, 0] = 1j * cg_phi * c2 * np.conj(e)
    dt_ap[:, 1, 1] = 2j * cg_phi * cg_phi * s * c
    return dp_at, dt_ap


def curvature_batch(
    variant: ConnectionVariant,
    theta: np.ndarray,
    phi: np.ndarray,
    gamma: MixingAngle | None = None,
) -> np.ndarray:
    """F_{theta phi} stack from analytic partials plus the commutator."""
    a_t, a_p = connection_batch(variant, theta, phi, gamma)
    dp_at, dt_ap = _partials_batch(variant, theta, phi, gamma)
    comm = np.matmul(a_t, a_p) - np.matmul(a_p, a_t)
    return dp_at - dt_ap - comm


def curvature_formula(
    variant: ConnectionVariant,
    theta: float,
    phi: float,
    gamma: MixingAngle | None = None,
) -> Curvature:
    f = curvature_batch(variant, np.array([theta]), np.array([phi]), gamma)[0]
    return Curvature(theta=theta, phi=phi, f=f, label=variant.value)


def curvature_plaquette(
    variant: ConnectionVariant,
    theta: float,
    phi: float,
    gamma: MixingAngle | None = None,
    h: float = 1e-3,
) -> Curvature:
    """Plaquette oracle: transport around the square of side h.

    The loop runs (theta,phi) -> (theta+h,phi) -> (theta+h,phi+h) ->
    (theta,phi+h) -> back, each edge approximated by the exponential of
    minus the connection at the edge midpoint.  For that orientation the
    product satisfies U = 1 + h^2 F + O(h^3) in this module's field
    strength convention, so F is read off as (U - 1)/h^2 with an O(h)
    error.  Independent of the hand-differentiated partials.
    """
    if h == 0:
        raise ValueError("curvature_plaquette: zero-area plaquette (h = 0)")
    corners = np.array(
        [
            (theta, phi),
            (theta + h, phi),
            (theta + h, phi + h),
            (theta, phi + h),
            (theta, phi),
        ]
    )
    mids = 0.5 * (corners[:-1] + corners[1:])
    steps = corners[1:] - corners[:-1]
    a_t, a_p = connection_batch(variant, mids[:, 0], mids[:, 1], gamma)
    gens = -(a_t * steps[:, 0, None, None] + a_p * steps[:, 1, None, None])
    edges = expm_su2_batch(gens)
    u = edges[3] @ edges[2] @ edges[1] @ edges[0]
    f = (u - np.eye(2)) / (h * h)
    return Curvature(theta=theta, phi=phi, f=f, label=f"{variant.value}+plaquette")


def frame_rotation_batch(
    theta: np.ndarray, phi: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stacked frame rotation with its theta and phi partials, (n, 2, 2) each."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    theta, phi = np.broadcast_arrays(theta, phi)
    n = theta.shape[0]
    s, c = np.sin(theta), np.cos(theta)
    e = np.exp(1j * phi)
    v = np.zeros((n, 2, 2), dtype=complex)
    dv_t = np.zeros((n, 2, 2), dtype=complex)
    dv_p = np.zeros((n, 2, 2), dtype=complex)
    v[:, 0, 0] = c
    v[:, 0, 1] = s * e
    v[:, 1, 0] = -s * np.conj(e)
    v[:, 1, 1] = c
    dv_t[:, 0, 0] = -s
    dv_t[:, 0, 1] = c * e
    dv_t[:, 1, 0] = -c * np.conj(e)
    dv_t[:, 1, 1] = -s
    dv_p[:, 0, 1] = 1j * s * e
    dv_p[:, 1, 0] = 1j * s * np.conj(e)
    return v, dv_t, dv_p


def frame_rotation(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Single-valued unitary taking the fixed frame to the large-detuning one.

    V = cos(theta) 1 + i sin(theta)(sigma_y cos(phi) + sigma_x sin(phi)),
    returned with its analytic theta and phi partials.  Transforming the
    zero connection of the computational basis by this V reproduces the
    approx-corrected connection, which is what makes that connection pure
    gauge.
    """
    s, c = np.sin(theta), np.cos(theta)
    e = np.exp(1j * phi)
    v = np.array([[c, s * e], [-s * np.conj(e), c]], dtype=complex)
    dv_theta = np.array([[-s, c * e], [-c * np.conj(e), -s]], dtype=complex)
    dv_phi = np.array([[0.0, 1j * s * e], [1j * s * np.conj(e), 0.0]], dtype=complex)
    return v, dv_theta, dv_phi


def gauge_transform(
    conn: Connection, v: np.ndarray, dv_theta: np.ndarray, dv_phi: np.ndarray, tol: float = 1e-10
) -> Connection:
    """A'_mu = V^dag A_mu V + V^dag d_mu V.

    Raises
    ------
    ValueError : if v is not unitary within tol.
    """
    if not is_unitary(v, tol):
        raise ValueError("gauge_transform: V is not unitary within tolerance")
    vh = v.conj().T
    a_t = vh @ conn.a_theta @ v + vh @ dv_theta
    a_p = vh @ conn.a_phi @ v + vh @ dv_phi
    return Connection(
        theta=conn.theta,
        phi=conn.phi,
        a_theta=a_t,
        a_phi=a_p,
        label=f"{conn.label}+gauge",
    )


# ---- gauge fields along a loop -------------------------------------------

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class GaugeField:
    """Smooth single-valued U(2) field along a loop parameter s in [0, 1].

    Parametrized by four angle functions (two z-rotations around a
    y-rotation, plus an overall phase), each a trigonometric polynomial
    with integer harmonics, so v(1) = v(0) exactly.  ``v_dot`` is the
    exact derivative with respect to s via the product rule; no finite
    differences are involved, which matters for tight covariance
    tolerances.

    cos_coef/sin_coef have shape (4, harmonics+1); row order is
    (alpha, beta, delta, epsilon); column k multiplies cos/sin(2 pi k s).
    """

    cos_coef: np.ndarray
    sin_coef: np.ndarray

    def _angles(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        k = np.arange(self.cos_coef.shape[1])
        arg = _TWO_PI * np.multiply.outer(s, k)  # (n, K+1)
        cos_t, sin_t = np.cos(arg), np.sin(arg)
        ang = cos_t @ self.cos_coef.T + sin_t @ self.sin_coef.T  # (n, 4)
        dang = _TWO_PI * (
            -sin_t @ (self.cos_coef * k).T + cos_t @ (self.sin_coef * k).T
        )
        return ang, dang

    def v(self, s: np.ndarray) -> np.ndarray:
        return self._build(s)[0]

    def v_dot(self, s: np.ndarray) -> np.ndarray:
        return self._build(s)[1]

    def value_and_rate(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(v(s), dv/ds) stacks; the interface the transport code consumes."""
        return self._build(s)

    def _build(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ang, dang = self._angles(s)
        al, be, de, ep = (ang[:, i] for i in range(4))
        dal, dbe, dde, dep = (dang[:, i] for i in range(4))
        n = al.shape[0]

        def zrot(a: np.ndarray) -> np.ndarray:
            z = np.zeros((n, 2, 2), dtype=complex)
            z[:, 0, 0] = np.exp(1j * a)
            z[:, 1, 1] = np.exp(-1j * a)
            return z

        def yrot(b: np.ndarray) -> np.ndarray:
            y = np.zeros((n, 2, 2), dtype=complex)
            cb, sb = np.cos(b), np.sin(b)
            y[:, 0, 0] = cb
            y[:, 0, 1] = sb
            y[:, 1, 0] = -sb
            y[:, 1, 1] = cb
            return y

        za, yb, zd = zrot(al), yrot(be), zrot(de)
        phase = np.exp(1j * ep)[:, None, None]
        core = np.matmul(za, np.matmul(yb, zd))
        v = phase * core

        sz = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
        isy = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)  # i*sigma_y
        dza = 1j * dal[:, None, None] * np.matmul(sz, za)
        dyb = dbe[:, None, None] * np.matmul(isy, yb)
        dzd = 1j * dde[:, None, None] * np.matmul(sz, zd)
        dcore = (
            np.matmul(dza, np.matmul(yb, zd))
            + np.matmul(za, np.matmul(dyb, zd))
            + np.matmul(za, np.matmul(yb, dzd))
        )
        v_dot = phase * dcore + 1j * dep[:, None, None] * v
        return v, v_dot

    def single_valued_defect(self) -> float:
        ends = self.v(np.array([0.0, 1.0]))
        return float(np.max(np.abs(ends[1] - ends[0])))


def random_gauge_field(rng: np.random.Generator, harmonics: int = 2, scale: float = 0.2) -> GaugeField:
    """Random smooth single-valued field; higher harmonics are damped 1/k."""
    k = np.arange(harmonics + 1)
    damp = np.where(k == 0, 1.0, 1.0 / np.maximum(k, 1))
    cos_coef = scale * rng.normal(size=(4, harmonics + 1)) * damp
    sin_coef = scale * rng.normal(size=(4, harmonics + 1)) * damp
    sin_coef[:, 0] = 0.0  # sin(0) column is dead weight
    return GaugeField(cos_coef=cos_coef, sin_coef=sin_coef)
