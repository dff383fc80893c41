"""Closed loops and schedules in the (theta, phi) control space.

A ParameterPath carries vectorized callables for the angles and their
time derivatives plus the (possibly constant) drive schedules.  The
named constructors cover the standard loops:

* ``phi_circle``  theta fixed, phi winds once around
* ``theta_retrace``  phi fixed, theta runs 0 -> pi -> 0; zero enclosed
  area, every holonomy of it is trivial, useful as a control
* ``lissajous``  phi winds once while theta oscillates about theta0
* ``fourier_loop``  random smooth closed loop from damped harmonics
* ``waypoint_loop``  trigonometric interpolation through given points

The named loops traverse with a smooth-start/stop ramp by default
(rate vanishing at both ends), which the adiabatic comparisons rely on;
holonomies are reparametrization invariant so they do not care.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .lambda_system import MixingAngle, mixing_angle

_TWO_PI = 2.0 * math.pi


def _const(value: float) -> Callable[[np.ndarray], np.ndarray]:
    def f(t: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(t, dtype=float), value)

    return f


@dataclass
class ParameterPath:
    """Schedule t in [0, tau] -> (theta, phi, Omega, Delta)."""

    tau: float
    theta: Callable[[np.ndarray], np.ndarray]
    phi: Callable[[np.ndarray], np.ndarray]
    theta_dot: Callable[[np.ndarray], np.ndarray]
    phi_dot: Callable[[np.ndarray], np.ndarray]
    omega: Callable[[np.ndarray], np.ndarray]
    delta: Callable[[np.ndarray], np.ndarray]
    closed: bool
    constant_drive: bool
    label: str = field(default="")

    def gamma(self) -> MixingAngle:
        """Mixing angle for constant-drive paths."""
        if not self.constant_drive:
            raise ValueError("gamma() needs a constant-drive path")
        return mixing_angle(float(self.omega(0.0)), float(self.delta(0.0)))

    def closure_defect(self) -> float:
        """How far the endpoints are from closing, phi taken mod 2*pi."""
        t = np.array([0.0, self.tau])
        th = self.theta(t)
        ph = self.phi(t)
        dphi = (ph[1] - ph[0] + math.pi) % _TWO_PI - math.pi
        return float(max(abs(th[1] - th[0]), abs(dphi)))


def derivative_defect(path: ParameterPath, n: int = 512) -> float:
    """Max relative mismatch between the rate callables and central differences.

    Sampled at n interior times; the scale for 'relative' is the larger
    of the sampled rate magnitude and 1/tau so that flat segments do not
    divide by zero.
    """
    t = (np.arange(1, n + 1) / (n + 2)) * path.tau
    h = path.tau * 1e-6
    scale = max(
        float(np.max(np.abs(path.theta_dot(t)))),
        float(np.max(np.abs(path.phi_dot(t)))),
        1.0 / path.tau,
    )
    fd_th = (path.theta(t + h) - path.theta(t - h)) / (2 * h)
    fd_ph = (path.phi(t + h) - path.phi(t - h)) / (2 * h)
    worst = max(
        float(np.max(np.abs(fd_th - path.theta_dot(t)))),
        float(np.max(np.abs(fd_ph - path.phi_dot(t)))),
    )
    return worst / scale


def _ramp(smooth: bool):
    """Traversal profile s(u) on [0,1] and its derivative."""
    if smooth:

        def s(u: np.ndarray) -> np.ndarray:
            return u - np.sin(_TWO_PI * u) / _TWO_PI

        def ds(u: np.ndarray) -> np.ndarray:
            return 1.0 - np.cos(_TWO_PI * u)

    else:

        def s(u: np.ndarray) -> np.ndarray:
            return np.asarray(u, dtype=float)

        def ds(u: np.ndarray) -> np.ndarray:
            return np.ones_like(np.asarray(u, dtype=float))

    return s, ds


def phi_circle(
    theta0: float,
    omega: float,
    delta: float,
    tau: float = 1.0,
    smooth: bool = True,
) -> ParameterPath:
    s, ds = _ramp(smooth)

    def phi(t):
        return _TWO_PI * s(np.asarray(t, dtype=float) / tau)

    def phi_dot(t):
        return _TWO_PI * ds(np.asarray(t, dtype=float) / tau) / tau

    return ParameterPath(
        tau=tau,
        theta=_const(theta0),
        phi=phi,
        theta_dot=_const(0.0),
        phi_dot=phi_dot,
        omega=_const(omega),
        delta=_const(delta),
        closed=True,
        constant_drive=True,
        label=f"phi-circle(theta0={theta0:g})",
    )


def theta_retrace(
    phi0: float,
    omega: float,
    delta: float,
    tau: float = 1.0,
) -> ParameterPath:
    """theta: 0 -> pi -> 0 at fixed phi.  Zero enclosed area."""

    def theta(t):
        u = np.asarray(t, dtype=float) / tau
        return 0.5 * math.pi * (1.0 - np.cos(_TWO_PI * u))

    def theta_dot(t):
        u = np.asarray(t, dtype=float) / tau
        return (math.pi**2) * np.sin(_TWO_PI * u) / tau

    return ParameterPath(
        tau=tau,
        theta=theta,
        phi=_const(phi0),
        theta_dot=theta_dot,
        phi_dot=_const(0.0),
        omega=_const(omega),
        delta=_const(delta),
        closed=True,
        constant_drive=True,
        label=f"theta-retrace(phi0={phi0:g})",
    )


def lissajous(
    theta0: float,
    amplitude: float,
    omega: float,
    delta: float,
    tau: float = 1.0,
    smooth: bool = True,
) -> ParameterPath:
    """phi winds once, theta = theta0 + amplitude*sin(2 pi s)."""
    s, ds = _ramp(smooth)

    def theta(t):
        u = np.asarray(t, dtype=float) / tau
        return theta0 + amplitude * np.sin(_TWO_PI * s(u))

    def theta_dot(t):
        u = np.asarray(t, dtype=float) / tau
        return amplitude * _TWO_PI * np.cos(_TWO_PI * s(u)) * ds(u) / tau

    def phi(t):
        return _TWO_PI * s(np.asarray(t, dtype=float) / tau)

    def phi_dot(t):
        return _TWO_PI * ds(np.asarray(t, dtype=float) / tau) / tau

    return ParameterPath(
        tau=tau,
        theta=theta,
        phi=phi,
        theta_dot=theta_dot,
        phi_dot=phi_dot,
        omega=_const(omega),
        delta=_const(delta),
        closed=True,
        constant_drive=True,
        label=f"lissajous(theta0={theta0:g}, a={amplitude:g})",
    )


def rest_point(
    theta0: float,
    phi0: float,
    omega: float,
    delta: float,
    tau: float = 1.0,
) -> ParameterPath:
    """Static parameters; propagation against it is a plain exponential."""
    return ParameterPath(
        tau=tau,
        theta=_const(theta0),
        phi=_const(phi0),
        theta_dot=_const(0.0),
        phi_dot=_const(0.0),
        omega=_const(omega),
        delta=_const(delta),
        closed=True,
        constant_drive=True,
        label="rest-point",
    )


LOOP_KINDS = ("phi-circle", "theta-circle", "lissajous", "fourier", "waypoints")


def build_loop(
    kind: str,
    omega: float,
    delta: float,
    tau: float = 1.0,
    theta0: float = math.pi / 3,
    amplitude: float = 0.5,
    phi0: float = 0.0,
    seed: int = 0,
    waypoints: tuple[tuple[float, float], ...] | None = None,
) -> ParameterPath:
    """Loop constructor dispatch on plain data, safe to send across processes."""
    if kind == "phi-circle":
        return phi_circle(theta0, omega, delta, tau)
    if kind == "theta-circle":
        return theta_retrace(phi0, omega, delta, tau)
    if kind == "lissajous":
        return lissajous(theta0, amplitude, omega, delta, tau)
    if kind == "fourier":
        rng = np.random.default_rng(seed)
        return fourier_loop(rng, omega, delta, theta0=theta0, tau=tau)
    if kind == "waypoints":
        if not waypoints:
            raise ValueError("build_loop: kind 'waypoints' needs waypoint data")
        return waypoint_loop([tuple(w) for w in waypoints], omega, delta, tau)
    raise ValueError(f"build_loop: unknown loop kind {kind!r}; expected one of {LOOP_KINDS}")


class _TrigSeries:
    """Real trigonometric polynomial sum_k Re[c_k e^{2 pi i f_k s}]."""

    def __init__(self, coef: np.ndarray, freqs: np.ndarray):
        self.coef = coef
        self.freqs = freqs

    @classmethod
    def interpolating(cls, values: np.ndarray) -> "_TrigSeries":
        m = len(values)
        coef = np.fft.fft(np.asarray(values, dtype=float)) / m
        freqs = np.fft.fftfreq(m, d=1.0 / m)  # integer frequencies
        return cls(coef=coef, freqs=freqs)

    def eval(self, s: np.ndarray) -> np.ndarray:
        arg = _TWO_PI * np.multiply.outer(np.asarray(s, dtype=float), self.freqs)
        return (np.exp(1j * arg) @ self.coef).real

    def deriv(self, s: np.ndarray) -> np.ndarray:
        arg = _TWO_PI * np.multiply.outer(np.asarray(s, dtype=float), self.freqs)
        return (np.exp(1j * arg) @ (self.coef * 2j * math.pi * self.freqs)).real


def fourier_loop(
    rng: np.random.Generator,
    omega: float,
    delta: float,
    theta0: float = math.pi / 3,
    harmonics: int = 3,
    scale: float = 0.35,
    tau: float = 1.0,
) -> ParameterPath:
    """Random smooth closed loop: damped harmonics in theta and phi.

    phi gets an integer winding in {-1, 0, 1} plus harmonics, so the loop
    closes exactly; theta stays clear of the poles by clipping the total
    harmonic amplitude.
    """
    k = np.arange(1, harmonics + 1)
    damp = 1.0 / k**2
    a = scale * rng.normal(size=harmonics) * damp
    b = scale * rng.normal(size=harmonics) * damp
    c = scale * rng.normal(size=harmonics) * damp
    d = scale * rng.normal(size=harmonics) * damp
    winding = int(rng.integers(-1, 2))

    budget = float(np.sum(np.abs(a)) + np.sum(np.abs(b)))
    room = min(theta0, math.pi - theta0) - 0.1
    if budget > room > 0:
        a *= room / budget
        b *= room / budget

    def theta(t):
        s = np.asarray(t, dtype=float) / tau
        arg = _TWO_PI * np.multiply.outer(s, k)
        return theta0 + np.sin(arg) @ a + np.cos(arg) @ b - np.sum(b)

    def theta_dot(t):
        s = np.asarray(t, dtype=float) / tau
        arg = _TWO_PI * np.multiply.outer(s, k)
        return (np.cos(arg) @ (a * k) - np.sin(arg) @ (b * k)) * _TWO_PI / tau

    def phi(t):
        s = np.asarray(t, dtype=float) / tau
        arg = _TWO_PI * np.multiply.outer(s, k)
        return _TWO_PI * winding * s + np.sin(arg) @ c + np.cos(arg) @ d - np.sum(d)

    def phi_dot(t):
        s = np.asarray(t, dtype=float) / tau
        arg = _TWO_PI * np.multiply.outer(s, k)
        return (_TWO_PI * winding + (np.cos(arg) @ (c * k) - np.sin(arg) @ (d * k)) * _TWO_PI) / tau

    return ParameterPath(
        tau=tau,
        theta=theta,
        phi=phi,
        theta_dot=theta_dot,
        phi_dot=phi_dot,
        omega=_const(omega),
        delta=_const(delta),
        closed=True,
        constant_drive=True,
        label=f"fourier-loop(w={winding})",
    )


def waypoint_loop(
    waypoints: list[tuple[float, float]],
    omega: float,
    delta: float,
    tau: float = 1.0,
) -> ParameterPath:
    """Smooth closed loop through equally spaced (theta, phi) waypoints.

    Trigonometric interpolation; phi may wind, the integer winding is
    inferred from the shortest wrapped increments between consecutive
    points (the closing segment included).
    """
    if len(waypoints) < 3:
        raise ValueError("waypoint_loop needs at least 3 waypoints")
    pts = np.asarray(waypoints, dtype=float)
    m = pts.shape[0]
    th_series = _TrigSeries.interpolating(pts[:, 0])

    raw = np.concatenate([pts[:, 1], pts[:1, 1]])
    inc = np.diff(raw)
    inc = (inc + math.pi) % _TWO_PI - math.pi
    total = float(np.sum(inc))
    winding = int(round(total / _TWO_PI))
    unwrapped = raw[0] + np.concatenate([[0.0], np.cumsum(inc)])[:-1]
    residual = unwrapped - _TWO_PI * winding * np.arange(m) / m
    ph_series = _TrigSeries.interpolating(residual)

    def theta(t):
        return th_series.eval(np.asarray(t, dtype=float) / tau)

    def theta_dot(t):
        return th_series.deriv(np.asarray(t, dtype=float) / tau) / tau

    def phi(t):
        s = np.asarray(t, dtype=float) / tau
        return _TWO_PI * winding * s + ph_series.eval(s)

    def phi_dot(t):
        s = np.asarray(t, dtype=float) / tau
        return (_TWO_PI * winding + ph_series.deriv(s)) / tau

    return ParameterPath(
        tau=tau,
        theta=theta,
        phi=phi,
        theta_dot=theta_dot,
        phi_dot=phi_dot,
        omega=_const(omega),
        delta=_const(delta),
        closed=True,
        constant_drive=True,
        label=f"waypoints({m})",
    )
