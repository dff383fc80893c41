"""Numerical laboratory for geometric phases of a driven three-level system.

The library side is organized bottom-up: ``matrices`` (dense linear
algebra helpers), ``lambda_system`` (Hamiltonian and closed-form
spectrum), ``gauge`` (connections, curvature, gauge transforms),
``paths`` (loop library), ``holonomy`` (path-ordered transport),
``propagation`` (full three-level integrator), ``sweeps`` (detuning
scalings), ``claims`` (the acceptance battery).  ``cli`` wires them to
subcommands.
"""

from .claims import ClaimOutcome, ClaimSettings, run_claims
from .gauge import Connection, ConnectionVariant, Curvature
from .holonomy import HolonomyResult, holonomy, subspace_evolution
from .lambda_system import LambdaSpectrum, MixingAngle, SystemParams, mixing_angle, spectrum
from .paths import ParameterPath, build_loop
from .propagation import PropagationResult, propagate
from .sweeps import SweepRow, detuning_sweep

__all__ = [
    "ClaimOutcome",
    "ClaimSettings",
    "Connection",
    "ConnectionVariant",
    "Curvature",
    "HolonomyResult",
    "LambdaSpectrum",
    "MixingAngle",
    "ParameterPath",
    "PropagationResult",
    "SweepRow",
    "SystemParams",
    "build_loop",
    "detuning_sweep",
    "holonomy",
    "mixing_angle",
    "propagate",
    "run_claims",
    "spectrum",
    "subspace_evolution",
]

__version__ = "0.1.0"
