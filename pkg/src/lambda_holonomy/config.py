"""Flat key = value run configuration.

One assignment per line, '#' starts a comment, blank lines are fine.
Every key has a default, so an empty file is a valid configuration; an
unknown or repeated key is an error that names the offenders and the
valid vocabulary, since a silently ignored typo in, say, loop_amplitude
would invalidate a whole run.

The effective configuration (defaults merged with the file) is hashed
into every output table footer so results can be traced back to their
inputs.
"""

from __future__ import annotations

import hashlib
import math
from typing import Any

_LIST_SEP = ","
_PAIR_SEP = ";"


def _parse_float_list(text: str) -> tuple[float, ...]:
    items = [piece.strip() for piece in text.split(_LIST_SEP) if piece.strip()]
    return tuple(float(piece) for piece in items)


def _parse_waypoints(text: str) -> tuple[tuple[float, float], ...]:
    """'theta:phi; theta:phi; ...' pairs."""
    if not text.strip():
        return ()
    pairs = []
    for chunk in text.split(_PAIR_SEP):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 2:
            raise ValueError(
                f"bad waypoint {chunk!r}; expected theta:phi pairs separated by ';'"
            )
        pairs.append((float(parts[0]), float(parts[1])))
    return tuple(pairs)


def _fmt(value: Any) -> str:
    if isinstance(value, tuple):
        if value and isinstance(value[0], tuple):
            return "; ".join(f"{a:g}:{b:g}" for a, b in value)
        return ",".join(f"{v:g}" for v in value)
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


_CONVERTERS = {
    float: float,
    int: int,
    str: str,
    "float_list": _parse_float_list,
    "waypoints": _parse_waypoints,
}

# key -> (converter, default); each subcommand picks a subset
_ALL_KEYS: dict[str, tuple[Any, Any]] = {
    "omega": (float, 3.0),
    "delta": (float, 4.0),
    "theta": (float, 0.7),
    "phi": (float, 0.3),
    "variant": (str, "exact"),
    "grid_n": (int, 50),
    "fd_step": (float, 0.0),
    "loop": (str, "lissajous"),
    "loop_theta0": (float, math.pi / 3),
    "loop_amplitude": (float, 0.5),
    "loop_phi0": (float, 0.0),
    "waypoints": ("waypoints", ()),
    "tau_list": ("float_list", (1000.0, 3162.0, 10000.0)),
    "delta_over_omega_list": ("float_list", (10.0, 30.0, 100.0, 300.0, 1000.0)),
    "seed": (int, 20260822),
}

_LOOP_KEYS = ("loop", "loop_theta0", "loop_amplitude", "loop_phi0", "waypoints", "seed")

COMMAND_KEYS: dict[str, tuple[str, ...]] = {
    "spectrum": ("omega", "delta", "theta", "phi", "grid_n"),
    "connection": ("omega", "delta", "theta", "phi", "variant", "fd_step"),
    "curvature": ("omega", "delta", "variant", "grid_n", "fd_step"),
    "holonomy": ("omega", "delta", "variant") + _LOOP_KEYS,
    "evolve": ("omega", "delta", "tau_list") + _LOOP_KEYS,
    "sweep": ("omega", "delta_over_omega_list", "grid_n") + _LOOP_KEYS,
    "claims": ("seed",),
}


def parse_assignments(text: str) -> dict[str, str]:
    """Raw key -> value strings, rejecting malformed or repeated lines."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ValueError(f"config line {lineno}: no '=' in {line.strip()!r}")
        key, value = body.split("=", 1)
        key = key.strip()
        if key in out:
            raise ValueError(f"config line {lineno}: key {key!r} assigned twice")
        out[key] = value.strip()
    return out


def load_config(command: str, text: str) -> dict[str, Any]:
    """Effective configuration for a subcommand: defaults plus the file.

    Raises
    ------
    ValueError : on unknown keys for the subcommand (the message lists
        what is accepted), bad values, or repeated assignments.
    """
    if command not in COMMAND_KEYS:
        raise ValueError(f"unknown command {command!r}")
    keys = COMMAND_KEYS[command]
    raw = parse_assignments(text)
    unknown = sorted(set(raw) - set(keys))
    if unknown:
        raise ValueError(
            f"unknown config keys for '{command}': {', '.join(unknown)}; "
            f"accepted keys: {', '.join(keys)}"
        )
    out: dict[str, Any] = {}
    for key in keys:
        converter, default = _ALL_KEYS[key]
        if key in raw:
            try:
                out[key] = _CONVERTERS[converter](raw[key])
            except ValueError as exc:
                raise ValueError(f"config key {key!r}: {exc}") from exc
        else:
            out[key] = default
    return out


def canonical_lines(cfg: dict[str, Any]) -> list[str]:
    return [f"{key} = {_fmt(cfg[key])}" for key in sorted(cfg)]


def config_hash(cfg: dict[str, Any]) -> str:
    digest = hashlib.sha256("\n".join(canonical_lines(cfg)).encode()).hexdigest()
    return digest[:12]
