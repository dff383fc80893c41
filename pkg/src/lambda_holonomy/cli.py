"""Command-line front end.

Subcommands map one-to-one onto the library's report surfaces:

    spectrum    eigenvalues and mixing angle over a theta grid
    connection  both connection components at a point, with the
                finite-difference cross-check for the exact variant
    curvature   curvature entries on a (theta, phi) grid, optional
                plaquette-oracle column
    holonomy    loop transport for a configured loop and variant
    evolve      full three-level propagation vs the two-level evolution
                over a list of traversal times
    sweep       detuning sweep with scaling fits in the footer
    claims      the acceptance battery; human table plus a line-oriented
                machine summary, nonzero exit iff anything fails

Everything numeric is emitted at full precision and runs are
deterministic for a given configuration, so output files are directly
diffable.  --figures renders PNG plots next to the table (or into the
working directory when printing to stdout).
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys

import numpy as np

from .claims import ClaimSettings, run_claims
from .config import COMMAND_KEYS, canonical_lines, config_hash, load_config
from .csvio import format_cell, render_table
from .gauge import ConnectionVariant, connection, connection_fd, curvature_batch, curvature_plaquette
from .holonomy import holonomy
from .lambda_system import SystemParams, mixing_angle, spectrum
from .paths import build_loop
from .propagation import adiabatic_comparison
from .sweeps import detuning_sweep, loglog_slope

_DEFAULT_STEPS = 10_000


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambda-holonomy",
        description="numerical checks for geometric phases of a driven three-level system",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMAND_KEYS:
        p = sub.add_parser(name, help=f"run the {name} report")
        p.add_argument("--config", default=None, help="key = value configuration file")
        p.add_argument("--out", default=None, help="output table path (default: stdout)")
        p.add_argument("--workers", type=int, default=1, help="process pool size for sweeps")
        p.add_argument(
            "--steps", type=int, default=0, help="override integrator step count (0 = default)"
        )
        p.add_argument(
            "--tolerance",
            type=float,
            default=0.0,
            help="fail if the run's error estimate exceeds this (0 = off)",
        )
        p.add_argument(
            "--figures", action="store_true", help="render PNG figures next to the output"
        )
    return parser


def _footer(cfg: dict, extra: dict | None = None) -> dict:
    out = {}
    for line in canonical_lines(cfg):
        key, value = line.split(" = ", 1)
        out[f"config {key}"] = value
    out["config_hash"] = config_hash(cfg)
    for key, value in (extra or {}).items():
        out[key] = value
    return out


def _variant(cfg: dict) -> ConnectionVariant:
    return ConnectionVariant.from_tag(cfg["variant"])


def _gamma_if_exact(variant: ConnectionVariant, cfg: dict):
    if variant is ConnectionVariant.EXACT:
        return mixing_angle(cfg["omega"], cfg["delta"])
    return None


def _loop_from(cfg: dict, tau: float = 1.0):
    return build_loop(
        kind=cfg["loop"],
        omega=cfg["omega"],
        delta=cfg["delta"],
        tau=tau,
        theta0=cfg["loop_theta0"],
        amplitude=cfg["loop_amplitude"],
        phi0=cfg["loop_phi0"],
        seed=cfg["seed"],
        waypoints=cfg["waypoints"] or None,
    )


def _complex_cells(m: np.ndarray) -> list[float]:
    cells: list[float] = []
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            cells.extend((float(m[i, j].real), float(m[i, j].imag)))
    return cells


def _emit(args, text: str, figure_jobs) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    if args.figures:
        stem = args.out.rsplit(".", 1)[0] if args.out else args.command
        from . import figures  # lazy: pulls in matplotlib

        for suffix, job in figure_jobs:
            path = job(figures, f"{stem}_{suffix}.png")
            print(f"wrote {path}")


def _cmd_spectrum(args, cfg) -> int:
    n = cfg["grid_n"]
    thetas = np.array([cfg["theta"]]) if n == 1 else np.linspace(0.0, math.pi, n)
    gamma = mixing_angle(cfg["omega"], cfg["delta"]).gamma
    rows = []
    energy_grid = np.empty((len(thetas), 3))
    for i, th in enumerate(thetas):
        p = SystemParams(omega=cfg["omega"], delta=cfg["delta"], theta=float(th), phi=cfg["phi"])
        e = spectrum(p).energies
        energy_grid[i] = e
        rows.append(
            (float(th), cfg["phi"], cfg["omega"], cfg["delta"], e[0], e[1], e[2], gamma)
        )
    header = ["theta", "phi", "omega", "delta", "lambda1", "lambda2", "lambda3", "gamma"]
    text = render_table(header, rows, _footer(cfg))
    jobs = []
    if len(thetas) > 1:
        jobs.append(
            (
                "levels",
                lambda figs, path: figs.save_spectrum_figure(
                    path,
                    thetas,
                    energy_grid,
                    f"omega={cfg['omega']:g}, delta={cfg['delta']:g}",
                ),
            )
        )
    _emit(args, text, jobs)
    return 0


def _cmd_connection(args, cfg) -> int:
    variant = _variant(cfg)
    gamma = _gamma_if_exact(variant, cfg)
    conn = connection(variant, cfg["theta"], cfg["phi"], gamma)
    fd_defect: float | str = ""
    if variant is ConnectionVariant.EXACT:
        h = cfg["fd_step"] or 1e-4
        fd = connection_fd(
            SystemParams(cfg["omega"], cfg["delta"], cfg["theta"], cfg["phi"]),
            h=h,
            max_truncation=args.tolerance or None,
        )
        fd_defect = max(
            float(np.max(np.abs(conn.a_theta - fd.a_theta))),
            float(np.max(np.abs(conn.a_phi - fd.a_phi))),
        )
    header = (
        ["theta", "phi", "variant"]
        + [f"at{i}{j}_{part}" for i in (1, 2) for j in (1, 2) for part in ("re", "im")]
        + [f"ap{i}{j}_{part}" for i in (1, 2) for j in (1, 2) for part in ("re", "im")]
        + ["fd_defect"]
    )
    row = (
        [cfg["theta"], cfg["phi"], variant.value]
        + _complex_cells(conn.a_theta)
        + _complex_cells(conn.a_phi)
        + [fd_defect]
    )
    _emit(args, render_table(header, [row], _footer(cfg)), [])
    return 0


def _cmd_curvature(args, cfg) -> int:
    variant = _variant(cfg)
    gamma = _gamma_if_exact(variant, cfg)
    n = cfg["grid_n"]
    theta = (np.arange(n) + 0.5) * math.pi / n
    phi = (np.arange(n) + 0.5) * 2.0 * math.pi / n
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    f = curvature_batch(variant, tt.ravel(), pp.ravel(), gamma)
    norms = np.linalg.norm(f, "fro", axis=(1, 2))
    with_plaquette = cfg["fd_step"] > 0
    header = ["theta", "phi", "variant"] + [
        f"{part}F{i}{j}" for i in (1, 2) for j in (1, 2) for part in ("Re", "Im")
    ] + ["frobenius_norm"]
    if with_plaquette:
        header.append("plaquette_defect")
    rows = []
    for k, (th, ph) in enumerate(zip(tt.ravel(), pp.ravel())):
        row = [float(th), float(ph), variant.value] + _complex_cells(f[k]) + [float(norms[k])]
        if with_plaquette:
            plaq = curvature_plaquette(variant, float(th), float(ph), gamma, h=cfg["fd_step"])
            row.append(float(np.linalg.norm(plaq.f - f[k], "fro")))
        rows.append(row)
    text = render_table(header, rows, _footer(cfg, {"grid_max_norm": float(np.max(norms))}))
    norm_grid = norms.reshape(n, n)
    jobs = [
        (
            "map",
            lambda figs, path: figs.save_curvature_figure(
                path, theta, phi, norm_grid, f"variant={variant.value}"
            ),
        )
    ]
    _emit(args, text, jobs)
    return 0


def _cmd_holonomy(args, cfg) -> int:
    variant = _variant(cfg)
    loop = _loop_from(cfg)
    n = args.steps or _DEFAULT_STEPS
    result = holonomy(variant, loop, n=n, richardson=True)
    if args.tolerance and result.richardson_error > args.tolerance:
        print(
            f"error: step-halving estimate {result.richardson_error:.3e} exceeds "
            f"--tolerance {args.tolerance:.3e}; raise --steps",
            file=sys.stderr,
        )
        return 2
    header = (
        ["variant", "loop", "steps", "distance_from_identity", "richardson_error"]
        + [f"u{i}{j}_{part}" for i in (1, 2) for j in (1, 2) for part in ("re", "im")]
    )
    row = (
        [variant.value, loop.label, n, result.distance_from_identity(), result.richardson_error]
        + _complex_cells(result.unitary)
    )
    text = render_table(header, [row], _footer(cfg, {"steps": n}))

    def _convergence(figs, path):
        ref = holonomy(variant, loop, n=4 * n, richardson=False).unitary
        ns = [max(n // 8, 2), max(n // 4, 2), max(n // 2, 2), n]
        errs = [
            float(np.linalg.norm(holonomy(variant, loop, n=k, richardson=False).unitary - ref, "fro"))
            for k in ns
        ]
        return figs.save_holonomy_figure(
            path, np.array(ns, dtype=float), np.array(errs), f"{variant.value} on {loop.label}"
        )

    _emit(args, text, [("convergence", _convergence)])
    return 0


def _cmd_evolve(args, cfg) -> int:
    taus = np.array(cfg["tau_list"], dtype=float)
    if taus.size == 0:
        print("error: tau_list is empty", file=sys.stderr)
        return 2
    points = adiabatic_comparison(
        lambda tau: _loop_from(cfg, tau),
        taus,
        steps_per_omega_time=4.0,
        fixed_steps=args.steps or None,
    )
    if args.tolerance:
        worst = max(pt.estimated_error for pt in points)
        if worst > args.tolerance:
            print(
                f"error: propagation error estimate {worst:.3e} exceeds "
                f"--tolerance {args.tolerance:.3e}; raise --steps",
                file=sys.stderr,
            )
            return 2
    header = ["tau", "steps", "distance", "leakage", "estimated_error"]
    rows = [
        (pt.tau, pt.steps, pt.distance, pt.leakage, pt.estimated_error) for pt in points
    ]
    text = render_table(header, rows, _footer(cfg))
    jobs = [("adiabatic", lambda figs, path: figs.save_evolve_figure(path, points))]
    _emit(args, text, jobs)
    return 0


def _cmd_sweep(args, cfg) -> int:
    rows = detuning_sweep(
        np.array(cfg["delta_over_omega_list"], dtype=float),
        omega=cfg["omega"],
        grid_n=cfg["grid_n"],
        loop_steps=args.steps or _DEFAULT_STEPS,
        loop_kind=cfg["loop"],
        theta0=cfg["loop_theta0"],
        amplitude=cfg["loop_amplitude"],
        phi0=cfg["loop_phi0"],
        seed=cfg["seed"],
        waypoints=cfg["waypoints"] or None,
        adiabatic_tau=1000.0,
        workers=args.workers,
    )
    header = [
        "delta_over_omega",
        "sin_gamma",
        "curvature_max",
        "commutator_max",
        "gp_deviation",
        "separability_gap",
        "adiabatic_distance",
    ]
    table_rows = [
        (
            r.delta_over_omega,
            r.sin_gamma,
            r.curvature_max,
            r.commutator_max,
            r.gp_deviation,
            r.separability_gap,
            r.adiabatic_distance,
        )
        for r in rows
    ]
    sines = np.array([r.sin_gamma for r in rows])
    slopes: dict[str, float] = {}
    for name in ("curvature_max", "gp_deviation", "commutator_max", "separability_gap", "adiabatic_distance"):
        values = np.array([getattr(r, name) for r in rows])
        if np.all(np.isfinite(values)) and np.all(values > 0) and len(set(sines)) > 1:
            slopes[name] = loglog_slope(sines, values)
    extra = {f"slope {name} vs sin_gamma": val for name, val in slopes.items()}
    extra["loop_steps"] = args.steps or _DEFAULT_STEPS
    text = render_table(header, table_rows, _footer(cfg, extra))
    jobs = [("scaling", lambda figs, path: figs.save_sweep_figure(path, rows, slopes))]
    _emit(args, text, jobs)
    return 0


def _cmd_claims(args, cfg) -> int:
    settings = dataclasses.replace(ClaimSettings.default(), seed=cfg["seed"])
    outcomes = run_claims(settings)
    for o in outcomes:
        status = "PASS" if o.passed else "FAIL"
        print(
            f"claim {o.claim_id}  {status}  value={o.value:.6e}  "
            f"threshold={o.threshold:.6e}  ({o.elapsed:.2f}s)  {o.description}"
        )
        print(f"    criterion: {o.criterion}")
        if not o.passed:
            print(f"    detail: {o.detail}")
    print()
    tsv_lines = [
        "\t".join(
            (
                str(o.claim_id),
                "pass" if o.passed else "fail",
                format_cell(float(o.value)),
                format_cell(float(o.threshold)),
            )
        )
        for o in outcomes
    ]
    summary = "\n".join(tsv_lines) + "\n"
    sys.stdout.write(summary)
    if args.out:
        footer = "".join(
            f"# {key} = {format_cell(value)}\n" for key, value in _footer(cfg).items()
        )
        with open(args.out, "w") as fh:
            fh.write(summary + footer)
        print(f"wrote {args.out}")
    if args.figures:
        stem = args.out.rsplit(".", 1)[0] if args.out else args.command
        from . import figures

        path = figures.save_claims_figure(f"{stem}_margins.png", outcomes)
        print(f"wrote {path}")
    return 0 if all(o.passed for o in outcomes) else 1


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "connection": _cmd_connection,
    "curvature": _cmd_curvature,
    "holonomy": _cmd_holonomy,
    "evolve": _cmd_evolve,
    "sweep": _cmd_sweep,
    "claims": _cmd_claims,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            try:
                with open(args.config) as fh:
                    text = fh.read()
            except OSError as exc:
                print(f"error: cannot read config {args.config}: {exc}", file=sys.stderr)
                return 2
        else:
            text = ""
        cfg = load_config(args.command, text)
        return _HANDLERS[args.command](args, cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # reader went away (e.g. piped into head); not our error
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
