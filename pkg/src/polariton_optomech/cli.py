"""Command line front end.

Subcommands ``point``, ``sweep``, ``lattice``, ``validate`` and ``simulate``
write comma-separated output (to stdout or ``--out``) preceded by ``#``
comment lines echoing the version and the effective parameters.

Exit codes: 0 success, 2 configuration error, 3 unstable or multistable
configuration, 4 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import fields, replace
from typing import Dict, List, Optional, Sequence

from . import __version__
from .config import ConfigError, load_config
from .gaussian import BathSpec, UnstableModelError, solve_lyapunov, stability
from .lattice import LatticeParams, dipole_dipole_J, exciton_cavity_coupling, exciton_frequency, to_dimensionless
from .stochastic import SimConfig, simulate
from .sweeps import (
    PARAM_FIELD,
    SWEEPABLE,
    VARIANTS,
    Axis,
    ModelParams,
    Sweep,
    closed_axis,
    evaluate_point,
    figure_sweep,
)
from .working_point import DriveParams, MultistabilityError, SteadyStateError, second_rotation, solve_steady_state

EXIT_OK, EXIT_CONFIG, EXIT_UNSTABLE, EXIT_VALIDATION = 0, 2, 3, 4

_LATTICE_KEYS = {f.name for f in fields(LatticeParams)}
_DRIVE_KEYS = {f.name for f in fields(DriveParams)}
_MODEL_KEYS = {"nbar", "n_bar", "msq", "m_sq", "Gpsi", "Gtheta", "Gt", "Gpi", "U"}
_KNOWN_KEYS = _LATTICE_KEYS | _DRIVE_KEYS | _MODEL_KEYS | {"gamma_si"}


class _Unstable(Exception):
    pass


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    return x if isinstance(x, str) else f"{x:.15e}"


def _emit(args, header: Dict[str, object], columns: Sequence[str], rows: Sequence[Sequence]) -> None:
    buf = io.StringIO()
    buf.write(f"# polariton-optomech {__version__}\n")
    for key, value in header.items():
        buf.write(f"# {key} = {value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _echo(args) -> Dict[str, object]:
    skip = {"func", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


# ---------------------------------------------------------------------------
# parameter assembly
# ---------------------------------------------------------------------------


def _load(args) -> Dict[str, object]:
    values: Dict[str, object] = {}
    if getattr(args, "config", None):
        try:
            values = dict(load_config(args.config))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        unknown = sorted(set(values) - _KNOWN_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return values


def _pick(values, *keys, default=None):
    for k in keys:
        if k in values:
            return values[k]
    return default


def _model_params(args, values: Dict[str, object]) -> tuple:
    """Resolve flags and config into ``ModelParams``; flags win over the file.

    Returns the params and, for the full chain, the working point.
    """
    variant = args.variant
    n_bar = args.nbar if args.nbar is not None else float(_pick(values, "nbar", "n_bar", default=0.0))
    m_sq = args.msq if args.msq is not None else complex(_pick(values, "msq", "m_sq", default=0.0))
    gamma = float(values.get("gamma", 1.0))
    gamma_m = args.gamma_m if args.gamma_m is not None else values.get("gamma_m")
    try:
        BathSpec(n_bar, m_sq)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    wp = None
    if _DRIVE_KEYS & {"E_L", "G0"} & set(values):
        drive = dict(values)
        if _LATTICE_KEYS <= set(values):
            if "gamma_si" not in values:
                raise ConfigError("lattice keys given without gamma_si (optical damping in rad/s)")
            try:
                lat = LatticeParams.from_mapping(values)
                drive["delta"], drive["f1"], _ = to_dimensionless(lat, float(values["gamma_si"]))
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        if gamma_m is not None:
            drive["gamma_m"] = gamma_m
        drive_params = DriveParams.from_mapping(drive)
        gamma, gamma_m = drive_params.gamma, drive_params.gamma_m
        wp = second_rotation(solve_steady_state(drive_params))
        G_pi = None
        if variant == "two_mode":
            G, U = wp.G_psi, 0.0
        elif variant == "two_colour":
            G, U = wp.G_theta, wp.U
        elif variant == "theta_pi":
            G, U, G_pi = wp.G_theta, wp.U, wp.G_pi
        else:
            if wp.G_t is None:
                raise ConfigError("a1_a2 needs phi + varphi = pi/4 (G_theta = -G_pi); working point is not there")
            G, U = wp.G_t, wp.U
    else:
        G_flag = {"two_mode": args.Gpsi, "two_colour": args.Gtheta, "theta_pi": args.Gt, "a1_a2": args.Gt}[variant]
        G_key = {"two_mode": "Gpsi", "two_colour": "Gtheta", "theta_pi": "Gt", "a1_a2": "Gt"}[variant]
        G = G_flag if G_flag is not None else values.get(G_key)
        if G is None:
            flag = "--Gpsi" if variant == "two_mode" else ("--Gtheta" if variant == "two_colour" else "--Gt")
            raise ConfigError(f"variant {variant} needs a coupling ({flag} or {G_key} in the config)")
        U = args.U if args.U is not None else float(values.get("U", 0.0))
        G_pi = values.get("Gpi")
    try:
        params = ModelParams(variant, float(G), float(U), n_bar, m_sq, gamma, gamma_m, G_pi)
        params.build()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return params, wp


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_point(args) -> int:
    params, wp = _model_params(args, _load(args))
    report = evaluate_point(params)
    rows = []
    if wp is not None:
        for name in ("phi", "Omega", "q_s", "Delta_q", "Omega_tilde", "G_psi", "G_phi", "G_q", "varphi", "U",
                     "G_theta", "G_pi"):
            rows.append((f"wp.{name}", getattr(wp, name)))
        rows.append(("wp.in_real_regime", str(wp.in_real_regime).lower()))
    rows += [("G", params.G), ("U", params.U), ("nbar", params.n_bar)]
    rows += report.rows()
    _emit(args, _echo(args), ["quantity", "value"], rows)
    if not report.stable:
        print(
            f"error: unstable configuration, max Re(eig A) = {report.max_real_eig:.6e} is not below the stability margin",
            file=sys.stderr,
        )
        raise _Unstable
    return EXIT_OK


def _parse_axis(spec: str, grid: int) -> Axis:
    try:
        name, lo, hi = spec.split(":")
        lo, hi = float(lo), float(hi)
    except ValueError:
        raise ConfigError(f"axis must look like NAME:LO:HI, got {spec!r}") from None
    if name not in SWEEPABLE:
        raise ConfigError(f"cannot sweep {name!r}; choose from {', '.join(SWEEPABLE)}")
    return closed_axis(name, lo, hi, grid)


def cmd_sweep(args) -> int:
    if args.figure == "custom":
        if not (args.x and args.y):
            raise ConfigError("custom sweeps need --x and --y")
        values = _load(args)
        base = {
            "variant": args.variant,
            "G": args.Gpsi or args.Gtheta or args.Gt or 1.0,
            "U": args.U or 0.0,
            "n_bar": args.nbar if args.nbar is not None else float(_pick(values, "nbar", "n_bar", default=0.0)),
            "gamma_m": args.gamma_m,
        }
        if args.msq is not None:
            base["m_sq"] = args.msq
        sweep = Sweep(_parse_axis(args.x, args.grid), _parse_axis(args.y, args.grid), args.quantity, base)
    else:
        G = args.Gtheta if args.figure == "fig4" else args.Gt
        sweep = figure_sweep(args.figure, args.grid, G_fixed=G if G is not None else 1.0)
    try:
        rows = sweep.run()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    header = {"command": "sweep", "figure": args.figure, "grid": args.grid}
    swept = {PARAM_FIELD[sweep.x.name], PARAM_FIELD[sweep.y.name]}
    header.update({f"fixed.{k}": v for k, v in sorted(sweep.base.items()) if v is not None and k not in swept})
    for axis in (sweep.x, sweep.y):
        header[f"axis.{axis.name}"] = f"{float(axis.values[0])!r}..{float(axis.values[-1])!r} ({len(axis.values)} points)"
    _emit(args, header, sweep.header(), rows)
    return EXIT_OK


def cmd_lattice(args) -> int:
    values = _load(args)
    try:
        params = LatticeParams.from_mapping(values) if values else LatticeParams.rb85_example()
        if args.angle is not None:
            params = replace(params, angle_alpha=args.angle)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    J = dipole_dipole_J(params)
    rows: List[Sequence] = []
    for k in range(1, params.n_sites + 1):
        f = exciton_cavity_coupling(params, k) if k % 2 else 0.0
        rows.append((k, exciton_frequency(params, k), f))
    header = _echo(args)
    header["J_alpha_rad_per_s"] = f"{J:.15e}"
    header["f1_over_2pi_Hz"] = f"{exciton_cavity_coupling(params, 1) / (2 * math.pi):.15e}"
    _emit(args, header, ["k", "omega_k", "f_k"], [(str(k), w, f) for k, w, f in rows])
    return EXIT_OK


def cmd_simulate(args) -> int:
    params, _ = _model_params(args, _load(args))
    model = params.build()
    if not stability(model).stable:
        print("error: unstable configuration", file=sys.stderr)
        raise _Unstable
    try:
        cfg = SimConfig(args.dt, args.burn_in, args.window, args.ntraj, args.seed)
        est = simulate(model, cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    ref = solve_lyapunov(model).v
    labels = [f"{m}_{c}" for m in model.mode_labels for c in ("q", "p")]
    n = ref.shape[0]
    rows = [
        (labels[i], labels[j], est.cov.v[i, j], est.stderr[i, j], ref[i, j], (est.cov.v[i, j] - ref[i, j]) / est.stderr[i, j])
        for i in range(n)
        for j in range(i, n)
    ]
    _emit(args, _echo(args), ["row", "col", "estimate", "stderr", "lyapunov", "z"], rows)
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validation import run_checks

    results = run_checks(stochastic=not args.no_stochastic)
    rows = [(r.name, "pass" if r.passed else "fail", r.detail) for r in results]
    _emit(args, _echo(args), ["check", "status", "detail"], rows)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=VARIANTS, default="two_mode")
    p.add_argument("--nbar", type=float, help="thermal occupation of the mirror bath")
    p.add_argument("--msq", type=complex, help="two-photon correlation m of the mirror bath")
    p.add_argument("--Gpsi", type=float, help="two_mode coupling (units of gamma)")
    p.add_argument("--Gtheta", type=float, help="two_colour coupling (units of gamma)")
    p.add_argument("--Gt", type=float, help="three-mode coupling (units of gamma)")
    p.add_argument("--U", type=float, help="detuning / mixing rate (units of gamma)")
    p.add_argument("--gamma-m", dest="gamma_m", type=float, help="mirror damping, default 2 gamma")
    p.add_argument("--config", help="key = value parameter file")
    p.add_argument("--out", help="write CSV here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polariton-optomech", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="full report for one configuration")
    _model_flags(p)
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="two-parameter grid")
    p.add_argument("figure", choices=("fig2", "fig3", "fig4", "fig5", "custom"))
    p.add_argument("--grid", type=int, default=50, help="points per axis")
    p.add_argument("--x", help="custom axis NAME:LO:HI (row-major outer)")
    p.add_argument("--y", help="custom axis NAME:LO:HI")
    p.add_argument("--quantity", choices=("E_N", "chi"), default="E_N")
    p.add_argument("--seed", type=int, help="accepted for uniformity; sweeps are deterministic")
    _model_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("lattice", help="exciton frequencies and couplings")
    p.add_argument("--angle", type=float, help="override the dipole angle alpha [rad]")
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("validate", help="oracle and stochastic cross-checks")
    p.add_argument("--no-stochastic", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", help="stochastic estimate vs Lyapunov covariance")
    _model_flags(p)
    p.add_argument("--dt", type=float, default=SimConfig.dt)
    p.add_argument("--burn-in", dest="burn_in", type=float, default=SimConfig.burn_in)
    p.add_argument("--window", type=float, default=SimConfig.sample_window)
    p.add_argument("--ntraj", type=int, default=SimConfig.n_trajectories)
    p.add_argument("--seed", type=int, default=SimConfig.seed)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "grid", 1) is not None and getattr(args, "grid", 1) < 1:
        parser.error("--grid must be positive")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (MultistabilityError, SteadyStateError, UnstableModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except _Unstable:
        return EXIT_UNSTABLE
