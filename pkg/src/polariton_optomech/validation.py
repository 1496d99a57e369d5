"""Oracle-vs-pipeline grid checks and stochastic cross-checks used by ``validate``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from . import oracles
from .gaussian import (
    BathSpec,
    build_three_mode,
    build_two_colour,
    build_two_mode,
    quad_to_complex_moments,
    solve_lyapunov,
    theta_pi_to_a1_a2,
)
from .stochastic import SimConfig, simulate

RTOL = 1e-9
#: Absolute floor for moments that vanish identically.
ATOL = 1e-12


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _rel_err(got, want) -> float:
    return abs(got - want) / max(abs(want), ATOL / RTOL)


def _moment_errors(ms, ref) -> float:
    return max(_rel_err(getattr(ms, f), getattr(ref, f)) for f in ("n_a", "n_b", "aa", "bb", "adag_b", "ab"))


def _grid_check(name: str, points, fn: Callable, tol: float = RTOL) -> CheckResult:
    worst = 0.0
    count = 0
    for pt in points:
        worst = max(worst, fn(*pt))
        count += 1
    return CheckResult(name, worst <= tol, f"{count} points, max err {worst:.3e} (tol {tol:g})")


NBARS = (0.0, 0.3, 0.7, 0.9, 1.2)


def _two_mode_thermal(n, G):
    cov = solve_lyapunov(build_two_mode(G, 1.0, BathSpec(n)))
    return _moment_errors(quad_to_complex_moments(cov, ("psi", "b")), oracles.two_mode_thermal(1.0, n, G).moments)


def _two_mode_squeezed(n, G):
    m = math.sqrt(n * (n + 1))
    cov = solve_lyapunov(build_two_mode(G, 1.0, BathSpec(n, m)))
    return _moment_errors(quad_to_complex_moments(cov, ("psi", "b")), oracles.two_mode_squeezed(1.0, n, G, m).moments)


def _two_colour(n, U):
    cov = solve_lyapunov(build_two_colour(1.0, U, 1.0, BathSpec(n)))
    return _moment_errors(quad_to_complex_moments(cov, ("b", "theta")), oracles.two_colour(1.0, n, 1.0, U).moments)


def _theta_pi(n, U):
    cov = solve_lyapunov(build_three_mode(1.0, U, 1.0, BathSpec(n)))
    ref = oracles.three_mode_theta_pi(1.0, n, 1.0, U)
    tp = quad_to_complex_moments(cov, ("theta", "pi"))
    tb = quad_to_complex_moments(cov, ("theta", "b"))
    return max(_moment_errors(tp, ref.moments), _rel_err(tb.ab, ref.theta_b), _rel_err(tb.n_b, ref.n_b))


def _a1_a2(n, U):
    cov = solve_lyapunov(build_three_mode(1.0, U, 1.0, BathSpec(n), variant="a1_a2"))
    ref = oracles.three_mode_a1_a2(1.0, n, 1.0, U)
    fixed = oracles.three_mode_a1_a2_rotated(1.0, n, 1.0, U)
    a1b = quad_to_complex_moments(cov, ("A1", "b"))
    a2b = quad_to_complex_moments(cov, ("A2", "b"))
    a12 = quad_to_complex_moments(cov, ("A1", "A2"))
    return max(
        _rel_err(a1b.n_b, ref.n_b),
        _rel_err(a2b.ab, ref.a2_b),
        _rel_err(a2b.n_a, ref.n_a2),
        _rel_err(a12.adag_b, ref.a1dag_a2),
        # the reference <A1 b> and <A1^dag A1> are inconsistent with the drift matrix
        _rel_err(a1b.ab, fixed.a1_b),
        _rel_err(a1b.n_a, fixed.n_a1),
    )


def _basis(n, U):
    S = theta_pi_to_a1_a2()
    v_tp = solve_lyapunov(build_three_mode(1.0, U, 1.0, BathSpec(n))).v
    v_a = solve_lyapunov(build_three_mode(1.0, U, 1.0, BathSpec(n), variant="a1_a2")).v
    return float(np.abs(S @ v_tp @ S.T - v_a).max())


def stochastic_points():
    """One representative model per variant family."""
    return [
        ("two_mode", build_two_mode(1.0, 1.0, BathSpec(0.0))),
        ("two_colour", build_two_colour(1.0, 2.0, 1.0, BathSpec(0.3))),
        ("a1_a2", build_three_mode(1.0, 3.0, 1.0, BathSpec(0.2), variant="a1_a2")),
    ]


def run_checks(stochastic: bool = True) -> List[CheckResult]:
    Gs = (0.2, 0.6, 1.0, 1.4, 1.8)
    Us = (1.0, 2.0, 3.0, 5.0, 10.0)
    out = [
        _grid_check("oracle.two_mode_thermal", [(n, G) for n in NBARS for G in Gs], _two_mode_thermal),
        _grid_check("oracle.two_mode_squeezed", [(n, G) for n in NBARS for G in Gs], _two_mode_squeezed),
        _grid_check("oracle.two_colour", [(n, U) for n in NBARS for U in (0.0,) + Us], _two_colour),
        _grid_check("oracle.theta_pi", [(n, U) for n in NBARS for U in Us], _theta_pi),
        _grid_check("oracle.a1_a2", [(n, U) for n in NBARS for U in Us], _a1_a2),
        _grid_check("basis.theta_pi_vs_a1_a2", [(n, U) for n in NBARS for U in Us], _basis, 1e-12),
    ]
    if stochastic:
        cfg = SimConfig()
        for name, model in stochastic_points():
            est = simulate(model, cfg)
            z = est.z_scores(solve_lyapunov(model))
            iu = np.triu_indices(z.shape[0])
            worst = float(np.abs(z[iu]).max())
            out.append(CheckResult(f"stochastic.{name}", worst < 3.0, f"max |z| = {worst:.3f} over {len(iu[0])} entries"))
    return out

