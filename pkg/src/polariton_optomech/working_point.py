"""Polariton basis, classical steady state and effective couplings.

All rates are expressed in the same units as ``DriveParams.gamma``
(usually ``gamma = 1``). The drive amplitude ``E_L`` is taken real and
non-negative.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, fields, replace
from typing import List, Mapping, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .config import ConfigError

#: Tolerance used to decide whether phi + varphi equals pi/4.
MAX_MIX_TOL = 1e-9


class SteadyStateError(RuntimeError):
    """The nonlinear steady-state iteration did not converge."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class MultistabilityError(RuntimeError):
    """More than one classical fixed point exists for the given drive."""

    def __init__(self, branches: List[float]):
        listing = ", ".join(f"{q:.12g}" for q in branches)
        super().__init__(f"multistable working point: {len(branches)} branches with q_s = {listing}")
        self.branches = branches


@dataclass(frozen=True)
class DriveParams:
    gamma: float = 1.0
    gamma_m: Optional[float] = None
    delta: float = 0.0
    f1: float = 0.0
    Delta_L: float = 0.0
    E_L: float = 0.0
    G0: float = 0.0
    omega_m: float = 1.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.gamma_m is None:
            object.__setattr__(self, "gamma_m", 2.0 * self.gamma)
        if not self.gamma_m > 0:
            raise ValueError("gamma_m must be positive")
        if self.f1 < 0:
            raise ValueError("f1 must be non-negative")
        if not self.omega_m > 0:
            raise ValueError("omega_m must be positive")
        if self.E_L < 0:
            raise ValueError("E_L is taken real and non-negative")

    @classmethod
    def from_mapping(cls, values: Mapping[str, float]) -> "DriveParams":
        known = {f.name for f in fields(cls)}
        kwargs = {k: float(v.real if isinstance(v, complex) else v) for k, v in values.items() if k in known}
        try:
            return cls(**kwargs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


@dataclass(frozen=True)
class WorkingPoint:
    """Classical steady state and the couplings of the linearized model.

    ``varphi``, ``U``, ``G_theta``, ``G_pi`` and ``G_t`` are filled by
    :func:`second_rotation`. ``G_t`` is ``None`` unless
    ``phi + varphi = pi/4``, where ``G_theta = -G_pi = G_t``.
    """

    phi: float
    Omega: float
    q_s: float
    psi_s: complex
    phi_s: complex
    Delta_q: float
    Omega_tilde: float
    G_psi: float
    G_phi: float
    G_q: float
    common_phase: float = 0.0
    relative_phase: float = 0.0
    in_real_regime: bool = True
    residual: float = 0.0
    varphi: Optional[float] = None
    U: Optional[float] = None
    G_theta: Optional[float] = None
    G_pi: Optional[float] = None
    G_t: Optional[float] = None


def polariton_angle(delta: float, f1: float) -> Tuple[float, float]:
    """Rotation angle ``phi`` in [0, pi/2] and splitting ``Omega``.

    ``cos(phi)**2 = 1/2 + delta/(2 Omega)`` with ``Omega = sqrt(f1**2 + delta**2)``;
    ``phi = pi/4`` when both vanish.
    """
    if f1 < 0:
        raise ValueError("f1 must be non-negative")
    omega = math.hypot(f1, delta)
    if omega == 0.0:
        return math.pi / 4, 0.0
    # atan2 keeps full precision when f1 << |delta|
    return 0.5 * math.atan2(f1, delta), omega


class _SteadyStateSystem:
    """The amplitude equations at fixed mirror displacement ``q``."""

    def __init__(self, p: DriveParams):
        self.p = p
        self.phi, self.Omega = polariton_angle(p.delta, p.f1)
        s, c = math.sin(self.phi), math.cos(self.phi)
        self.sin, self.cos = s, c
        self.G = p.G0 * math.sin(2 * self.phi)
        self.rhs = np.array([-p.E_L * s, p.E_L * c], dtype=complex)

    def detunings(self, q: float) -> Tuple[float, float]:
        p = self.p
        return p.Delta_L - 0.5 * q * p.G0, self.Omega - 0.5 * q * p.G0 * math.cos(2 * self.phi)

    def matrix(self, q: float) -> np.ndarray:
        g = self.p.gamma
        dq, om = self.detunings(q)
        off = 0.5j * self.G * q
        return np.array([[g + 1j * (dq - om), off], [off, g + 1j * (dq + om)]])

    def amplitudes(self, q: float) -> np.ndarray:
        return np.linalg.solve(self.matrix(q), self.rhs)

    def cavity(self, amps: np.ndarray) -> complex:
        return amps[1] * self.cos - amps[0] * self.sin

    def q_map(self, q: float) -> float:
        return self.p.G0 / self.p.omega_m * abs(self.cavity(self.amplitudes(q))) ** 2

    def residual(self, q: float, amps: np.ndarray) -> float:
        """Max-norm residual of the three steady-state equations."""
        r_amp = self.matrix(q) @ amps - self.rhs
        r_q = q - self.p.G0 / self.p.omega_m * abs(self.cavity(amps)) ** 2
        return float(max(np.max(np.abs(r_amp)), abs(r_q)))

    def q_bound(self) -> float:
        # gamma + iH with H Hermitian has inverse norm <= 1/gamma, so |a|^2 <= E^2/gamma^2
        return abs(self.p.G0) / self.p.omega_m * (self.p.E_L / self.p.gamma) ** 2


def _find_branches(system: _SteadyStateSystem, n_scan: int = 4001) -> List[float]:
    """All roots of ``q - q_map(q)`` on the a-priori interval, by scan + bisection."""
    bound = system.q_bound()
    if bound == 0.0:
        return [0.0]
    lo, hi = min(0.0, -bound), max(0.0, bound)
    grid = np.linspace(lo, hi, n_scan)
    f = np.array([q - system.q_map(q) for q in grid])
    roots = []
    for i in range(n_scan - 1):
        if f[i] == 0.0:
            roots.append(float(grid[i]))
        elif f[i] * f[i + 1] < 0:
            roots.append(brentq(lambda q: q - system.q_map(q), grid[i], grid[i + 1], xtol=1e-15, rtol=1e-14))
    if f[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots


def solve_steady_state(
    p: DriveParams,
    *,
    damping: float = 0.5,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    check_multistability: bool = True,
) -> WorkingPoint:
    """Classical fixed point ``(q_s, Psi_s, Phi_s)`` and the effective couplings.

    Damped fixed-point iteration on ``q_s`` seeded at zero, with an exact
    2x2 solve for the polariton amplitudes at each step. The converged branch
    is the one continuously connected to ``q_s = 0``. If a scan of the
    admissible ``q_s`` interval reveals further fixed points a
    :class:`MultistabilityError` listing all of them is raised.

    ``psi_s``/``phi_s`` are returned in the drive frame. The couplings are
    computed after removing the common phase ``common_phase`` (the phase of
    the cavity amplitude), which makes ``G_psi`` and ``G_phi`` real with the
    sign of ``G0``. ``relative_phase`` is ``arg(Phi_s / Psi_s)``;
    ``in_real_regime`` is False when it is neither 0 nor pi.
    """
    if not 0 < damping <= 1:
        raise ValueError("damping must lie in (0, 1]")
    system = _SteadyStateSystem(p)
    scale = max(p.gamma * p.E_L, np.finfo(float).tiny)

    q = 0.0
    res = math.inf
    for _ in range(max_iter):
        q_next = (1 - damping) * q + damping * system.q_map(q)
        step = abs(q_next - q)
        q = q_next
        if step <= tol * max(1.0, abs(q)):
            amps = system.amplitudes(q)
            res = system.residual(q, amps)
            if res <= 1e-10 * scale:
                break
    else:
        amps = system.amplitudes(q)
        raise SteadyStateError("steady-state iteration did not converge", system.residual(q, amps) / scale)

    if check_multistability:
        branches = _find_branches(system)
        distinct = [b for b in branches if abs(b - q) > 1e-8 * max(1.0, abs(q))]
        if distinct:
            raise MultistabilityError(sorted(set([q] + distinct)))

    psi_s, phi_s = complex(amps[0]), complex(amps[1])
    a_cav = system.cavity(amps)
    common = cmath.phase(a_cav) if abs(a_cav) > 0 else 0.0
    rot = cmath.exp(-1j * common)

    G_s = p.G0 * system.sin**2
    G_c = p.G0 * system.cos**2
    G = system.G
    G_psi = math.sqrt(2) * (0.5 * G * phi_s - G_s * psi_s) * rot
    G_phi = math.sqrt(2) * (G_c * phi_s - 0.5 * G * psi_s) * rot

    if abs(psi_s) > 0 and abs(phi_s) > 0:
        rel = cmath.phase(phi_s / psi_s)
    else:
        rel = 0.0
    in_regime = min(abs(rel), abs(abs(rel) - math.pi)) < 1e-8

    q = float(q)
    Delta_q, Omega_tilde = (float(x) for x in system.detunings(q))
    return WorkingPoint(
        phi=system.phi,
        Omega=system.Omega,
        q_s=q,
        psi_s=psi_s,
        phi_s=phi_s,
        Delta_q=Delta_q,
        Omega_tilde=Omega_tilde,
        G_psi=float(G_psi.real),
        G_phi=float(G_phi.real),
        G_q=float(0.5 * G * q),
        common_phase=common,
        relative_phase=rel,
        in_real_regime=in_regime,
        residual=res / scale,
    )


def second_rotation(wp: WorkingPoint) -> WorkingPoint:
    """Fill in the Theta/Pi rotation: ``varphi``, ``U`` and the transformed couplings.

    ``cos(varphi)**2 = 1/2 + Omega_tilde/(2U)`` with
    ``U = sqrt(Omega_tilde**2 + G_q**2)``; ``varphi = 0`` when ``U = 0``.
    """
    U = math.hypot(wp.Omega_tilde, wp.G_q)
    varphi = 0.0 if U == 0.0 else 0.5 * math.atan2(abs(wp.G_q), wp.Omega_tilde)
    c, s = math.cos(varphi), math.sin(varphi)
    G_theta = wp.G_psi * c + wp.G_phi * s
    G_pi = wp.G_psi * s - wp.G_phi * c
    G_t = G_theta if abs(wp.phi + varphi - math.pi / 4) < MAX_MIX_TOL else None
    return replace(wp, varphi=varphi, U=U, G_theta=G_theta, G_pi=G_pi, G_t=G_t)
