"""Exciton spectrum and exciton-cavity couplings of a 1D atomic lattice.

This is the only module working in SI units. :func:`to_dimensionless`
exports the quantities needed downstream (detuning, k=1 coupling and the
polariton splitting) in units of a caller supplied damping rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Mapping, Tuple

import numpy as np
from scipy import constants

from .config import ConfigError

#: Vacuum permittivity [F/m] (CODATA, via scipy.constants).
EPS0 = constants.epsilon_0
#: Reduced Planck constant [J s] (CODATA, via scipy.constants).
HBAR = constants.hbar


@dataclass(frozen=True)
class LatticeParams:
    """Physical parameters of the lattice and cavity (SI units).

    Attributes
    ----------
    n_sites : int
        Number of lattice sites ``N``.
    spacing_d : float
        Site separation [m].
    dipole_mu : float
        Transition dipole moment [C m].
    angle_alpha : float
        Angle between the dipoles and the lattice axis [rad].
    omega_a : float
        Atomic transition frequency [rad/s].
    omega_c : float
        Cavity frequency [rad/s].
    mode_volume_V : float
        Cavity mode volume [m^3].
    """

    n_sites: int
    spacing_d: float
    dipole_mu: float
    angle_alpha: float
    omega_a: float
    omega_c: float
    mode_volume_V: float

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise ValueError(f"n_sites must be an integer >= 2, got {self.n_sites}")
        object.__setattr__(self, "n_sites", int(self.n_sites))
        for name in ("spacing_d", "dipole_mu", "omega_a", "omega_c", "mode_volume_V"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value}")
        if not 0.0 <= self.angle_alpha <= math.pi:
            raise ValueError(f"angle_alpha must lie in [0, pi], got {self.angle_alpha}")

    @classmethod
    def from_mapping(cls, values: Mapping[str, float]) -> "LatticeParams":
        names = [f.name for f in fields(cls)]
        missing = [n for n in names if n not in values]
        if missing:
            raise ConfigError(f"missing lattice keys: {', '.join(missing)}")
        return cls(**{n: float(values[n]) for n in names})

    @classmethod
    def rb85_example(cls, *, spacing_d: float = 390e-9, angle_alpha: float = math.pi / 2) -> "LatticeParams":
        """Realistic 85Rb lattice: N = 1000, V = 1e-10 m^3, mu = 5e-29 C m.

        The atomic frequency is 2.5e15 and the cavity is tuned to the k = 1
        exciton. The spacing (default: half of the 780 nm D2 wavelength) only
        enters through the dipole-dipole shift, which is negligible here.
        """
        base = cls(1000, spacing_d, 5e-29, angle_alpha, 2.5e15, 2.5e15, 1e-10)
        return cls(1000, spacing_d, 5e-29, angle_alpha, 2.5e15, exciton_frequency(base, 1), 1e-10)


def dipole_dipole_J(params: LatticeParams) -> float:
    """Nearest-neighbour dipole-dipole coupling ``J_alpha`` [rad/s]."""
    mu, d, alpha = params.dipole_mu, params.spacing_d, params.angle_alpha
    return mu**2 * (1.0 - 3.0 * math.cos(alpha) ** 2) / (4.0 * math.pi * EPS0 * HBAR * d**3)


def _check_k(params: LatticeParams, k: int) -> int:
    if int(k) != k or not 1 <= k <= params.n_sites:
        raise ValueError(f"exciton index k must be an integer in [1, {params.n_sites}], got {k}")
    return int(k)


def exciton_frequency(params: LatticeParams, k: int) -> float:
    """Frequency of the k-th exciton mode [rad/s]."""
    k = _check_k(params, k)
    return params.omega_a + 2.0 * dipole_dipole_J(params) * math.cos(math.pi * k / (params.n_sites + 1))


def exciton_cavity_coupling(params: LatticeParams, k: int) -> float:
    """Coupling ``f_k`` of the k-th exciton to the cavity mode [rad/s].

    Raises
    ------
    ValueError
        For even ``k``: even-k modes decouple from the cavity field.
    """
    k = _check_k(params, k)
    if k % 2 == 0:
        raise ValueError(f"even-k modes decouple from the cavity (k={k}); f_k is defined for odd k only")
    n1 = params.n_sites + 1
    prefactor = math.sqrt(params.omega_c * params.dipole_mu**2 / (HBAR * EPS0 * params.mode_volume_V * n1))
    return prefactor / math.tan(math.pi * k / (2.0 * n1))


def exciton_transform(n_sites: int) -> np.ndarray:
    """Site-to-exciton matrix ``S[n-1, k-1] = sqrt(2/(N+1)) sin(pi n k/(N+1))``.

    ``B_n = sum_k S[n, k] C_k``. The matrix is real, symmetric and orthogonal.
    """
    if n_sites < 1:
        raise ValueError("n_sites must be positive")
    idx = np.arange(1, n_sites + 1)
    return math.sqrt(2.0 / (n_sites + 1)) * np.sin(np.pi * np.outer(idx, idx) / (n_sites + 1))


def to_dimensionless(params: LatticeParams, gamma: float) -> Tuple[float, float, float]:
    """Return ``(delta, f1, Omega)`` in units of ``gamma``.

    ``delta = (omega_c - omega_1)/2`` and ``Omega = sqrt(f1**2 + delta**2)``.
    ``gamma`` must be given in rad/s.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    delta = 0.5 * (params.omega_c - exciton_frequency(params, 1)) / gamma
    f1 = exciton_cavity_coupling(params, 1) / gamma
    return delta, f1, math.hypot(f1, delta)
