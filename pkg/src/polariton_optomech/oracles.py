"""Closed-form steady-state moments of the secular models.

Each function transcribes the reference expressions term by term, without
algebraic cleanup, so that the numerical pipeline in :mod:`.gaussian` can be
checked against them. Where a reference expression is known to disagree
with its own drift matrix, the reference form is kept and a corrected
companion is provided next to it (see :func:`three_mode_a1_a2_rotated`).

Phase conventions for complex ``m`` (two-photon correlation of the mirror
bath): ``|m|`` is used wherever the closed form carries a modulus. Moments of the optical
modes that are driven through ``b^dag`` (``<Psi^2>``, ``<Theta Pi>``,
``<Theta^2>``, ``<Pi^2>``) carry ``conj(m)``; the two coincide for the real
``m`` used throughout the figures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .coherence import chi_from_degrees
from .gaussian import MomentSet


class OracleDomainError(ValueError):
    """Parameters outside the stability domain of a closed form."""


def _check_bath(n_bar: float, m: complex) -> None:
    if n_bar < 0:
        raise OracleDomainError("n_bar must be non-negative")
    if abs(m) > math.sqrt(n_bar * (n_bar + 1)) * (1 + 1e-12) + 1e-15:
        raise OracleDomainError("|m| must not exceed sqrt(n_bar (n_bar + 1))")


def _ratio(num: float, den: float) -> float:
    # normalized degrees are undefined when both occupations vanish
    return num / den if den != 0 else math.nan


def _check_two_mode(gamma: float, G_psi: float) -> None:
    if not gamma > 0:
        raise OracleDomainError("gamma must be positive")
    if not abs(G_psi) < 2 * gamma:
        raise OracleDomainError(f"two-mode steady state requires |G_psi| < 2 gamma, got {G_psi}")


# ---------------------------------------------------------------------------
# degenerate polariton-mirror pair
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoModeThermal:
    var_upsilon_x: float
    var_lambda_x: float
    var_psi_x: float
    var_q: float
    n_psi: float
    n_b: float
    psi_b: complex
    eta_ab_sq: float

    @property
    def moments(self) -> MomentSet:
        """Pair ``(A, B) = (psi, b)``."""
        return MomentSet(self.n_psi, self.n_b, 0j, 0j, 0j, self.psi_b)


def two_mode_thermal(gamma: float, n_bar: float, G_psi: float) -> TwoModeThermal:
    _check_two_mode(gamma, G_psi)
    _check_bath(n_bar, 0.0)
    g, n, G = gamma, n_bar, G_psi
    var_upsilon_x = g * (n + 1) / (2 * (g - 0.5 * G))
    var_lambda_x = g * (n + 1) / (2 * (g + 0.5 * G))
    var_psi_x = 0.5 * (g**2 * (n + 1) / (g**2 - 0.25 * G**2) - n)
    var_q = 0.5 * (g**2 * (n + 1) / (g**2 - 0.25 * G**2) + n)
    psi_b = -0.25j * (n + 1) * g * G / (g**2 - 0.25 * G**2)
    n_psi = 0.125 * (n + 1) * G**2 / (g**2 - 0.25 * G**2)
    n_b = 0.5 * ((n - 1) + (n + 1) * g**2 / (g**2 - 0.25 * G**2))
    eta_ab_sq = _ratio((n + 1) * g**2, 2 * n * g**2 - 0.25 * (n - 1) * G**2)
    return TwoModeThermal(var_upsilon_x, var_lambda_x, var_psi_x, var_q, n_psi, n_b, psi_b, eta_ab_sq)


@dataclass(frozen=True)
class TwoModeSqueezed:
    n_psi: float
    n_b: float
    psi_b: complex
    psidag_b: complex
    psi_sq: complex
    b_sq: complex
    gamma1: float
    eta_psi_psi: float
    eta_b_b: float
    eta_psi_b: float
    chi: float

    @property
    def moments(self) -> MomentSet:
        """Pair ``(A, B) = (psi, b)``."""
        return MomentSet(self.n_psi, self.n_b, self.psi_sq, self.b_sq, self.psidag_b, self.psi_b)


def two_mode_squeezed(gamma: float, n_bar: float, G_psi: float, m: complex) -> TwoModeSqueezed:
    """Mirror damped by a broadband squeezed vacuum (``n_bar``, ``m``)."""
    _check_two_mode(gamma, G_psi)
    _check_bath(n_bar, m)
    thermal = two_mode_thermal(gamma, n_bar, G_psi)
    g, n, G = gamma, n_bar, G_psi
    psidag_b = 1j * g * m * G / (4 * (g**2 - 0.25 * G**2))
    m = complex(m)
    psi_sq = -0.125 * m.conjugate() * G**2 / (g**2 - 0.25 * G**2)
    b_sq = 0.5 * m * (1 + g**2 / (g**2 - 0.25 * G**2))
    occ = 2 * n * g**2 - 0.25 * (n - 1) * G**2
    gamma1 = _ratio(g * abs(m), math.sqrt((n + 1) * occ))
    eta_psi_psi = abs(m) / (n + 1)
    eta_b_b = _ratio(abs(m) * (2 * g**2 - 0.25 * G**2), occ)
    eta_psi_b = math.sqrt(thermal.eta_ab_sq)
    chi = chi_from_degrees(eta_psi_psi, eta_b_b, gamma1, eta_psi_b)
    return TwoModeSqueezed(
        thermal.n_psi, thermal.n_b, thermal.psi_b, psidag_b, complex(psi_sq), complex(b_sq),
        gamma1, eta_psi_psi, eta_b_b, eta_psi_b, chi,
    )


# ---------------------------------------------------------------------------
# two-colour pair
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoColour:
    n_b: float
    b_theta: complex
    n_theta: float
    eta_sq: float

    @property
    def moments(self) -> MomentSet:
        """Pair ``(A, B) = (b, theta)``."""
        return MomentSet(self.n_b, self.n_theta, 0j, 0j, 0j, self.b_theta)


def two_colour_stable(gamma: float, G_theta: float, U: float) -> bool:
    """Drift eigenvalues ``gamma + iU/2 +- sqrt(G^2 - U^2)/2`` all decay."""
    excess = G_theta**2 - U**2
    return excess <= 0 or math.sqrt(excess) < 2 * gamma


def two_colour(gamma: float, n_bar: float, G_theta: float, U: float) -> TwoColour:
    if not gamma > 0:
        raise OracleDomainError("gamma must be positive")
    if not two_colour_stable(gamma, G_theta, U):
        raise OracleDomainError("two-colour model above threshold (unstable)")
    _check_bath(n_bar, 0.0)
    g, n, G = gamma, n_bar, G_theta
    W = U**2 - G**2 + 4 * g**2
    n_b = n + (n + 1) * G**2 / (2 * W)
    b_theta = -0.5j * (n + 1) * (2 * g - 1j * U) * G / W
    n_theta = (n + 1) * G**2 / (2 * W)
    eta_sq = _ratio((n + 1) * (4 * g**2 + U**2), 2 * n * (4 * g**2 + U**2) - (n - 1) * G**2)
    return TwoColour(n_b, b_theta, n_theta, eta_sq)


# ---------------------------------------------------------------------------
# three modes: Theta and Pi both parametrically coupled to the mirror
# ---------------------------------------------------------------------------


def _three_mode_domain(gamma: float, G_t: float, U: float) -> float:
    if not gamma > 0:
        raise OracleDomainError("gamma must be positive")
    B_sq = U**2 - 0.5 * G_t**2
    if not B_sq > 0:
        raise OracleDomainError(f"three-mode closed forms need U > G_t/sqrt(2) (B real), got U={U}, G_t={G_t}")
    return B_sq


@dataclass(frozen=True)
class ThreeModeThetaPi:
    B: float
    D: float
    n_b: float
    n_theta: float
    n_pi: float
    theta_b: complex
    pi_b: complex
    thetadag_pi: complex
    theta_pi: complex
    theta_sq: complex
    pi_sq: complex
    gamma1: float
    eta_theta_pi: float
    eta_theta_theta: float
    upsilon_sq: float
    chi: float

    @property
    def moments(self) -> MomentSet:
        """Pair ``(A, B) = (theta, pi)``."""
        return MomentSet(self.n_theta, self.n_pi, self.theta_sq, self.pi_sq, self.thetadag_pi, self.theta_pi)


def three_mode_theta_pi(gamma: float, n_bar: float, G_t: float, U: float, m: complex = 0.0) -> ThreeModeThetaPi:
    """Closed forms for ``G_theta = -G_pi = G_t``.

    ``pi_sq`` follows the reference statement ``<Pi^2> = <Theta^2>``; the
    drift matrix gives the same expression with ``Z`` replaced by
    ``conj(Z)``, which has the same modulus.
    """
    B_sq = _three_mode_domain(gamma, G_t, U)
    _check_bath(n_bar, m)
    g, n, G = gamma, n_bar, G_t
    m = complex(m)
    D = 8 * (B_sq + g**2) * (B_sq + 4 * g**2)
    K = 3 * G**2 + 8 * (B_sq + g**2)
    Z = 3 * G**2 + 4 * (B_sq - 2 * g**2) + 12j * g * U
    n_b = n + (n + 1) * K * G**2 / D
    n_theta = (n + 1) * K * G**2 / (2 * D)
    theta_b = 1j * (n + 1) * (g + 1j * U) * Z * G / D
    thetadag_pi = (n + 1) * Z.conjugate() * G**2 / (2 * D)
    theta_pi = m.conjugate() * G**2 / (2 * D) * K
    theta_sq = m.conjugate() * G**2 / (2 * D) * Z
    gamma1 = abs(Z) / K
    eta_theta_pi = abs(m) / (n + 1)
    eta_theta_theta = abs(m) / (n + 1) * abs(Z) / K
    upsilon_sq = 1 - 24 * (G**2 + 2 * B_sq) * (B_sq + g**2) / K**2
    mm = abs(m) ** 2 / (n + 1) ** 2
    chi = (1 + (1 - upsilon_sq) * (1 - mm) / (1 + upsilon_sq + mm)) ** 2
    return ThreeModeThetaPi(
        math.sqrt(B_sq), D, n_b, n_theta, n_theta, theta_b, theta_b.conjugate(), thetadag_pi,
        theta_pi, theta_sq, theta_sq, gamma1, eta_theta_pi, eta_theta_theta, upsilon_sq, chi,
    )


# ---------------------------------------------------------------------------
# three modes in the A1/A2 basis: parametric + linear mixing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThreeModeA1A2:
    n_b: float
    a1_b: complex
    a2_b: complex
    n_a1: float
    a1dag_a2: complex
    n_a2: float

    @property
    def eta_a2_b_sq(self) -> float:
        return abs(self.a2_b) ** 2 / (self.n_a2 * self.n_b)

    @property
    def moments_a2_b(self) -> MomentSet:
        """Pair ``(A, B) = (A2, b)``; self- and first-order moments vanish."""
        return MomentSet(self.n_a2, self.n_b, 0j, 0j, 0j, self.a2_b)


def three_mode_a1_a2(gamma: float, n_bar: float, G_t: float, U: float) -> ThreeModeA1A2:
    """The six reference moments, transcribed term by term.

    ``a1_b`` and ``n_a1`` in this form do not satisfy the a1_a2 6x6 drift
    matrix; :func:`three_mode_a1_a2_rotated` gives the consistent values.
    """
    B_sq = _three_mode_domain(gamma, G_t, U)
    _check_bath(n_bar, 0.0)
    g, n, G = gamma, n_bar, G_t
    D = 8 * (B_sq + g**2) * (B_sq + 4 * g**2)
    n_b = n + (n + 1) * (3 * G**2 + 8 * (B_sq + g**2)) * G**2 / D
    a1_b = -2j * g * (n + 1) * (3 * G**2 + 8 * (B_sq + g**2)) * G / D
    a2_b = -math.sqrt(2) * (n + 1) * (3 * G**2 + 4 * (B_sq + g**2)) * U * G / D
    n_a1 = (n + 1) * (B_sq + 4 * g**2 - 0.5 * G**2) * G**2 / D
    a1dag_a2 = -6j * (n + 1) * g * U * G**2 / D
    n_a2 = 6 * (n + 1) * U**2 * G**2 / D
    return ThreeModeA1A2(n_b, complex(a1_b), complex(a2_b), n_a1, complex(a1dag_a2), n_a2)


def three_mode_a1_a2_rotated(gamma: float, n_bar: float, G_t: float, U: float) -> ThreeModeA1A2:
    """A1/A2 moments obtained from :func:`three_mode_theta_pi` by the basis change.

    ``A1 = (Theta - Pi)/sqrt(2)``, ``A2 = (Theta + Pi)/sqrt(2)``.
    """
    tp = three_mode_theta_pi(gamma, n_bar, G_t, U)
    r = 1 / math.sqrt(2)
    cross = tp.thetadag_pi
    n_a1 = 0.5 * (tp.n_theta + tp.n_pi) - cross.real
    n_a2 = 0.5 * (tp.n_theta + tp.n_pi) + cross.real
    # <A1^dag A2> = (n_theta - n_pi + <Th^dag Pi> - <Pi^dag Th>)/2
    a1dag_a2 = 0.5 * (tp.n_theta - tp.n_pi + cross - cross.conjugate())
    a1_b = r * (tp.theta_b - tp.pi_b)
    a2_b = r * (tp.theta_b + tp.pi_b)
    return ThreeModeA1A2(tp.n_b, a1_b, a2_b, n_a1, a1dag_a2, n_a2)
