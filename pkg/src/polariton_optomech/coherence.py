"""Coherence degrees, Gaussian second-order correlations and the Cauchy-Schwarz parameter."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .gaussian import MomentSet


class UndefinedDegreeError(ValueError):
    """A normalized degree was requested for a mode with zero occupation."""


@dataclass(frozen=True)
class CoherenceReport:
    gamma1: float
    eta_aa: float
    eta_bb: float
    eta_ab: float
    g2_a: float
    g2_b: float
    g2_ab: float
    chi: float

    @property
    def cs_violated(self) -> bool:
        return self.chi < 1.0


def chi_from_degrees(eta_aa: float, eta_bb: float, gamma1: float, eta_ab: float) -> float:
    """Cauchy-Schwarz parameter ``g2_A g2_B / g2_AB**2`` for Gaussian modes."""
    g2_ab = 1.0 + gamma1**2 + eta_ab**2
    return (2.0 + eta_aa**2) * (2.0 + eta_bb**2) / g2_ab**2


def degrees(ms: MomentSet) -> CoherenceReport:
    """All normalized degrees of a mode pair.

    Raises
    ------
    UndefinedDegreeError
        If either occupation is not strictly positive.
    """
    if not (ms.n_a > 0 and ms.n_b > 0):
        raise UndefinedDegreeError(
            f"degrees undefined at zero occupation (n_a={ms.n_a:.3e}, n_b={ms.n_b:.3e})"
        )
    norm = math.sqrt(ms.n_a * ms.n_b)
    gamma1 = abs(ms.adag_b) / norm
    eta_ab = abs(ms.ab) / norm
    eta_aa = abs(ms.aa) / ms.n_a
    eta_bb = abs(ms.bb) / ms.n_b
    g2_a = 2.0 + eta_aa**2
    g2_b = 2.0 + eta_bb**2
    g2_ab = 1.0 + gamma1**2 + eta_ab**2
    return CoherenceReport(gamma1, eta_aa, eta_bb, eta_ab, g2_a, g2_b, g2_ab, g2_a * g2_b / g2_ab**2)


def cs_parameter(ms: MomentSet) -> float:
    return degrees(ms).chi
