"""Quantum correlations of a mirror coupled to lattice exciton-polaritons.

The package is organized bottom-up:

``lattice``        exciton spectrum and couplings (SI units)
``working_point``  polariton rotation, classical steady state, effective couplings
``gaussian``       drift/diffusion builders, Lyapunov solve, log-negativity
``coherence``      coherence degrees and the Cauchy-Schwarz parameter
``oracles``        closed-form moments for cross-checks
``stochastic``     Monte-Carlo integration of the linear Langevin equations
``sweeps``         parameter grids used by the command line interface
"""

from .coherence import CoherenceReport, cs_parameter, degrees
from .gaussian import (
    BathSpec,
    CovarianceMatrix,
    LinearGaussianModel,
    MomentSet,
    build_three_mode,
    build_two_colour,
    build_two_mode,
    log_negativity,
    pair_log_negativity,
    quad_to_complex_moments,
    solve_lyapunov,
    stability,
    steady_state,
)
from .lattice import LatticeParams, exciton_cavity_coupling, exciton_frequency, to_dimensionless
from .working_point import DriveParams, WorkingPoint, second_rotation, solve_steady_state

__version__ = "0.1.0"
