"""
Excitons of an atomic lattice and their cavity couplings
=========================================================

A lattice of N two-level atoms inside a single-mode cavity supports N
collective exciton modes. Only the odd ones see the cavity field, and the
coupling falls off quickly with the mode index.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from polariton_optomech.lattice import (
    LatticeParams,
    dipole_dipole_J,
    exciton_cavity_coupling,
    exciton_frequency,
    to_dimensionless,
)

###############################################################################
# A rubidium lattice with a thousand sites, the cavity tuned to the k = 1 mode.

params = LatticeParams.rb85_example()
print(f"J_alpha = {dipole_dipole_J(params):.4e} rad/s")
for k in (1, 3, 5):
    print(f"f_{k} = {exciton_cavity_coupling(params, k):.4e}")

###############################################################################
# The coupling decays roughly as 1/k.

ks = np.arange(1, 40, 2)
fk = np.array([exciton_cavity_coupling(params, int(k)) for k in ks])
plt.loglog(ks, fk, "o")
plt.loglog(ks, fk[0] / ks, "--", label="f_1 / k")
plt.xlabel("exciton index k")
plt.ylabel("f_k [rad/s]")
plt.legend()
plt.savefig("lattice_couplings.png", dpi=120)

###############################################################################
# At the magic angle the dipole-dipole shift vanishes and the exciton band
# collapses onto the atomic line.

magic = LatticeParams(**{**params.__dict__, "angle_alpha": math.acos(1 / math.sqrt(3))})
spread = exciton_frequency(magic, 1) - exciton_frequency(magic, params.n_sites)
print(f"band width at the magic angle: {spread:.3e} rad/s")

###############################################################################
# Downstream code works in units of the optical damping rate.

delta, f1, Omega = to_dimensionless(params, gamma=1e7)
print(f"delta = {delta:.3g}, f1 = {f1:.3f}, Omega = {Omega:.3f} (units of gamma)")
