"""
Mirror-polariton entanglement at the parametric resonance
=========================================================

With the mirror resonant with the lower polariton the linearized coupling is
a pure parametric (pair-creation) interaction. Below the instability at
G = 2 gamma the stationary state is Gaussian, and its log-negativity and
Cauchy-Schwarz parameter can be mapped over the thermal occupation of the
mirror bath.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from polariton_optomech import BathSpec, build_two_mode, degrees, pair_log_negativity, quad_to_complex_moments, solve_lyapunov
from polariton_optomech.sweeps import figure_sweep, grid_values

###############################################################################
# A single point: one thermal quantum less than the separability limit.

cov = solve_lyapunov(build_two_mode(1.5, gamma=1.0, bath=BathSpec(0.5)))
ms = quad_to_complex_moments(cov, ("psi", "b"))
print(f"E_N = {pair_log_negativity(cov, 'psi', 'b'):.4f}, chi = {degrees(ms).chi:.4f}")

###############################################################################
# Log-negativity over the (n_bar, G) plane. The boundary sits at n_bar = 1 for
# every coupling below threshold; the coupling only sets how much
# entanglement there is.

sweep = figure_sweep("fig2", 40)
EN = grid_values(sweep.run(), 40, 40)
fig, ax = plt.subplots(1, 2, figsize=(9, 3.5))
im = ax[0].pcolormesh(sweep.y.values, sweep.x.values, EN, shading="auto")
ax[0].set_xlabel("G_psi / gamma")
ax[0].set_ylabel("n_bar")
ax[0].set_title("E_N, thermal bath")
fig.colorbar(im, ax=ax[0])

###############################################################################
# With a maximally squeezed bath the nonclassical region (chi < 1) shrinks.

sq = figure_sweep("fig3", 40)
chi = grid_values(sq.run(), 40, 40)
im = ax[1].pcolormesh(sq.y.values, sq.x.values, np.minimum(chi, 2), shading="auto")
ax[1].contour(sq.y.values, sq.x.values, chi, levels=[1.0], colors="w")
ax[1].set_xlabel("G_psi / gamma")
ax[1].set_title("chi, squeezed bath")
fig.colorbar(im, ax=ax[1])
fig.tight_layout()
fig.savefig("two_mode_maps.png", dpi=120)
print(f"chi < 1 cells: squeezed {int((chi < 1).sum())}, thermal {int((EN > 0).sum())}")
