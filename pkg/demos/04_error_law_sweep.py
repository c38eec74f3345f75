"""Optimised CZ error against B tau, compared with 3 (B tau)^(-2/3)."""
# %%
import math

import numpy as np

from atomchip.optimize import error_law_sweep, fit_loglog_slope
from atomchip.rydberg import CollectiveQubit, RydbergScalingModel, rydberg_level

level = rydberg_level(RydbergScalingModel.calibrated(), 100)
qubit = CollectiveQubit(500)
b_tau = np.logspace(3, 6, 7)
rows = error_law_sweep(qubit, qubit, level, b_tau / (2 * math.pi * level.lifetime))

# %%
print(" B tau      simulated   formula    T_opt")
for bt, sim, formula, t in rows:
    print(f"{bt:9.3g}  {sim:9.3e}  {formula:9.3e}  {t * 1e9:7.1f} ns")
slope = fit_loglog_slope([r[0] for r in rows], [r[1] for r in rows])
print(f"fitted exponent {slope:.3f} (law: {-2 / 3:.3f})")

# %% With B = 50 MHz the formula predicts well under 1e-3 for the n = 100 level.
print(f"B tau at 50 MHz: {2 * math.pi * 50e6 * level.lifetime:.3g}")
