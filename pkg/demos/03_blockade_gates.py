"""Collective qubits, Rydberg blockade and the three gates."""
# %%
import math

from atomchip.gates import build_hadamard_pulse, differential_light_shift, phase_gate_budget
from atomchip.rydberg import (CollectiveQubit, RydbergScalingModel, blockade_condition,
                              blockade_shift, collective_rabi, rydberg_level)
from atomchip.simulate import simulate_cz_gate, simulate_hadamard
from atomchip.species import load_species

rb = load_species("rb87")
model = RydbergScalingModel.calibrated(shift=90e6, distance=2e-6, n_anchor=40, lifetime=100e-6)
n40, n100 = rydberg_level(model, 40), rydberg_level(model, 100)
print(f"n=100: lifetime {n100.lifetime * 1e3:.2f} ms, "
      f"shift at 10 um {blockade_shift(n100, 10e-6) / 1e6:.0f} MHz")

# %% Phase gate from a detuned beam in the guide.
shift = differential_light_shift(250e-9, 20e9, 2.2e-6, rb)
pg = phase_gate_budget(math.pi / 2, shift, 20e9, rb)
print(f"light shift {shift / 1e6:.3f} MHz -> pi/2 in {pg.duration * 1e6:.2f} us, "
      f"{pg.scattered_photons_per_atom:.2g} photons per atom")

# %% Hadamard: a pi/2 on the collective ground <-> single-Rydberg transition.
qubit = CollectiveQubit(500)
rabi_n = collective_rabi(500e3, qubit.atom_count)
verdict = blockade_condition(blockade_shift(n40, qubit.extent), rabi_n, 1 / (2 * math.pi * n40.lifetime))
print(f"collective Rabi {rabi_n / 1e6:.2f} MHz, blockade ratio {verdict.ratio:.1f} ({verdict.verdict})")
pulse = build_hadamard_pulse(qubit, 500e3)
had = simulate_hadamard(pulse, blockade=2 * math.pi * 90e6, level=n40)
print(f"pi/2 reached at {had.completion_time * 1e9:.2f} ns; "
      f"double excitation {had.double_excitation:.2e}")

# %% CZ between neighbouring qubits: pi - 2pi - pi on the control and target.
for t_gate in (1e-6, 10e-6):
    rep = simulate_cz_gate(qubit, qubit, n100, blockade_hz=50e6, gate_duration=t_gate)
    parts = ", ".join(f"{k} {v:.1e}" for k, v in rep.error_breakdown.items())
    print(f"T = {t_gate * 1e6:4.0f} us: error {rep.gate_error:.2e} ({parts})")
