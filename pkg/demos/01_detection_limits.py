"""Shot-noise limits on counting atoms in the trench.

Absorption of the guided probe, the effect of mirrors on the guides, and
fluorescence collected by a lens above the chip.
"""
# %%
import math

from atomchip import detection as det
from atomchip.species import load_species

rb = load_species("rb87")
sigma = det.scattering_cross_section(rb.d2)
area = det.effective_area(2.2e-6)
print(f"cross-section {sigma * 1e12:.3f} um^2, mode area {area * 1e12:.2f} um^2")

# %% Each atom may scatter ~100 photons before it is heated out; 20% reach the detector.
setup = det.ProbeSetup(area, sigma, n_scattered_per_atom=100, detection_efficiency=0.2)
plain = det.atom_number_uncertainty(setup)
print(f"single-atom SNR {plain.snr_single_atom:.2f} "
      f"({plain.incident_photons:.0f} probe photons)")

for r in (0.5, 0.9, 0.99):
    print(f"  mirrors R={r}: SNR {det.cavity_enhancement(setup, r).snr_single_atom:.2f}")

# %% Could the facets themselves act as a plane cavity? Only if the gap were << z_R.
cav = det.plane_cavity_effective_reflectivity(2.2e-6, rb.d2.wavelength, 16e-6)
print(f"z_R = {cav.rayleigh_length * 1e6:.1f} um; {cav.advisory}")

# %% Monte-Carlo check of the closed form.
mc = det.simulate_absorption_readout(setup, atoms=1.0, trials=400_000, rng=1)
print(f"sigma_N closed form {plain.sigma_n_atoms:.4f}, Monte-Carlo {mc:.4f}")

# %% Fluorescence: 6000 photons before depumping, 1% collection, 50% camera QE.
lens = det.CollectionGeometry(35e-3, 100e-3, camera_qe=0.5)
print(f"lens collects {lens.collection_fraction:.3%} of isotropic emission")
print(f"counts at 1%: {det.fluorescence_readout(lens, 6000, 0.01):.0f}, "
      f"at the exact fraction: {det.fluorescence_readout(lens, 6000):.1f}")
gamma = rb.d2.gamma_angular
events, t = det.max_scattering_before_depump(1 / 6000, gamma=gamma, saturation=1.0)
print(f"{events:.0f} events take {t * 1e3:.2f} ms at s = 1; "
      f"max rate Gamma/2 = {gamma / 2 / 1e6:.1f}e6 /s")
print(f"shot-noise SNR on 30 counts: {30 / math.sqrt(30):.1f}")
