"""From the magnetic trap to atoms held between two waveguide facets."""
# %%
import numpy as np

from atomchip.species import load_species
from atomchip.traps import DipoleTrapSpec, MagneticTrapSpec, dipole_trap, loading_estimate, \
    thermal_cloud

rb = load_species("rb87")
cloud = thermal_cloud(MagneticTrapSpec.from_hz(20, 1e3), 1e5, 2e-6, rb)
print(f"cloud: 1/e^2 half-length {cloud.half_length_1e2 * 1e6:.0f} um, "
      f"radial sigma {cloud.sigma_radial * 1e6:.2f} um, "
      f"{cloud.peak_linear_density * 1e-6:.0f} atoms/um on axis")

# %% 80 uW per guide at 830 nm, with and without interference between the beams.
for contrast in (0.0, 0.5, 1.0):
    t = dipole_trap(DipoleTrapSpec(80e-6, 830e-9, 2.2e-6, contrast), rb)
    print(f"contrast {contrast}: depth {t.depth_kelvin * 1e6:5.1f} uK, "
          f"axial {t.axial_freq_hz / 1e3:6.2f} kHz, radial {t.radial_freq_hz / 1e3:.2f} kHz, "
          f"scattering {t.photon_scattering_rate:.2f} /s")

# %% How much does the polarisability model matter?
for model in ("two_level_RWA", "two_level_full", "d1_d2_full"):
    t = dipole_trap(DipoleTrapSpec(80e-6, 830e-9, 2.2e-6, polarizability_model=model), rb)
    print(f"{model:15s} depth {t.depth_kelvin * 1e6:.2f} uK")

# %% Loading, and how it responds to power.
for p in np.geomspace(20e-6, 320e-6, 5):
    t = dipole_trap(DipoleTrapSpec(p, 830e-9, 2.2e-6), rb)
    est = loading_estimate(cloud, t)
    print(f"P = {p * 1e6:5.0f} uW: {est.atoms:6.0f} atoms, capture length "
          f"{est.capture_length * 1e6:.1f} um")

# %% Light blue of the D lines repels the atoms.
try:
    dipole_trap(DipoleTrapSpec(80e-6, 760e-9, 2.2e-6), rb)
except ValueError as exc:
    print(exc)
