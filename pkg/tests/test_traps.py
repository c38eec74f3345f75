import math

import numpy as np
import pytest

from atomchip.traps import (DipoleTrapSpec, MagneticTrapSpec, NotATrapError, dipole_trap,
                            loading_estimate, thermal_cloud)
from atomchip.units import CONSTANTS


def spec(**kw):
    base = dict(beam_power_each=80e-6, wavelength=830e-9, mode_field_radius=2.2e-6)
    base.update(kw)
    return DipoleTrapSpec(**base)


@pytest.fixture(scope="module")
def cloud(rb87):
    return thermal_cloud(MagneticTrapSpec.from_hz(20, 1e3), 1e5, 2e-6, rb87)


def test_thermal_cloud_defaults(cloud):
    assert cloud.half_length_1e2 == pytest.approx(220e-6, rel=0.05)
    assert cloud.full_length_1e2 == pytest.approx(2 * cloud.half_length_1e2)
    assert cloud.sigma_radial == pytest.approx(2.2e-6, rel=0.05)
    assert cloud.peak_linear_density == pytest.approx(360e6, rel=0.05)


def test_thermal_cloud_scalings(rb87, cloud):
    hot = thermal_cloud(MagneticTrapSpec.from_hz(20, 1e3), 1e5, 8e-6, rb87)
    assert hot.sigma_axial / cloud.sigma_axial == pytest.approx(2.0)
    assert hot.sigma_radial / cloud.sigma_radial == pytest.approx(2.0)
    sph = thermal_cloud(MagneticTrapSpec.from_hz(100, 100), 1e5, 2e-6, rb87)
    assert sph.sigma_axial == pytest.approx(sph.sigma_radial)


@pytest.mark.parametrize("contrast,published", [(0.0, (300, 6.6e3)), (1.0, (120e3, 9e3))])
def test_trap_frequencies_within_band(rb87, contrast, published):
    t = dipole_trap(spec(interference_contrast=contrast), rb87)
    assert t.axial_freq_hz == pytest.approx(published[0], rel=0.35)
    assert t.radial_freq_hz == pytest.approx(published[1], rel=0.35)
    assert t.photon_scattering_rate <= 1.0


@pytest.mark.parametrize("contrast", [0.0, 0.5, 1.0])
def test_analytic_curvature_matches_finite_differences(rb87, contrast):
    t = dipole_trap(spec(interference_contrast=contrast), rb87)
    m = rb87.mass
    hr = 2.2e-6 / 200
    u0 = float(t.potential(0.0, 0.0))
    d2r = (float(t.potential(hr, 0.0)) - 2 * u0 + float(t.potential(-hr, 0.0))) / hr**2
    hz = 830e-9 / 400 if contrast > 0 else t.spec.rayleigh_length / 200
    d2z = (float(t.potential(0.0, hz)) - 2 * u0 + float(t.potential(0.0, -hz))) / hz**2
    assert math.sqrt(d2r / m) == pytest.approx(t.radial_omega, rel=0.01)
    assert math.sqrt(d2z / m) == pytest.approx(t.axial_omega, rel=0.01)


def test_lattice_axial_exceeds_divergence_axial(rb87):
    assert dipole_trap(spec(interference_contrast=1.0), rb87).axial_omega > \
        dipole_trap(spec(interference_contrast=0.0), rb87).axial_omega


def test_power_scalings(rb87):
    powers = np.geomspace(10e-6, 1e-3, 5)
    traps = [dipole_trap(spec(beam_power_each=p), rb87) for p in powers]
    lp = np.log(powers)
    fit = lambda ys: np.polyfit(lp, np.log(ys), 1)[0]  # noqa: E731
    assert fit([t.depth for t in traps]) == pytest.approx(1.0, abs=1e-9)
    assert fit([t.radial_omega for t in traps]) == pytest.approx(0.5, abs=1e-9)
    assert fit([t.axial_omega for t in traps]) == pytest.approx(0.5, abs=1e-9)
    assert fit([t.photon_scattering_rate for t in traps]) == pytest.approx(1.0, abs=1e-9)


def test_model_ordering(rb87):
    depth = {m: dipole_trap(spec(polarizability_model=m), rb87).depth
             for m in ("two_level_RWA", "two_level_full", "d1_d2_full")}
    assert depth["d1_d2_full"] > depth["two_level_full"] > depth["two_level_RWA"] > 0


def test_scattering_to_depth_ratio_per_line(rb87):
    """Independent evaluation: each line contributes U_i Gamma_i / (hbar Delta_i)."""
    t = dipole_trap(spec(), rb87)
    c, hbar = CONSTANTS.c, CONSTANTS.hbar
    w = 2 * math.pi * c / 830e-9
    i_peak = float(t.intensity(0.0, 0.0))
    depth = rate = 0.0
    for line in rb87.transitions:
        w0 = line.omega
        g = line.gamma_angular
        u = 3 * math.pi * c**2 / (2 * w0**3) * line.relative_strength * g \
            * (1 / (w0 - w) + 1 / (w0 + w)) * i_peak
        depth += u
        rate += u * g / (hbar * (w0 - w))
    assert t.depth == pytest.approx(depth, rel=1e-6)
    assert t.photon_scattering_rate / t.depth == pytest.approx(rate / depth, rel=0.05)


def test_blue_detuned_is_not_a_trap(rb87):
    with pytest.raises(NotATrapError, match="not a trap"):
        dipole_trap(spec(wavelength=760e-9), rb87)


def test_spec_validation():
    with pytest.raises(ValueError):
        spec(interference_contrast=1.5)
    with pytest.raises(ValueError):
        spec(beam_power_each=0.0)
    with pytest.raises(ValueError):
        spec(polarizability_model="magic")


def test_loading_defaults(rb87, cloud):
    est = loading_estimate(cloud, dipole_trap(spec(), rb87))
    assert 750 <= est.atoms <= 3000
    assert est.capture_length <= 16e-6


def test_loading_linear_in_density(rb87, cloud):
    dense = thermal_cloud(MagneticTrapSpec.from_hz(20, 1e3), 2e5, 2e-6, rb87)
    trap = dipole_trap(spec(), rb87)
    assert loading_estimate(dense, trap).atoms == pytest.approx(2 * loading_estimate(cloud, trap).atoms)


def test_loading_vanishes_for_shallow_trap(rb87, cloud):
    shallow = dipole_trap(spec(beam_power_each=1e-12), rb87)
    assert loading_estimate(cloud, shallow).atoms == 0.0
