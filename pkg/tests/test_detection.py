import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
from scipy.integrate import dblquad

from atomchip import detection as det


@pytest.fixture(scope="module")
def probe(rb87):
    return det.ProbeSetup(det.effective_area(2.2e-6), det.scattering_cross_section(rb87.d2), 100, 0.2)


def test_cross_section_equals_three_lambda_squared(rb87):
    lam = rb87.d2.wavelength
    assert det.scattering_cross_section(rb87.d2) == pytest.approx(3 * lam**2 / (2 * math.pi), rel=1e-3)
    assert det.scattering_cross_section(rb87.d2) == pytest.approx(2.91e-13, rel=2e-3)


def test_cross_section_inverse_in_isat(rb87):
    iso = det.scattering_cross_section(rb87.d2, "isotropic")
    cyc = det.scattering_cross_section(rb87.d2)
    assert cyc / iso == pytest.approx(rb87.d2.saturation_intensity("isotropic") / rb87.d2.i_sat)


def test_effective_area():
    assert det.effective_area(2.2e-6) == pytest.approx(7.60e-12, rel=1e-3)


def test_single_atom_snr(probe):
    snr = det.atom_number_uncertainty(probe).snr_single_atom
    assert snr == pytest.approx(0.874, rel=2e-3)


def test_uncertainty_identity_and_scaling():
    unit = det.ProbeSetup(1.0, 1.0, 1.0, 1.0)
    assert det.atom_number_uncertainty(unit).sigma_n_atoms == pytest.approx(1.0)
    a = det.ProbeSetup(7.6e-12, 2.9e-13, 100, 1.0)
    b = det.ProbeSetup(7.6e-12, 2.9e-13, 400, 1.0)
    ratio = det.atom_number_uncertainty(a).sigma_n_atoms / det.atom_number_uncertainty(b).sigma_n_atoms
    assert ratio == pytest.approx(2.0)


def test_strong_absorption_warns(probe):
    with pytest.warns(det.WeakAbsorptionWarning):
        det.atom_number_uncertainty(probe, expected_atoms=10)


@pytest.mark.parametrize("r,factor", [(0.0, 1.0), (0.9, math.sqrt(0.1)), (0.99, 0.1)])
def test_cavity_enhancement(probe, r, factor):
    plain = det.atom_number_uncertainty(probe).sigma_n_atoms
    assert det.cavity_enhancement(probe, r).sigma_n_atoms == pytest.approx(plain * factor, rel=1e-12)


def test_rayleigh_and_plane_cavity(rb87):
    assert det.rayleigh_length(2.2e-6, 780e-9) == pytest.approx(19.5e-6, rel=1e-2)
    cav = det.plane_cavity_effective_reflectivity(2.2e-6, 780e-9, 16e-6)
    assert cav.ratio == pytest.approx(1.22, rel=1e-2)
    assert cav.reflectivity == 1.0
    assert "no significant improvement" in cav.advisory
    far = det.plane_cavity_effective_reflectivity(2.2e-6, 780e-9, 1.0)
    assert far.reflectivity < 1e-4


def test_fluorescence_counts():
    geom = det.CollectionGeometry(35e-3, 100e-3, 0.5)
    assert det.fluorescence_readout(geom, 6000, 0.01) == pytest.approx(30.0, rel=1e-12)
    assert det.fluorescence_readout(det.CollectionGeometry(0.0, 0.1, 0.5), 6000) == 0.0


def test_collection_fraction_matches_solid_angle_integral():
    d, a = 100e-3, 17.5e-3
    geom = det.CollectionGeometry(2 * a, d)
    # flux of an isotropic point source through the lens disc
    flux, _ = dblquad(lambda r, phi: d * r / (r * r + d * d) ** 1.5, 0, 2 * math.pi, 0, a)
    assert geom.collection_fraction == pytest.approx(flux / (4 * math.pi), rel=1e-8)
    assert 0.006 <= geom.collection_fraction <= 0.011


def test_scattering_rate_limits():
    g = 2 * math.pi * 6e6
    assert det.scattering_rate(g, 1e9) == pytest.approx(g / 2, rel=1e-6)
    s = det.saturation_for_rate(0.25 * g, g)
    assert det.scattering_rate(g, s) == pytest.approx(0.25 * g)
    events, t = det.max_scattering_before_depump(1.0, gamma=g, saturation=1.0)
    assert events == 1.0 and t == pytest.approx(1 / (g / 4))


@pytest.mark.parametrize("seed", range(10))
def test_monte_carlo_matches_closed_form(seed):
    """Weak-absorption regime (OD <= 1%), where the closed form is derived."""
    rng = np.random.default_rng(1000 + seed)
    setup = det.ProbeSetup(beam_area=rng.uniform(3e-12, 3e-11), cross_section=rng.uniform(1e-13, 3e-13),
                           n_scattered_per_atom=rng.uniform(10, 1000),
                           detection_efficiency=rng.uniform(0.1, 1.0))
    atoms = rng.uniform(1e-3, 1e-2) * setup.beam_area / setup.cross_section
    closed = det.atom_number_uncertainty(setup).sigma_n_atoms
    mc = det.simulate_absorption_readout(setup, atoms, trials=200_000, rng=seed)
    assert mc == pytest.approx(closed, rel=0.03)


def test_phase_readout_equals_absorption_limit(probe):
    x = 50.0
    closed = det.atom_number_uncertainty(probe).sigma_n_atoms * math.sqrt(1 + x * x) / x
    mc = det.simulate_phase_readout(probe, 1.0, trials=200_000, rng=3, detuning_linewidths=x)
    assert mc == pytest.approx(closed, rel=0.03)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 0.999))
def test_cavity_monotone_in_reflectivity(r):
    s = det.ProbeSetup(7.6e-12, 2.9e-13, 100, 0.2)
    assert det.cavity_enhancement(s, r).sigma_n_atoms < det.atom_number_uncertainty(s).sigma_n_atoms
