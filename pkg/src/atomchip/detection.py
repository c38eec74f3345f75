"""Shot-noise limits on measuring atom number with a guided probe beam.

Covers single-pass absorption, the gain from reflecting the probe back and
forth across the trench, the diffraction limit of a plane-mirror cavity,
and camera fluorescence readout.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .units import CONSTANTS

WEAK_ABSORPTION_LIMIT = 0.1


class WeakAbsorptionWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ProbeSetup:
    """
    Parameters
    ----------
    beam_area : float
        Effective beam area A in m^2.
    cross_section : float
        Atomic scattering cross-section in m^2.
    n_scattered_per_atom : float
        Mean number of photons scattered by each atom during the probe.
    detection_efficiency : float
        Transmission times detector quantum efficiency, in (0, 1].
    """

    beam_area: float
    cross_section: float
    n_scattered_per_atom: float
    detection_efficiency: float = 1.0

    def __post_init__(self):
        for name in ("beam_area", "cross_section", "n_scattered_per_atom"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.detection_efficiency <= 1:
            raise ValueError("detection_efficiency must lie in (0, 1]")

    @property
    def incident_photons(self):
        return self.n_scattered_per_atom * self.beam_area / self.cross_section


@dataclass(frozen=True)
class ReadoutBudget:
    sigma_n_atoms: float
    incident_photons: float
    duration: float | None = None
    warnings: tuple[str, ...] = ()

    @property
    def snr_single_atom(self):
        return 1.0 / self.sigma_n_atoms


@dataclass(frozen=True)
class CollectionGeometry:
    lens_diameter: float
    lens_distance: float
    camera_qe: float = 1.0

    def __post_init__(self):
        if self.lens_diameter < 0 or not self.lens_distance > 0:
            raise ValueError("lens diameter must be >= 0 and distance > 0")
        if not self.lens_diameter < 2 * self.lens_distance:
            raise ValueError("lens half-angle must stay below 90 degrees")
        if not 0 < self.camera_qe <= 1:
            raise ValueError("camera_qe must lie in (0, 1]")

    @property
    def collection_fraction(self):
        """Fraction of isotropic emission hitting the lens disc, (1 - cos theta)/2."""
        a = self.lens_diameter / 2
        d = self.lens_distance
        return 0.5 * (1.0 - d / math.hypot(d, a))


@dataclass(frozen=True)
class PlaneCavity:
    reflectivity: float
    rayleigh_length: float
    ratio: float
    advisory: str | None = None


def scattering_cross_section(transition, intensity_convention=None):
    """sigma = hbar omega Gamma / (2 I_sat).

    With the cycling-transition I_sat this is the resonant two-level value
    3 lambda^2 / 2 pi.
    """
    isat = transition.i_sat
    if intensity_convention is not None:
        isat = transition.saturation_intensity(intensity_convention)
    return CONSTANTS.hbar * transition.omega * transition.gamma_angular / (2 * isat)


def effective_area(mode_field_radius):
    """Intensity-weighted area of a Gaussian beam, pi w^2 / 2."""
    if not mode_field_radius > 0:
        raise ValueError("mode_field_radius must be positive")
    return math.pi * mode_field_radius**2 / 2


def atom_number_uncertainty(setup, expected_atoms=None):
    """Shot-noise-limited atom-number uncertainty of an absorption measurement.

    sigma_N = sqrt(A / (sigma n_sc q)), counting Poisson noise on the
    detected photons. If ``expected_atoms`` is given and the optical depth
    sigma N / A exceeds 0.1 a :class:`WeakAbsorptionWarning` is issued,
    since the formula is a small-absorption expansion.
    """
    notes = ()
    if expected_atoms is not None:
        od = setup.cross_section * expected_atoms / setup.beam_area
        if od > WEAK_ABSORPTION_LIMIT:
            msg = f"weak-absorption assumption violated (sigma N / A = {od:.3g})"
            warnings.warn(msg, WeakAbsorptionWarning, stacklevel=2)
            notes = (msg,)
    sigma_n = math.sqrt(setup.beam_area / (
        setup.cross_section * setup.n_scattered_per_atom * setup.detection_efficiency))
    return ReadoutBudget(sigma_n_atoms=sigma_n, incident_photons=setup.incident_photons,
                         warnings=notes)


def cavity_enhancement(setup, mirror_reflectivity, expected_atoms=None):
    """Readout with the probe recirculated between mirrors of reflectivity R.

    The cross-section is effectively enhanced by 1/(1-R) at a fixed number
    of scattered photons, so sigma_N shrinks by sqrt(1-R).
    """
    if not 0 <= mirror_reflectivity < 1:
        raise ValueError("mirror reflectivity must satisfy 0 <= R < 1")
    plain = atom_number_uncertainty(setup, expected_atoms)
    return ReadoutBudget(
        sigma_n_atoms=plain.sigma_n_atoms * math.sqrt(1 - mirror_reflectivity),
        incident_photons=plain.incident_photons * (1 - mirror_reflectivity),
        warnings=plain.warnings,
    )


def rayleigh_length(mode_field_radius, wavelength):
    return math.pi * mode_field_radius**2 / wavelength


def plane_cavity_effective_reflectivity(mode_field_radius, wavelength, trench_width):
    """Diffraction-limited reflectivity of a plane-mirror cavity across the trench.

    Light leaving one facet spreads over a Rayleigh length z_R, so only a
    fraction ~ z_R / L makes it back into the opposite guide. The result
    is clipped to 1; an advisory is attached unless the trench is much
    narrower than z_R, because a plane cavity is unstable and the
    clipped value should not be read as a real gain.
    """
    for v in (mode_field_radius, wavelength, trench_width):
        if not v > 0:
            raise ValueError("all arguments must be positive")
    zr = rayleigh_length(mode_field_radius, wavelength)
    ratio = zr / trench_width
    advisory = None
    if ratio < 10:
        advisory = ("plane cavity unstable / no significant improvement: "
                    f"trench is only {1 / ratio:.2g} Rayleigh lengths wide")
    return PlaneCavity(reflectivity=min(1.0, ratio), rayleigh_length=zr, ratio=ratio,
                       advisory=advisory)


def fluorescence_readout(geometry, scattering_events, collection_fraction=None):
    """Expected camera counts from ``scattering_events`` spontaneous emissions."""
    if not scattering_events > 0:
        raise ValueError("scattering_events must be positive")
    frac = geometry.collection_fraction if collection_fraction is None else collection_fraction
    return scattering_events * frac * geometry.camera_qe


def scattering_rate(gamma, saturation, detuning=0.0):
    """Steady-state two-level scattering rate (Gamma/2) s / (1 + s + (2 delta/Gamma)^2).

    ``gamma`` and ``detuning`` in rad/s; ``saturation`` is I/I_sat.
    Returns photons per second.
    """
    return 0.5 * gamma * saturation / (1 + saturation + (2 * detuning / gamma) ** 2)


def saturation_for_rate(rate, gamma, detuning=0.0):
    """Saturation parameter giving ``rate``; inf if the rate is above the ceiling."""
    x2 = (2 * detuning / gamma) ** 2
    ceiling = 0.5 * gamma
    if rate >= ceiling:
        return math.inf
    return rate * (1 + x2) / (ceiling - rate)


def max_scattering_before_depump(depump_probability, *, gamma, saturation, detuning=0.0):
    """Number of fluorescence photons and the time taken before a depumping event.

    Depumping is modelled as a fixed branching probability per scattering
    event, so the mean number of events is 1/p.
    """
    if not 0 < depump_probability <= 1:
        raise ValueError("depump_probability must lie in (0, 1]")
    events = 1.0 / depump_probability
    rate = scattering_rate(gamma, saturation, detuning)
    return events, events / rate


# -- Monte-Carlo shot-noise checks -----------------------------------------

def simulate_absorption_readout(setup, atoms, trials=1_000_000, rng=None):
    """Monte-Carlo spread of the linearised absorption estimator of N.

    Detected photons are Poisson with mean q N_gamma (1 - sigma N / A);
    the estimate is N = (A/sigma)(1 - N_det / (q N_gamma)). Returns the
    sample standard deviation of the estimates.
    """
    rng = np.random.default_rng(rng)
    n_in = setup.incident_photons
    q = setup.detection_efficiency
    od = setup.cross_section * atoms / setup.beam_area
    detected = rng.poisson(q * n_in * (1 - od), size=trials)
    estimate = setup.beam_area / setup.cross_section * (1 - detected / (q * n_in))
    return float(np.std(estimate, ddof=1))


def simulate_phase_readout(setup, atoms, trials=1_000_000, rng=None,
                           detuning_linewidths=50.0, reference_ratio=1e4):
    """Monte-Carlo spread of a balanced interferometric (phase) estimator of N.

    The probe, detuned by ``detuning_linewidths`` half-linewidths, passes the
    atoms and is mixed with a strong reference beam (``reference_ratio``
    times the probe photon number) on two detectors. Probe power is set
    so that each atom scatters ``setup.n_scattered_per_atom`` photons. The
    phase is read from the normalised count difference and converted to N.
    In the far-detuned, strong-reference limit the spread equals the
    absorption result.
    """
    rng = np.random.default_rng(rng)
    x = detuning_linewidths
    q = setup.detection_efficiency
    lorentz = 1 + x * x
    n_probe = setup.n_scattered_per_atom * setup.beam_area * lorentz / setup.cross_section
    n_ref = reference_ratio * n_probe
    phase_per_atom = setup.cross_section / (2 * setup.beam_area) * x / lorentz
    transmission = math.exp(-setup.cross_section * atoms / (setup.beam_area * lorentz))
    phi = phase_per_atom * atoms
    beat = 2 * math.sqrt(n_ref * n_probe * transmission) * math.sin(phi)
    mean = n_ref + n_probe * transmission
    plus = rng.poisson(q * (mean + beat) / 2, size=trials)
    minus = rng.poisson(q * (mean - beat) / 2, size=trials)
    phase = (plus - minus) / (2 * q * math.sqrt(n_ref * n_probe))
    return float(np.std(phase / phase_per_atom, ddof=1))
