"""Magnetic-trap thermal clouds and waveguide dipole traps.

The dipole trap is formed in the trench by the two counter-propagating
beams leaving opposite waveguide facets. Each beam has its waist at its
own facet and diverges across the trench; the atoms sit half-way. The
degree of interference between the two beams (0 = independent, 1 = full
standing wave) trades axial against radial confinement.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import brentq

from .units import CONSTANTS, TWO_PI, angular_to_hz, hz_to_angular

POLARIZABILITY_MODELS = ("two_level_RWA", "two_level_full", "d1_d2_full")


class NotATrapError(ValueError):
    """Trap light is blue of an included transition, or gives no confinement."""


@dataclass(frozen=True)
class MagneticTrapSpec:
    axial_omega: float
    radial_omega: float

    def __post_init__(self):
        if not (self.axial_omega > 0 and self.radial_omega > 0):
            raise ValueError("trap frequencies must be positive")

    @classmethod
    def from_hz(cls, axial, radial):
        return cls(hz_to_angular(axial), hz_to_angular(radial))


@dataclass(frozen=True)
class ThermalCloud:
    atom_count: float
    temperature: float
    sigma_axial: float
    sigma_radial: float
    peak_linear_density: float

    @property
    def half_length_1e2(self):
        """Distance from the centre to the 1/e^2 point of the axial density (2 sigma)."""
        return 2 * self.sigma_axial

    @property
    def full_length_1e2(self):
        return 4 * self.sigma_axial


def thermal_cloud(trap, atoms, temperature, species):
    """Gaussian density of a thermal cloud in a harmonic magnetic trap."""
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    v = math.sqrt(CONSTANTS.kB * temperature / species.mass)
    s_ax = v / trap.axial_omega
    s_rad = v / trap.radial_omega
    return ThermalCloud(
        atom_count=atoms,
        temperature=temperature,
        sigma_axial=s_ax,
        sigma_radial=s_rad,
        peak_linear_density=atoms / (math.sqrt(2 * math.pi) * s_ax),
    )


@dataclass(frozen=True)
class DipoleTrapSpec:
    """
    Parameters
    ----------
    beam_power_each : float
        Power in each of the two beams, W.
    wavelength : float
        Trap light wavelength, m.
    mode_field_radius : float
        1/e field (1/e^2 intensity) radius w0 at each beam's waist, m.
    interference_contrast : float
        Scalar in [0, 1] multiplying the standing-wave modulation.
    polarizability_model : str
        One of ``two_level_RWA``, ``two_level_full`` (D2 line only) or
        ``d1_d2_full`` (all lines in the species record, with
        counter-rotating terms).
    facet_separation : float
        Distance between the two beam waists (the trench width). Zero
        puts both waists at the trap centre.
    """

    beam_power_each: float
    wavelength: float
    mode_field_radius: float
    interference_contrast: float = 0.0
    polarizability_model: str = "d1_d2_full"
    facet_separation: float = 16e-6

    def __post_init__(self):
        if not self.beam_power_each > 0:
            raise ValueError("beam power must be positive")
        if not (self.wavelength > 0 and self.mode_field_radius > 0):
            raise ValueError("wavelength and mode_field_radius must be positive")
        if not 0 <= self.interference_contrast <= 1:
            raise ValueError("interference_contrast must lie in [0, 1]")
        if self.polarizability_model not in POLARIZABILITY_MODELS:
            raise ValueError(f"unknown polarizability model {self.polarizability_model!r}")
        if self.facet_separation < 0:
            raise ValueError("facet_separation must be >= 0")

    @property
    def peak_intensity(self):
        """Peak intensity of one beam at its waist, 2P / (pi w0^2)."""
        return 2 * self.beam_power_each / (math.pi * self.mode_field_radius**2)

    @property
    def rayleigh_length(self):
        return math.pi * self.mode_field_radius**2 / self.wavelength


@dataclass(frozen=True)
class LineShift:
    """Light-shift and scattering coefficients of one line, per unit intensity."""

    label: str
    shift_per_intensity: float      # J per W/m^2, positive = attractive
    detuning: float                 # omega_line - omega_light, rad/s
    gamma: float

    @property
    def scattering_per_intensity(self):
        return self.shift_per_intensity * self.gamma / (CONSTANTS.hbar * self.detuning)


def line_shifts(species, wavelength, model="d1_d2_full"):
    """Per-line ground-state light-shift coefficients for trap light at ``wavelength``.

    Raises :class:`NotATrapError` if the light is blue of an included line.
    """
    if model not in POLARIZABILITY_MODELS:
        raise ValueError(f"unknown polarizability model {model!r}")
    omega = TWO_PI * CONSTANTS.c / wavelength
    if model == "d1_d2_full":
        lines = [(t, t.relative_strength) for t in species.transitions]
    else:
        lines = [(species.d2, 1.0)]
    out = []
    for t, strength in lines:
        w0 = t.omega
        delta = w0 - omega
        if delta <= 0:
            raise NotATrapError(
                f"not a trap: {wavelength * 1e9:.1f} nm light is blue-detuned of {t.line_label}")
        prefactor = 3 * math.pi * CONSTANTS.c**2 / (2 * w0**3) * strength * t.gamma_angular
        if model == "two_level_RWA":
            coeff = prefactor / delta
        else:
            coeff = prefactor * (1 / delta + 1 / (w0 + omega))
        out.append(LineShift(t.line_label, coeff, delta, t.gamma_angular))
    return tuple(out)


@dataclass(frozen=True)
class DipoleTrapResult:
    depth: float                 # J, positive for an attractive trap
    axial_omega: float
    radial_omega: float
    photon_scattering_rate: float
    spec: DipoleTrapSpec = field(repr=False)
    alpha: float = field(repr=False)   # total light-shift coefficient, J per W/m^2

    @property
    def depth_kelvin(self):
        return self.depth / CONSTANTS.kB

    @property
    def depth_hz(self):
        return self.depth / CONSTANTS.h

    @property
    def axial_freq_hz(self):
        return angular_to_hz(self.axial_omega)

    @property
    def radial_freq_hz(self):
        return angular_to_hz(self.radial_omega)

    def intensity(self, r, z):
        return trap_intensity(self.spec, r, z)

    def potential(self, r, z):
        """Light-shift potential U(r, z) in J (negative inside the trap)."""
        return -self.alpha * trap_intensity(self.spec, r, z)


def trap_intensity(spec, r, z):
    """Total intensity of the two beams at radius ``r`` and axial position ``z``.

    Gouy and wavefront-curvature phases are neglected in the interference
    term; both vanish at the centre by symmetry.
    """
    r = np.asarray(r, dtype=float)
    z = np.asarray(z, dtype=float)
    a = spec.facet_separation / 2
    zr = spec.rayleigh_length
    w0 = spec.mode_field_radius
    i0 = spec.peak_intensity
    f1 = 1 / (1 + ((z + a) / zr) ** 2)
    f2 = 1 / (1 + ((z - a) / zr) ** 2)
    i1 = i0 * f1 * np.exp(-2 * r**2 * f1 / w0**2)
    i2 = i0 * f2 * np.exp(-2 * r**2 * f2 / w0**2)
    k = TWO_PI / spec.wavelength
    c = spec.interference_contrast
    return i1 + i2 + 2 * c * np.sqrt(i1 * i2) * np.cos(2 * k * z)


def dipole_trap(spec, species):
    """Depth, trap frequencies and photon scattering rate at the trench centre.

    Frequencies come from the analytic curvature of ``trap_intensity`` at
    the origin. Along z the divergence of each beam (Rayleigh length)
    gives weak confinement; the standing-wave term adds the lattice
    curvature 4 k^2 in proportion to the interference contrast.
    """
    lines = line_shifts(species, spec.wavelength, spec.polarizability_model)
    alpha = sum(l.shift_per_intensity for l in lines)
    scatter = sum(l.scattering_per_intensity for l in lines)

    a = spec.facet_separation / 2
    zr = spec.rayleigh_length
    w0 = spec.mode_field_radius
    c = spec.interference_contrast
    k = TWO_PI / spec.wavelength
    i0 = spec.peak_intensity
    u = a / zr
    f = 1 / (1 + u * u)                         # on-axis intensity of one beam at the centre
    f_dd = (6 * u * u - 2) / (1 + u * u) ** 3 / zr**2
    log_f_dd = -2 / zr**2 * (1 - u * u) / (1 + u * u) ** 2

    i_centre = 2 * i0 * f * (1 + c)
    # d^2 I / dz^2 at the origin: sum of the two beams plus the cross term
    i_zz = i0 * (2 * f_dd + 2 * c * f * (log_f_dd - 4 * k * k))
    # d^2 I / dr^2: both beams have width w0^2 / f at the centre
    i_rr = -4 * i_centre * f / w0**2

    m = species.mass
    wz2 = -alpha * i_zz / m
    wr2 = -alpha * i_rr / m
    if wz2 <= 0:
        raise NotATrapError("not a trap: no axial confinement at the trench centre")
    return DipoleTrapResult(
        depth=alpha * i_centre,
        axial_omega=math.sqrt(wz2),
        radial_omega=math.sqrt(wr2),
        photon_scattering_rate=scatter * i_centre,
        spec=spec,
        alpha=alpha,
    )


@dataclass(frozen=True)
class LoadingEstimate:
    atoms: float
    capture_length: float     # effective length, transverse overlap folded in
    axial_extent: float       # on-axis length where |U| > eta kB T


def loading_estimate(cloud, trap, truncation=1.0, trench_width=None, points=2001):
    """Atoms captured when the dipole trap is switched on inside the cloud.

    An atom is kept if the trap potential at its position is deeper than
    ``truncation * kB * T``. Along the trench axis, the captured fraction
    of the Gaussian transverse profile (width ``cloud.sigma_radial``) is
    integrated over the trench, and multiplied by the peak linear density.
    """
    if trench_width is None:
        trench_width = trap.spec.facet_separation
    if not trench_width > 0:
        raise ValueError("trench_width must be positive")
    threshold = truncation * CONSTANTS.kB * cloud.temperature
    z = np.linspace(-trench_width / 2, trench_width / 2, points)
    on_axis = np.abs(trap.potential(0.0, z))
    frac = np.zeros_like(z)
    r_max = 20 * trap.spec.mode_field_radius
    for i, (zi, ui) in enumerate(zip(z, on_axis)):
        if not ui > threshold:
            continue
        g = lambda r: abs(float(trap.potential(r, zi))) - threshold  # noqa: E731
        if g(r_max) > 0:
            frac[i] = 1.0
            continue
        rc = brentq(g, 0.0, r_max, xtol=1e-12)
        frac[i] = -math.expm1(-rc * rc / (2 * cloud.sigma_radial**2))
    dz = z[1] - z[0]
    capture = float(np.trapezoid(frac, dx=dz))
    extent = float(np.count_nonzero(on_axis > threshold) * dz)
    return LoadingEstimate(atoms=cloud.peak_linear_density * capture,
                           capture_length=capture, axial_extent=min(extent, trench_width))
