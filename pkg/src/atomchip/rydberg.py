"""Rydberg-level scaling, blockade shifts and collective excitation rates.

Frequencies in this module are ordinary frequencies (Hz) since these are
the user-facing design numbers; the simulator converts to rad/s.
"""

from dataclasses import dataclass
import math
import warnings

from .units import MHz, um

MIN_VDW_DISTANCE = 0.5e-6


class ShortRangeError(ValueError):
    pass


@dataclass(frozen=True)
class RydbergLevel:
    n: int
    lifetime: float
    c6: float    # Hz m^6

    def __post_init__(self):
        if self.n < 10:
            raise ValueError("principal quantum number must be >= 10")
        if not (self.lifetime > 0 and self.c6 > 0):
            raise ValueError("lifetime and c6 must be positive")

    @property
    def decay_rate(self):
        return 1.0 / self.lifetime


@dataclass(frozen=True)
class RydbergScalingModel:
    """nS-state scaling C6 ~ n^11 and radiative lifetime ~ n^3 from one anchor level.

    No blackbody correction: lifetimes at high n come out long.
    """

    c6_anchor: float
    lifetime_anchor: float
    n_anchor: int = 40
    c6_exponent: float = 11.0
    lifetime_exponent: float = 3.0

    def __post_init__(self):
        if not (self.c6_anchor > 0 and self.lifetime_anchor > 0 and self.n_anchor > 0):
            raise ValueError("anchors must be positive")

    @classmethod
    def calibrated(cls, shift=90 * MHz, distance=2 * um, n_anchor=40, lifetime=100e-6):
        """Fix C6 so that ``blockade_shift(n_anchor, distance) == shift``."""
        return cls(c6_anchor=shift * distance**6, lifetime_anchor=lifetime, n_anchor=n_anchor)


def rydberg_level(model, n):
    if n < 10:
        raise ValueError("principal quantum number must be >= 10")
    ratio = n / model.n_anchor
    return RydbergLevel(
        n=n,
        lifetime=model.lifetime_anchor * ratio**model.lifetime_exponent,
        c6=model.c6_anchor * ratio**model.c6_exponent,
    )


def blockade_shift(level, distance, min_distance=MIN_VDW_DISTANCE):
    """Van der Waals shift C6 / R^6 in Hz."""
    if not distance > 0:
        raise ValueError("distance must be positive")
    if distance < min_distance:
        raise ShortRangeError(
            f"short-range regime outside vdW validity: R = {distance:.3g} m < {min_distance:.3g} m")
    return level.c6 / distance**6


@dataclass(frozen=True)
class BlockadeVerdict:
    ratio: float
    threshold: float

    @property
    def blockaded(self):
        return self.ratio > self.threshold

    @property
    def verdict(self):
        if self.blockaded:
            return "blockaded"
        if self.ratio > 1:
            return "marginal"
        return "not blockaded"


def blockade_condition(shift, rabi, linewidth, threshold=10.0):
    """Compare the blockade shift with the power-broadened linewidth max(Omega, Gamma)."""
    if shift < 0 or rabi < 0 or linewidth < 0:
        raise ValueError("inputs must be non-negative")
    width = max(rabi, linewidth)
    if width == 0:
        ratio = math.inf if shift > 0 else 0.0
    else:
        ratio = shift / width
    return BlockadeVerdict(ratio=ratio, threshold=threshold)


def collective_rabi(single_atom_rabi, atoms):
    """sqrt(N) enhancement of the ground <-> singly-excited coupling."""
    if atoms < 1:
        raise ValueError("need at least one atom")
    return math.sqrt(atoms) * single_atom_rabi


@dataclass(frozen=True)
class TwoPhotonResult:
    rabi: float
    intermediate_population: float


def two_photon_rabi(red_rabi, blue_rabi, intermediate_detuning):
    """Effective two-photon Rabi frequency after eliminating the intermediate level.

    Omega = Omega_r Omega_b / (2 Delta); the peak intermediate-state fraction
    is about (Omega_r/2Delta)^2 + (Omega_b/2Delta)^2. Warns when Delta is
    not at least 10x both single-photon Rabi frequencies.
    """
    if intermediate_detuning == 0:
        raise ValueError("intermediate detuning must be non-zero")
    d = abs(intermediate_detuning)
    if d < 10 * max(abs(red_rabi), abs(blue_rabi)):
        warnings.warn("intermediate detuning is not large compared with the single-photon "
                      "Rabi frequencies; adiabatic elimination is unreliable", stacklevel=2)
    pop = (red_rabi / (2 * d)) ** 2 + (blue_rabi / (2 * d)) ** 2
    return TwoPhotonResult(rabi=red_rabi * blue_rabi / (2 * d), intermediate_population=pop)


def beam_intensity(power, waist_x, waist_y=None):
    """Peak intensity of an elliptical Gaussian beam, 2P / (pi w_x w_y)."""
    waist_y = waist_x if waist_y is None else waist_y
    return 2 * power / (math.pi * waist_x * waist_y)


def single_photon_rabi(power, waist_x, waist_y, coupling):
    """Rabi frequency (Hz) = coupling * sqrt(peak intensity).

    ``coupling`` is a per-transition calibration constant in Hz/sqrt(W/m^2).
    """
    return coupling * math.sqrt(beam_intensity(power, waist_x, waist_y))


def lower_leg_coupling(transition):
    """Calibration constant of the 5S-5P leg, Gamma / sqrt(2 I_sat) in Hz/sqrt(W/m^2)."""
    return transition.gamma_hz / math.sqrt(2 * transition.i_sat)


def calibrate_upper_leg(target_rabi, red_rabi, intermediate_detuning, power, waist_x, waist_y):
    """Upper-leg coupling constant that makes the two-photon Rabi equal ``target_rabi``."""
    blue = 2 * abs(intermediate_detuning) * target_rabi / red_rabi
    return blue / math.sqrt(beam_intensity(power, waist_x, waist_y))


@dataclass(frozen=True)
class CollectiveQubit:
    """N atoms sharing one hyperfine excitation; ``extent`` is the axial size."""

    atom_count: int
    extent: float = 2 * um
    site_pitch: float = 10 * um

    def __post_init__(self):
        if self.atom_count < 1:
            raise ValueError("atom_count must be >= 1")
        if not self.extent > 0:
            raise ValueError("extent must be positive")
