"""Unit scales, physical constants and unit-tag conversion.

Everything inside the package is SI. Frequencies are stored as angular
frequencies (rad/s); ordinary frequencies (Hz) only appear at the I/O
boundary, converted with :func:`hz_to_angular` / :func:`angular_to_hz`.
"""

from dataclasses import dataclass
import math

from scipy import constants as _sc

# SI scale factors, for readable literals: 2.2 * um, 80 * uW
s, ms, us, ns = 1.0, 1e-3, 1e-6, 1e-9
m, cm, mm, um, nm = 1.0, 1e-2, 1e-3, 1e-6, 1e-9
Hz, kHz, MHz, GHz = 1.0, 1e3, 1e6, 1e9
W, mW, uW, nW = 1.0, 1e-3, 1e-6, 1e-9
K, mK, uK = 1.0, 1e-3, 1e-6
G = 1e-4  # gauss, in tesla

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhysConstants:
    hbar: float = _sc.hbar
    h: float = _sc.h
    kB: float = _sc.k
    c: float = _sc.c
    amu: float = _sc.atomic_mass

    def __post_init__(self):
        if not math.isclose(self.h, TWO_PI * self.hbar, rel_tol=1e-12):
            raise ValueError("inconsistent constants: h != 2*pi*hbar")


CONSTANTS = PhysConstants()


def hz_to_angular(f):
    return TWO_PI * f


def angular_to_hz(omega):
    return omega / TWO_PI


class UnitError(ValueError):
    """Unknown unit tag, or a tag that does not fit the quantity."""


# tag -> (dimension, scale to SI, is_frequency)
# "Hz"-type tags are ordinary frequencies and get the 2*pi on conversion
# to angular; "rad/s" tags are already angular.
_UNITS = {
    "1": ("dimensionless", 1.0),
    "%": ("dimensionless", 1e-2),
    "s": ("time", 1.0),
    "ms": ("time", ms),
    "us": ("time", us),
    "ns": ("time", ns),
    "m": ("length", 1.0),
    "cm": ("length", cm),
    "mm": ("length", mm),
    "um": ("length", um),
    "nm": ("length", nm),
    "kg": ("mass", 1.0),
    "u": ("mass", _sc.atomic_mass),
    "W": ("power", 1.0),
    "mW": ("power", mW),
    "uW": ("power", uW),
    "nW": ("power", nW),
    "K": ("temperature", 1.0),
    "mK": ("temperature", mK),
    "uK": ("temperature", uK),
    "W/m^2": ("intensity", 1.0),
    "mW/cm^2": ("intensity", mW / cm**2),
    "T": ("magnetic_field", 1.0),
    "G": ("magnetic_field", G),
    "Hz": ("frequency", 1.0),
    "kHz": ("frequency", kHz),
    "MHz": ("frequency", MHz),
    "GHz": ("frequency", GHz),
    "rad/s": ("angular_frequency", 1.0),
    "1/s": ("rate", 1.0),
    "rad": ("angle", 1.0),
    "1/m": ("linear_density", 1.0),
    "1/um": ("linear_density", 1 / um),
    "Hz*m^6": ("c6", 1.0),
    "MHz*um^6": ("c6", MHz * um**6),
    "GHz*um^6": ("c6", GHz * um**6),
}


def known_units():
    return sorted(_UNITS)


def unit_dimension(unit):
    try:
        return _UNITS[unit][0]
    except KeyError:
        raise UnitError(f"unknown unit tag {unit!r}") from None


def to_si(value, unit, dimension=None):
    """Convert ``value`` given in ``unit`` to SI.

    Ordinary frequencies (Hz, kHz, ...) come back in Hz; use
    :func:`to_angular` when the caller wants rad/s.
    """
    dim = unit_dimension(unit)
    if dimension is not None and dim != dimension:
        raise UnitError(f"unit {unit!r} is a {dim}, expected a {dimension}")
    return value * _UNITS[unit][1]


def from_si(value, unit):
    unit_dimension(unit)
    return value / _UNITS[unit][1]


def to_angular(value, unit):
    """Frequency with a unit tag -> angular frequency in rad/s."""
    dim = unit_dimension(unit)
    if dim == "frequency":
        return hz_to_angular(value * _UNITS[unit][1])
    if dim == "angular_frequency":
        return value * _UNITS[unit][1]
    raise UnitError(f"unit {unit!r} is not a frequency")
