"""Atomic species data: optical transitions and ground-state structure.

Species constants live in versioned JSON records (``data/<name>.json``)
with an explicit unit tag on every number. The directory can be
overridden with the ``ATOMCHIP_DATA`` environment variable.
"""

from dataclasses import dataclass, field
import json
import math
import os
from pathlib import Path

from .units import CONSTANTS, UnitError, angular_to_hz, to_angular, to_si

ISAT_CONVENTIONS = ("cycling", "isotropic")


class SpeciesDataError(ValueError):
    pass


@dataclass(frozen=True)
class OpticalTransition:
    """One optical line. ``gamma_angular`` is the natural FWHM in rad/s.

    ``i_sat`` is the saturation intensity of the convention the species
    was loaded with; ``i_sat_isotropic`` keeps the isotropic value around
    for callers that want to switch.
    """

    wavelength: float
    gamma_angular: float
    i_sat: float
    line_label: str = ""
    relative_strength: float = 1.0
    i_sat_isotropic: float | None = None

    def __post_init__(self):
        for name in ("wavelength", "gamma_angular", "i_sat"):
            if not getattr(self, name) > 0:
                raise SpeciesDataError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.relative_strength < 0:
            raise SpeciesDataError("relative_strength must be non-negative")

    @property
    def omega(self):
        """Angular transition frequency 2 pi c / lambda."""
        return 2 * math.pi * CONSTANTS.c / self.wavelength

    @property
    def gamma_hz(self):
        return angular_to_hz(self.gamma_angular)

    def saturation_intensity(self, convention="cycling"):
        if convention == "cycling":
            return self.i_sat
        if convention == "isotropic":
            return self.i_sat_isotropic if self.i_sat_isotropic is not None else self.i_sat
        raise ValueError(f"unknown I_sat convention {convention!r}")


@dataclass(frozen=True)
class AtomSpecies:
    mass: float
    transitions: tuple[OpticalTransition, ...]
    hyperfine_angular: float
    label: str = ""
    isat_convention: str = "cycling"
    extra: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.mass > 0:
            raise SpeciesDataError("mass must be positive")
        if not self.transitions:
            raise SpeciesDataError("a species needs at least one transition")
        if not self.hyperfine_angular > 0:
            raise SpeciesDataError("hyperfine_splitting must be positive")

    @property
    def hyperfine_splitting_hz(self):
        return angular_to_hz(self.hyperfine_angular)

    def transition(self, label):
        for t in self.transitions:
            if t.line_label == label:
                return t
        raise KeyError(f"{self.label or 'species'} has no transition {label!r}")

    @property
    def d2(self):
        return self.transition("D2")

    def to_record(self):
        """Inverse of :func:`load_species`; frequencies go out in Hz."""
        lines = []
        for t in self.transitions:
            lines.append({
                "line_label": t.line_label,
                "wavelength": {"value": t.wavelength, "unit": "m"},
                "gamma": {"value": t.gamma_hz, "unit": "Hz"},
                "i_sat_cycling": {"value": t.i_sat, "unit": "W/m^2"},
                "i_sat_isotropic": {"value": t.saturation_intensity("isotropic"), "unit": "W/m^2"},
                "relative_strength": {"value": t.relative_strength, "unit": "1"},
            })
        return {
            "record_version": 1,
            "label": self.label,
            "mass": {"value": self.mass, "unit": "kg"},
            "hyperfine_splitting": {"value": self.hyperfine_splitting_hz, "unit": "Hz"},
            "transitions": lines,
        }


def data_dir():
    override = os.environ.get("ATOMCHIP_DATA")
    if override:
        return Path(override)
    return Path(__file__).parent / "data"


def _quantity(record, name, dimension, where):
    if name not in record:
        raise SpeciesDataError(f"{where}missing field {name!r}")
    entry = record[name]
    if not isinstance(entry, dict) or "value" not in entry or "unit" not in entry:
        raise SpeciesDataError(f"{where}field {name!r} needs a value and a unit tag")
    value = entry["value"]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpeciesDataError(f"{where}field {name!r} is not a number")
    if not value > 0:
        raise SpeciesDataError(f"{where}field {name!r} must be positive, got {value!r}")
    try:
        if dimension == "frequency":
            return to_angular(value, entry["unit"])
        return to_si(value, entry["unit"], dimension)
    except UnitError as exc:
        raise SpeciesDataError(f"{where}field {name!r}: {exc}") from None


def _transition(rec, index, isat_convention):
    where = f"transitions[{index}]: "
    isat_cyc = _quantity(rec, "i_sat_cycling", "intensity", where)
    isat_iso = isat_cyc
    if "i_sat_isotropic" in rec:
        isat_iso = _quantity(rec, "i_sat_isotropic", "intensity", where)
    strength = 1.0
    if "relative_strength" in rec:
        strength = _quantity(rec, "relative_strength", "dimensionless", where)
    return OpticalTransition(
        wavelength=_quantity(rec, "wavelength", "length", where),
        gamma_angular=_quantity(rec, "gamma", "frequency", where),
        i_sat=isat_cyc if isat_convention == "cycling" else isat_iso,
        line_label=str(rec.get("line_label", f"line{index}")),
        relative_strength=strength,
        i_sat_isotropic=isat_iso,
    )


def load_species(source="rb87", isat_convention="cycling"):
    """Build a validated :class:`AtomSpecies` from a species data record.

    Parameters
    ----------
    source : str, path or dict
        A bundled record name (``"rb87"``), a path to a JSON file, or an
        already-parsed record.
    isat_convention : {"cycling", "isotropic"}
        Which saturation intensity ends up in ``OpticalTransition.i_sat``.

    Raises
    ------
    SpeciesDataError
        Missing field, non-positive value or bad unit tag; the message
        names the offending field.
    """
    if isat_convention not in ISAT_CONVENTIONS:
        raise ValueError(f"isat_convention must be one of {ISAT_CONVENTIONS}")
    if isinstance(source, dict):
        record = source
    else:
        path = Path(source)
        if not path.suffix:
            path = data_dir() / f"{source}.json"
        try:
            record = json.loads(path.read_text())
        except FileNotFoundError:
            raise SpeciesDataError(f"species data not found: {path}") from None

    mass = _quantity(record, "mass", "mass", "")
    hfs = _quantity(record, "hyperfine_splitting", "frequency", "")
    raw = record.get("transitions")
    if not raw:
        raise SpeciesDataError("missing field 'transitions'")
    lines = tuple(_transition(rec, i, isat_convention) for i, rec in enumerate(raw))
    return AtomSpecies(
        mass=mass,
        transitions=lines,
        hyperfine_angular=hfs,
        label=str(record.get("label", "")),
        isat_convention=isat_convention,
    )
