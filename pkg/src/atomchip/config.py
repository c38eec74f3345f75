"""Scenario configuration: unit-tagged JSON, schema validation, dotted-path access."""

import copy
import json
from pathlib import Path

import jsonschema

from .traps import POLARIZABILITY_MODELS
from .species import ISAT_CONVENTIONS
from .units import UnitError, to_si, unit_dimension

SCHEMA_VERSION = 1
_DATA = Path(__file__).parent / "data"
DEFAULT_CONFIG_PATH = _DATA / "default.json"
SCHEMA_PATH = _DATA / "scenario.schema.json"


class ConfigError(ValueError):
    """Invalid scenario; ``diagnostics`` lists every problem found."""

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics) or [message]


# Field table: section -> field -> dimension (quantities) or a choice list
# (plain strings). A trailing "?" on the dimension allows null.
FIELDS = {
    "species": {
        "source": ("string",),
        "isat_convention": tuple(ISAT_CONVENTIONS),
    },
    "chip": {
        "mode_field_radius": "length",
        "trench_width": "length",
        "channel_pitch": "length",
        "channels": "dimensionless",
        "magnetic_field": "magnetic_field",
    },
    "cloud": {
        "atoms": "dimensionless",
        "temperature": "temperature",
        "axial_frequency": "frequency",
        "radial_frequency": "frequency",
    },
    "dipole_trap": {
        "beam_power_each": "power",
        "wavelength": "length",
        "interference_contrast": "dimensionless",
        "polarizability_model": tuple(POLARIZABILITY_MODELS),
        "loading_truncation": "dimensionless",
    },
    "probe": {
        "scattered_photons_per_atom": "dimensionless",
        "detection_efficiency": "dimensionless",
        "mirror_reflectivity": "dimensionless",
    },
    "fluorescence": {
        "scattering_events": "dimensionless",
        "lens_diameter": "length",
        "lens_distance": "length",
        "camera_qe": "dimensionless",
        "collection_fraction": "dimensionless?",
    },
    "rydberg": {
        "anchor_n": "dimensionless",
        "anchor_distance": "length",
        "anchor_shift": "frequency",
        "anchor_lifetime": "time",
        "principal_n": "dimensionless",
        "gate_distance": "length",
    },
    "qubit": {
        "atoms": "dimensionless",
        "extent": "length",
    },
    "gates": {
        "single_rabi": "frequency",
        "phase_gate_power": "power",
        "phase_gate_detuning": "frequency",
        "phase_gate_angle": "angle",
        "hadamard_principal_n": "dimensionless",
    },
    "cz": {
        "blockade": "frequency?",
        "gate_duration": "time",
        "grid_points": "dimensionless",
    },
    "decoherence": {
        "surface_spin_flip": "rate",
        "trap_light_scattering": "rate?",
        "ac_stark_inhomogeneity": "rate",
        "extra": "extra",
    },
    "monte_carlo": {
        "trials": "dimensionless",
        "seed": "dimensionless",
    },
}


def _quantity_schema(nullable):
    q = {"$ref": "#/$defs/quantity"}
    return {"oneOf": [q, {"type": "null"}]} if nullable else q


def scenario_schema():
    """JSON schema (draft 2020-12) generated from the field table."""
    props = {"schema_version": {"const": SCHEMA_VERSION}}
    for section, fields in FIELDS.items():
        sp = {}
        for name, kind in fields.items():
            if isinstance(kind, tuple):
                sp[name] = {"type": "string"} if kind == ("string",) else {"enum": list(kind)}
            elif kind == "extra":
                sp[name] = {"type": "array", "items": {"$ref": "#/$defs/named_rate"}}
            else:
                sp[name] = _quantity_schema(kind.endswith("?"))
        props[section] = {"type": "object", "properties": sp, "required": sorted(fields),
                          "additionalProperties": False}
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "atomchip scenario",
        "type": "object",
        "properties": props,
        "required": ["schema_version", *FIELDS],
        "additionalProperties": False,
        "$defs": {
            "quantity": {
                "type": "object",
                "properties": {"value": {"type": "number"}, "unit": {"type": "string"}},
                "required": ["value", "unit"],
                "additionalProperties": False,
            },
            "named_rate": {
                "type": "object",
                "properties": {"name": {"type": "string"}, "value": {"type": "number", "minimum": 0},
                               "unit": {"type": "string"}},
                "required": ["name", "value", "unit"],
                "additionalProperties": False,
            },
        },
    }


def load_schema():
    return json.loads(SCHEMA_PATH.read_text())


def _dimension_problems(data):
    problems = []
    for section, fields in FIELDS.items():
        for name, kind in fields.items():
            if isinstance(kind, tuple):
                continue
            entry = data[section][name]
            items = entry if kind == "extra" else [entry]
            want = "rate" if kind == "extra" else kind.rstrip("?")
            for item in items:
                if item is None:
                    continue
                try:
                    dim = unit_dimension(item["unit"])
                except UnitError as exc:
                    problems.append(f"{section}.{name}: {exc}")
                    continue
                if dim != want:
                    problems.append(f"{section}.{name}: unit {item['unit']!r} is a {dim}, "
                                    f"expected a {want}")
    return problems


def validate(data):
    """Raise ConfigError listing schema and unit-dimension problems."""
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.path)))
    problems = [f"{'.'.join(map(str, e.path)) or '<root>'}: {e.message}" for e in errors]
    if not problems:
        problems = _dimension_problems(data)
    if problems:
        raise ConfigError("invalid scenario config: " + "; ".join(problems), problems)


class ScenarioConfig:
    """Validated scenario. Quantities are read back in SI via :meth:`si`."""

    def __init__(self, data):
        validate(data)
        self._data = copy.deepcopy(data)

    @classmethod
    def default(cls):
        return cls.from_file(DEFAULT_CONFIG_PATH)

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None
        return cls(data)

    @classmethod
    def from_json(cls, text):
        return cls(json.loads(text))

    def to_dict(self):
        return copy.deepcopy(self._data)

    def to_json(self):
        return json.dumps(self._data, indent=2, sort_keys=True) + "\n"

    def __eq__(self, other):
        return isinstance(other, ScenarioConfig) and self._data == other._data

    def raw(self, path):
        node = self._data
        for key in path.split("."):
            if not isinstance(node, dict) or key not in node:
                raise KeyError(f"config path {path!r} does not resolve")
            node = node[key]
        return node

    def si(self, path):
        """Quantity at ``path`` in SI (frequencies in Hz); None for null entries."""
        q = self.raw(path)
        if q is None:
            return None
        if not isinstance(q, dict) or "unit" not in q:
            raise KeyError(f"config path {path!r} is not a quantity")
        return to_si(q["value"], q["unit"])

    def integer(self, path):
        v = self.si(path)
        if v != int(v):
            raise ConfigError(f"{path} must be an integer, got {v}")
        return int(v)

    def with_value(self, path, value):
        """Copy with the quantity at ``path`` set to ``value`` in its existing unit."""
        q = self.raw(path)
        data = self.to_dict()
        node = data
        keys = path.split(".")
        for key in keys[:-1]:
            node = node[key]
        if isinstance(q, dict) and "unit" in q:
            node[keys[-1]] = {"value": value, "unit": q["unit"]}
        else:
            node[keys[-1]] = value
        return ScenarioConfig(data)

    def extra_rates(self):
        return [(e["name"], to_si(e["value"], e["unit"])) for e in self.raw("decoherence.extra")]
