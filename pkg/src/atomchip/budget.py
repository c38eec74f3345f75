"""Decoherence-rate aggregation and gate-time versus coherence-time comparison."""

from dataclasses import dataclass
import math

NAMED_RATES = ("surface_spin_flip", "trap_light_scattering", "ac_stark_inhomogeneity")


@dataclass(frozen=True)
class DecoherenceBudget:
    surface_spin_flip: float
    trap_light_scattering: float
    ac_stark_inhomogeneity: float
    extra: tuple = ()          # (name, rate) pairs

    def __post_init__(self):
        for name, rate in self.entries():
            if not rate >= 0:
                raise ValueError(f"decoherence rate {name!r} must be non-negative")

    def entries(self):
        return [(n, getattr(self, n)) for n in NAMED_RATES] + list(self.extra)

    @property
    def total_rate(self):
        return math.fsum(rate for _, rate in self.entries())

    @property
    def coherence_time(self):
        total = self.total_rate
        return math.inf if total == 0 else 1.0 / total

    @property
    def advisory(self):
        if self.total_rate == 0:
            return "all decoherence rates are zero: coherence time is unbounded"
        return None


def decoherence_budget(entries, trap=None):
    """Combine named rates (1/s) into a budget.

    ``entries`` maps the named rates plus an optional ``extra`` list of
    (name, rate) pairs. A missing or None ``trap_light_scattering`` is
    taken from ``trap.photon_scattering_rate``.
    """
    entries = dict(entries)
    if entries.get("trap_light_scattering") is None:
        if trap is None:
            raise ValueError("trap_light_scattering is missing and no trap was given")
        entries["trap_light_scattering"] = trap.photon_scattering_rate
    unknown = set(entries) - set(NAMED_RATES) - {"extra"}
    if unknown:
        raise ValueError(f"unknown decoherence entries: {sorted(unknown)}")
    return DecoherenceBudget(
        surface_spin_flip=float(entries.get("surface_spin_flip", 0.0)),
        trap_light_scattering=float(entries["trap_light_scattering"]),
        ac_stark_inhomogeneity=float(entries.get("ac_stark_inhomogeneity", 0.0)),
        extra=tuple((str(n), float(r)) for n, r in entries.get("extra", ())),
    )


def gate_to_coherence_ratio(budget, gate_duration):
    """log10 of coherence time over gate duration."""
    if not gate_duration > 0:
        raise ValueError("gate_duration must be positive")
    return math.log10(budget.coherence_time / gate_duration)
