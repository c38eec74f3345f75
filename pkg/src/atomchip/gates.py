"""Closed-form budgets for the single-qubit gates and the blockade error law."""

from dataclasses import dataclass
import math

from .rydberg import collective_rabi
from .simulate import PulseSegment
from .units import TWO_PI, angular_to_hz, hz_to_angular


class NearResonanceError(ValueError):
    pass


def _detunings(detuning_from_f2, species):
    """Angular detunings (laser - atom) from the F=2 and F=1 ground levels."""
    d2 = hz_to_angular(detuning_from_f2)
    # F=1 lies lower by the hyperfine splitting, so its lines sit higher in frequency
    return d2, d2 - species.hyperfine_angular


def differential_light_shift(power, detuning_from_f2, mode_field_radius, species,
                             isat_convention=None):
    """Light shift of F=2 minus that of F=1, in Hz, for light in the guided mode.

    Each level is shifted by Omega^2 / (4 Delta_F) with
    Omega^2 = Gamma^2 I0 / (2 I_sat) on the D2 line and I0 = 2P/(pi w^2).
    ``detuning_from_f2`` is laser minus atom (Hz), measured from the
    F=2 -> F'=3 line; positive is blue. The result is signed.
    """
    line = species.d2
    isat = line.i_sat if isat_convention is None else line.saturation_intensity(isat_convention)
    d2, d1 = _detunings(detuning_from_f2, species)
    gamma = line.gamma_angular
    if min(abs(d1), abs(d2)) < 10 * gamma:
        raise NearResonanceError("light is within 10 linewidths of a ground-state line")
    i0 = 2 * power / (math.pi * mode_field_radius**2)
    omega_sq = gamma**2 * i0 / (2 * isat)
    shift = omega_sq / 4 * (1 / d2 - 1 / d1)
    return angular_to_hz(shift)


@dataclass(frozen=True)
class PhaseGateBudget:
    duration: float
    scattered_photons_per_atom: float


def phase_gate_budget(target_phase, shift, detuning, species):
    """Duration and photon cost of a light-shift phase gate.

    ``shift`` is the differential light shift (Hz) and ``detuning`` the
    laser detuning from F=2 (Hz, laser minus atom). The scattered-photon
    count is the mean over an atom in F=1 and one in F=2: each scatters
    at Gamma Omega^2 / (4 Delta_F^2) while the phase grows at the
    differential rate, so n_F = phi Gamma / (Delta_F^2 |1/Delta_2 - 1/Delta_1|).
    """
    if not shift != 0:
        raise ValueError("shift must be non-zero")
    if target_phase == 0:
        return PhaseGateBudget(0.0, 0.0)
    d2, d1 = _detunings(detuning, species)
    gamma = species.d2.gamma_angular
    diff = abs(1 / d2 - 1 / d1)
    per_level = [abs(target_phase) * gamma / (d * d * diff) for d in (d1, d2)]
    return PhaseGateBudget(
        duration=abs(target_phase) / (TWO_PI * abs(shift)),
        scattered_photons_per_atom=sum(per_level) / 2,
    )


def build_hadamard_pulse(qubit, single_rabi):
    """pi/2 pulse on the collective ground <-> single-excitation transition.

    ``single_rabi`` in Hz; the segment carries the sqrt(N)-enhanced
    angular Rabi frequency and the N-dependent coupling to the doubly
    excited state.
    """
    rabi = hz_to_angular(collective_rabi(single_rabi, qubit.atom_count))
    n = qubit.atom_count
    ratio = math.sqrt(2 * (n - 1) / n) if n > 1 else 0.0
    return PulseSegment(rabi=rabi, duration=(math.pi / 2) / rabi, targets=(0,),
                        transition="g0-r", double_excitation_ratio=ratio)


def minimum_gate_error(blockade, lifetime):
    """Optimised blockade-gate error 3 (B tau)^(-2/3), with B = 2 pi * blockade (Hz)."""
    if not (blockade > 0 and lifetime > 0):
        raise ValueError("blockade and lifetime must be positive")
    return 3.0 * (hz_to_angular(blockade) * lifetime) ** (-2.0 / 3.0)
