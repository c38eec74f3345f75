import json
import math

import numpy as np
import pytest

from atomchip.gates import build_hadamard_pulse
from atomchip.rydberg import CollectiveQubit
from atomchip.simulate import (LEVELS, EnsembleBasis, EnsembleState, PulseSegment, StepSizeError,
                               hadamard_error_with_atom_spread, propagator, simulate_cz_gate,
                               simulate_hadamard, simulate_pulse_sequence)

RABI = 2 * math.pi * 1e6


def one_ensemble(level="g1", levels=LEVELS[:3]):
    b = EnsembleBasis(1, levels)
    return EnsembleState.product(b, level)


def test_rabi_oscillation_matches_analytic():
    start = one_ensemble()
    phase = 0.3
    for t in np.linspace(0.1e-6, 2.5e-6, 7):
        out = simulate_pulse_sequence(start, [PulseSegment(RABI, t, phase=phase)])
        g1 = math.cos(RABI * t / 2)
        r = -1j * np.exp(1j * phase) * math.sin(RABI * t / 2)
        b = start.basis
        assert abs(out.amplitudes[b.index("g1")] - g1) < 1e-10
        assert abs(out.amplitudes[b.index("r")] - r) < 1e-10
        assert abs(out.amplitudes[b.index("g0")]) == 0.0


def test_quarter_period_gives_equal_superposition():
    out = simulate_pulse_sequence(one_ensemble(), [PulseSegment(RABI, (math.pi / 2) / RABI)])
    assert out.population("g1") == pytest.approx(0.5, abs=1e-12)
    assert out.norm == pytest.approx(1.0, abs=1e-12)


def test_two_pi_pulse_returns_with_minus_sign():
    b = EnsembleBasis(2)
    start = EnsembleState.product(b, "g1", "g0")
    out = simulate_pulse_sequence(start, [PulseSegment(RABI, 2 * math.pi / RABI, targets=(0,))],
                                  blockade=0.0)
    assert out.amplitudes[b.index("g1", "g0")] == pytest.approx(-1.0, abs=1e-9)


def test_halving_dt_changes_amplitudes_little():
    b = EnsembleBasis(2)
    seq = [PulseSegment(RABI, 1.3e-6, targets=(0,)), PulseSegment(RABI, 0.7e-6, targets=(1,))]
    kw = dict(blockade=2 * math.pi * 5e6, decay_rate=1e3)
    u1 = propagator(b, seq, steps_per_period=1000, **kw)
    u2 = propagator(b, seq, steps_per_period=2000, **kw)
    assert np.max(abs(u1 - u2)) < 1e-8


def test_norm_conserved_over_1e5_steps():
    b = EnsembleBasis(2)
    blockade = 2 * math.pi * 5e6
    f_max = 5e6
    dt = 1 / (1000 * f_max)
    seg = PulseSegment(RABI, 1e5 * dt, targets=(0, 1))
    start = EnsembleState.product(b, "g1", "g1")
    out = simulate_pulse_sequence(start, [seg], blockade=blockade, dt=dt)
    assert abs(out.norm - 1) < 1e-9


def test_decay_removes_norm():
    out = simulate_pulse_sequence(one_ensemble(), [PulseSegment(RABI, 5e-6)], decay_rate=1e4)
    assert 0 < out.decay_error < 1


def test_step_size_guards():
    seg = PulseSegment(RABI, 1e-6)
    with pytest.raises(StepSizeError, match="too coarse"):
        simulate_pulse_sequence(one_ensemble(), [seg], dt=1e-7)
    with pytest.raises(StepSizeError, match="steps"):
        simulate_pulse_sequence(one_ensemble(), [PulseSegment(RABI, 1.0)])


def test_pulse_segment_json_round_trip():
    seg = PulseSegment(RABI, 1e-6, detuning=2e5, phase=0.1, targets=(1,), transition="g0-r",
                       double_excitation_ratio=1.2)
    again = PulseSegment.from_dict(json.loads(json.dumps(seg.to_dict())))
    assert again.duration == seg.duration and again.targets == seg.targets
    assert again.rabi == pytest.approx(seg.rabi, rel=1e-12)
    assert again.detuning == pytest.approx(seg.detuning, rel=1e-12)
    assert seg.to_dict()["rabi_hz"] == pytest.approx(1e6)


# -- Hadamard ---------------------------------------------------------------

def test_hadamard_timing_and_leakage():
    pulse = build_hadamard_pulse(CollectiveQubit(500), 500e3)
    blockade = 2 * math.pi * 90e6
    res = simulate_hadamard(pulse, blockade)
    assert 20e-9 <= res.completion_time <= 28e-9
    oracle = (pulse.rabi / (2 * blockade)) ** 2
    assert res.double_excitation <= 1.5 * oracle


def test_hadamard_ideal_blockade_is_exact_half():
    pulse = build_hadamard_pulse(CollectiveQubit(500), 500e3)
    res = simulate_hadamard(pulse)
    assert res.single_excitation == pytest.approx(0.5, abs=1e-10)
    assert res.completion_time == pytest.approx(pulse.duration, rel=1e-9)


def test_hadamard_leakage_scales_as_inverse_square_blockade():
    pulse = build_hadamard_pulse(CollectiveQubit(500), 500e3)
    bs = np.geomspace(100e6, 3e9, 8)
    start = EnsembleState.product(EnsembleBasis(1, LEVELS), "g0")
    leak = [simulate_pulse_sequence(start, [pulse], blockade=2 * math.pi * b).population("rr")
            for b in bs]
    slope = np.polyfit(np.log(bs), np.log(leak), 1)[0]
    assert slope == pytest.approx(-2.0, abs=0.15)


def test_atom_number_spread_error():
    assert hadamard_error_with_atom_spread(500, 0.0, samples=10, rng=0) == pytest.approx(0.0, abs=1e-15)
    small = hadamard_error_with_atom_spread(500, 10, samples=4000, rng=1)
    large = hadamard_error_with_atom_spread(500, 50, samples=4000, rng=1)
    assert 0 < small < large
    # small-spread oracle: error ~ (pi/8)^2 (dN/N)^2 / 4 averaged
    assert large == pytest.approx((math.pi / 8) ** 2 * (50 / 500) ** 2 / 4 * 4, rel=0.15)


# -- CZ ---------------------------------------------------------------------

def test_cz_ideal_blockade_truth_table(level100, qubit):
    rep = simulate_cz_gate(qubit, qubit, level100, single_rabi=500e3, blockade_hz=math.inf,
                           decay_rate=0.0)
    assert rep.gate_error < 1e-6
    assert rep.phases[0] == pytest.approx(0.0, abs=1e-6)
    for p in rep.phases[1:]:
        assert p == pytest.approx(math.pi, abs=1e-6)
    assert rep.error_breakdown["rydberg_decay"] == 0.0


def test_cz_default_branch_in_band(level100, qubit):
    rep = simulate_cz_gate(qubit, qubit, level100, blockade_hz=50e6, gate_duration=10e-6)
    assert 1e-4 <= rep.gate_error <= 1e-2
    assert rep.gate_duration == pytest.approx(10e-6)
    assert sum(rep.error_breakdown.values()) == pytest.approx(rep.gate_error, rel=1e-9)


def test_cz_without_decay_has_zero_decay_component(level100, qubit):
    rep = simulate_cz_gate(qubit, qubit, level100, blockade_hz=20e6, gate_duration=1e-6,
                           decay_rate=0.0)
    assert rep.error_breakdown["rydberg_decay"] == 0.0
    assert rep.gate_error > 0
    assert rep.gate_error == pytest.approx(rep.error_breakdown["leftover_rydberg_population"]
                                           + rep.error_breakdown["blockade_leakage"], rel=1e-9)


def test_cz_blockade_from_distance(level100, qubit):
    rep = simulate_cz_gate(qubit, qubit, level100, single_rabi=500e3)
    assert rep.blockade_hz == pytest.approx(137.3e6, rel=1e-3)


def test_cz_report_serializes(level100, qubit):
    rep = simulate_cz_gate(qubit, qubit, level100, blockade_hz=50e6, gate_duration=10e-6)
    doc = json.loads(json.dumps(rep.to_dict()))
    assert doc["protocol"] == "pi-2pi-pi"
    assert set(doc["fidelities"]) == {"00", "01", "10", "11", "++"}


def test_cz_argument_validation(level100, qubit):
    with pytest.raises(ValueError):
        simulate_cz_gate(qubit, qubit, level100)
