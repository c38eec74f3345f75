"""Time-domain simulation of collectively encoded qubits in a truncated basis.

Each ensemble is described by the symmetric states

    g0  all atoms in F=1 (logical 0)
    g1  one shared F=2 excitation (logical 1)
    r   one shared Rydberg excitation
    rr  two Rydberg excitations (optional; single-ensemble blockade leakage)

and several ensembles form a tensor product. Evolution uses a
non-Hermitian Hamiltonian: every Rydberg excitation decays at Gamma_r,
and the lost norm is the decay error. Pulses are piecewise constant, and
each segment is integrated with fixed-step classical RK4. For a constant
Hamiltonian one RK4 step is a fixed matrix, so n steps are applied as
that matrix to the n-th power.
"""

from dataclasses import dataclass, field
import itertools
import math

import numpy as np
from scipy.optimize import brentq, minimize

from .rydberg import blockade_shift
from .units import TWO_PI, hz_to_angular

LEVELS = ("g0", "g1", "r", "rr")
RYDBERG_COUNT = {"g0": 0, "g1": 0, "r": 1, "rr": 2}
TRANSITIONS = ("g1-r", "g0-r")
STEPS_PER_PERIOD = 1000
MIN_STEPS_PER_PERIOD = 20
MAX_STEPS = 100_000_000


class StepSizeError(ValueError):
    pass


@dataclass(frozen=True)
class EnsembleBasis:
    n_ensembles: int = 1
    levels: tuple[str, ...] = ("g0", "g1", "r")

    def __post_init__(self):
        if self.n_ensembles < 1:
            raise ValueError("need at least one ensemble")
        if self.levels not in (LEVELS[:3], LEVELS):
            raise ValueError("levels must be (g0, g1, r) or (g0, g1, r, rr)")

    @property
    def dim(self):
        return len(self.levels) ** self.n_ensembles

    @property
    def states(self):
        """Product states as tuples of level labels, in index order."""
        return list(itertools.product(self.levels, repeat=self.n_ensembles))

    def index(self, *labels):
        if len(labels) != self.n_ensembles:
            raise ValueError(f"expected {self.n_ensembles} labels")
        k = len(self.levels)
        idx = 0
        for lab in labels:
            idx = idx * k + self.levels.index(lab)
        return idx

    def rydberg_counts(self):
        return np.array([sum(RYDBERG_COUNT[l] for l in s) for s in self.states])

    def pair_counts(self):
        """Number of interacting Rydberg pairs in each product state."""
        n = self.rydberg_counts()
        return n * (n - 1) // 2

    def logical_indices(self):
        """Indices of g0/g1 product states, ordered as binary 0..2^n - 1."""
        return [self.index(*("g1" if b else "g0" for b in bits))
                for bits in itertools.product((0, 1), repeat=self.n_ensembles)]


@dataclass
class EnsembleState:
    amplitudes: np.ndarray
    basis: EnsembleBasis

    @classmethod
    def product(cls, basis, *labels):
        amps = np.zeros(basis.dim, dtype=complex)
        amps[basis.index(*labels)] = 1.0
        return cls(amps, basis)

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    @property
    def decay_error(self):
        """Population lost to Rydberg decay, 1 - <psi|psi>."""
        return 1.0 - self.norm**2

    def population(self, *labels):
        return float(abs(self.amplitudes[self.basis.index(*labels)]) ** 2)

    def rydberg_population(self):
        mask = self.basis.rydberg_counts() > 0
        return float(np.sum(abs(self.amplitudes[mask]) ** 2))


@dataclass(frozen=True)
class PulseSegment:
    """Constant drive on ``targets`` for ``duration`` seconds.

    ``rabi`` and ``detuning`` are angular (rad/s). ``transition`` picks the
    lower level of the driven ensembles: ``g1-r`` for gate pulses on the
    logical 1 state, ``g0-r`` for the collective excitation of the
    Hadamard, which also couples r to rr with ``double_excitation_ratio``
    times the collective Rabi frequency.
    """

    rabi: float
    duration: float
    detuning: float = 0.0
    phase: float = 0.0
    targets: tuple[int, ...] = (0,)
    transition: str = "g1-r"
    double_excitation_ratio: float = math.sqrt(2)

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError("segment duration must be positive")
        if self.transition not in TRANSITIONS:
            raise ValueError(f"transition must be one of {TRANSITIONS}")

    def to_dict(self):
        return {
            "rabi_hz": self.rabi / TWO_PI,
            "duration_s": self.duration,
            "detuning_hz": self.detuning / TWO_PI,
            "phase_rad": self.phase,
            "targets": list(self.targets),
            "transition": self.transition,
            "double_excitation_ratio": self.double_excitation_ratio,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(rabi=hz_to_angular(d["rabi_hz"]), duration=d["duration_s"],
                   detuning=hz_to_angular(d.get("detuning_hz", 0.0)),
                   phase=d.get("phase_rad", 0.0), targets=tuple(d.get("targets", (0,))),
                   transition=d.get("transition", "g1-r"),
                   double_excitation_ratio=d.get("double_excitation_ratio", math.sqrt(2)))


def hamiltonian(basis, segment, blockade=math.inf, decay_rate=0.0):
    """Non-Hermitian Hamiltonian (rad/s) of one segment.

    ``blockade`` (rad/s) is the energy of every pair of Rydberg
    excitations; ``math.inf`` removes doubly excited states altogether.
    """
    states = basis.states
    dim = len(states)
    n_ryd = basis.rydberg_counts()
    pairs = basis.pair_counts()
    h = np.zeros((dim, dim), dtype=complex)
    if math.isfinite(blockade):
        h[np.diag_indices(dim)] += blockade * pairs
    h[np.diag_indices(dim)] += -0.5j * decay_rate * n_ryd

    lower = "g1" if segment.transition == "g1-r" else "g0"
    half = 0.5 * segment.rabi * np.exp(1j * segment.phase)
    for t in segment.targets:
        if not 0 <= t < basis.n_ensembles:
            raise ValueError(f"target {t} outside basis with {basis.n_ensembles} ensembles")
        for i, s in enumerate(states):
            h[i, i] += segment.detuning * RYDBERG_COUNT[s[t]]
            up = {lower: "r"}
            if segment.transition == "g0-r" and "rr" in basis.levels:
                up["r"] = "rr"
            if s[t] in up:
                j = basis.index(*(s[:t] + (up[s[t]],) + s[t + 1:]))
                coupling = half if s[t] == lower else half * segment.double_excitation_ratio
                h[j, i] += coupling
                h[i, j] += np.conj(coupling)

    if not math.isfinite(blockade):
        blocked = pairs > 0
        h[blocked, :] = 0
        h[:, blocked] = 0
    return h


def _f_max(sequence, blockade, decay_rate):
    f = [abs(seg.rabi) * max(1.0, seg.double_excitation_ratio) for seg in sequence]
    f += [abs(seg.detuning) for seg in sequence]
    if math.isfinite(blockade):
        f.append(abs(blockade))
    f = [x / TWO_PI for x in f] + [decay_rate]
    return max(f)


def _rk4_step_matrix(h, dt):
    a = -1j * dt * h
    eye = np.eye(h.shape[0], dtype=complex)
    a2 = a @ a
    return eye + a + a2 / 2 + a2 @ a / 6 + a2 @ a2 / 24


def propagator(basis, sequence, blockade=math.inf, decay_rate=0.0, dt=None,
               steps_per_period=STEPS_PER_PERIOD):
    """Full RK4 map of a pulse sequence.

    The default step is 1 / (``steps_per_period`` * f_max), where f_max is
    the largest of the Rabi frequencies, detunings and blockade shift (as
    ordinary frequencies) and the decay rate. An explicit ``dt`` coarser
    than 1/(20 f_max), or a sequence needing more than 1e8 steps, raises
    :class:`StepSizeError`.
    """
    f_max = _f_max(sequence, blockade, decay_rate)
    if dt is None:
        dt = 1.0 / (steps_per_period * f_max)
    elif dt * f_max > 1.0 / MIN_STEPS_PER_PERIOD:
        raise StepSizeError(
            f"dt = {dt:.3g} s is too coarse for f_max = {f_max:.3g} Hz; "
            f"use dt <= {1 / (MIN_STEPS_PER_PERIOD * f_max):.3g} s")
    steps = [max(1, math.ceil(seg.duration / dt - 1e-9)) for seg in sequence]
    if sum(steps) > MAX_STEPS:
        raise StepSizeError(f"sequence needs {sum(steps)} steps (> {MAX_STEPS}); "
                            "shorten the sequence or use a smaller steps_per_period")
    total = np.eye(basis.dim, dtype=complex)
    for seg, n in zip(sequence, steps):
        step = _rk4_step_matrix(hamiltonian(basis, seg, blockade, decay_rate), seg.duration / n)
        total = np.linalg.matrix_power(step, n) @ total
    return total


def simulate_pulse_sequence(initial, sequence, level=None, blockade=math.inf, *,
                            decay_rate=None, dt=None, steps_per_period=STEPS_PER_PERIOD):
    """Evolve ``initial`` through ``sequence``.

    Parameters
    ----------
    initial : EnsembleState
    sequence : list of PulseSegment
    level : RydbergLevel, optional
        Supplies the decay rate 1/lifetime unless ``decay_rate`` is given.
    blockade : float
        Pair interaction in rad/s, ``math.inf`` for a perfect blockade.
    """
    if decay_rate is None:
        decay_rate = 0.0 if level is None else level.decay_rate
    u = propagator(initial.basis, sequence, blockade, decay_rate, dt, steps_per_period)
    return EnsembleState(u @ initial.amplitudes, initial.basis)


# -- Hadamard --------------------------------------------------------------

@dataclass(frozen=True)
class HadamardResult:
    state: EnsembleState
    duration: float
    completion_time: float
    double_excitation: float

    @property
    def single_excitation(self):
        return self.state.population("r")


def simulate_hadamard(pulse, blockade=math.inf, level=None, decay_rate=None,
                      steps_per_period=STEPS_PER_PERIOD):
    """Run a Hadamard pulse on one ensemble in the (g0, g1, r, rr) basis.

    ``completion_time`` is when the ground-state population first falls to
    1/2 (the pi/2 point), found by root bracketing on repeated runs.
    """
    basis = EnsembleBasis(1, LEVELS)
    start = EnsembleState.product(basis, "g0")

    def run(duration):
        seg = PulseSegment(pulse.rabi, duration, pulse.detuning, pulse.phase, (0,),
                           pulse.transition, pulse.double_excitation_ratio)
        return simulate_pulse_sequence(start, [seg], level, blockade, decay_rate=decay_rate,
                                       steps_per_period=steps_per_period)

    final = run(pulse.duration)
    g = lambda t: run(t).population("g0") - 0.5  # noqa: E731
    t_done = brentq(g, 0.25 * pulse.duration, 1.75 * pulse.duration, xtol=1e-13)
    return HadamardResult(state=final, duration=pulse.duration, completion_time=t_done,
                          double_excitation=final.population("rr"))


def hadamard_error_with_atom_spread(nominal_atoms, atom_number_std, samples=1000, rng=None):
    """Mean pi/2-rotation error when N fluctuates around the calibrated value.

    The pulse is timed for ``nominal_atoms``; a shot with N atoms rotates by
    (pi/2) sqrt(N / N0). Error is 1 - |<target|psi>|^2 in the ideal
    blockade limit. N is drawn from a Gaussian and clipped at 1.
    """
    rng = np.random.default_rng(rng)
    n = np.clip(rng.normal(nominal_atoms, atom_number_std, size=samples), 1, None)
    theta = 0.5 * math.pi * np.sqrt(n / nominal_atoms)
    return float(np.mean(np.sin((theta - 0.5 * math.pi) / 2) ** 2))


# -- controlled-Z ----------------------------------------------------------

CZ_INPUT_LABELS = ("00", "01", "10", "11", "++")
CZ_IDEAL = np.array([1, -1, -1, -1], dtype=complex)   # pi-2pi-pi phases, (Z x Z) CZ


@dataclass(frozen=True)
class GateFidelityReport:
    gate_error: float
    error_breakdown: dict
    gate_duration: float
    blockade_hz: float
    rabi_hz: float
    decay_rate: float
    fidelities: dict = field(default_factory=dict)
    phases: tuple = ()
    local_phases: tuple = (0.0, 0.0)
    protocol: str = "pi-2pi-pi"

    def to_dict(self):
        return {
            "protocol": self.protocol,
            "gate_error": self.gate_error,
            "error_breakdown": dict(self.error_breakdown),
            "gate_duration_s": self.gate_duration,
            "blockade_hz": self.blockade_hz,
            "rabi_hz": self.rabi_hz,
            "decay_rate_per_s": self.decay_rate,
            "fidelities": dict(self.fidelities),
            "basis_phases_rad": list(self.phases),
            "local_phase_compensation_rad": list(self.local_phases),
        }


def cz_sequence(rabi, control=0, target=1):
    """pi (control), 2 pi (target), pi (control) on the g1 <-> r transition."""
    t_pi = math.pi / rabi
    return [
        PulseSegment(rabi, t_pi, targets=(control,)),
        PulseSegment(rabi, 2 * t_pi, targets=(target,)),
        PulseSegment(rabi, t_pi, targets=(control,)),
    ]


def _best_local_phases(out_pp):
    """Local Z phases maximising the |++> overlap with the ideal output."""
    target = CZ_IDEAL / 2
    bits = np.array([[0, 0], [0, 1], [1, 0], [1, 1]])

    def overlap(th):
        ph = np.exp(1j * (bits @ th))
        return abs(np.vdot(target, ph * out_pp)) ** 2

    ref = out_pp[0] if abs(out_pp[0]) > 0 else 1.0
    guess = np.array([-np.angle(out_pp[2] / (ref * CZ_IDEAL[2])),
                      -np.angle(out_pp[1] / (ref * CZ_IDEAL[1]))])
    res = minimize(lambda th: -overlap(th), guess, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000})
    th = res.x if -res.fun >= overlap(guess) else guess
    return th, overlap(th)


def simulate_cz_gate(control, target, level, single_rabi=None, distance=None, *,
                     blockade_hz=None, gate_duration=None, decay_rate=None,
                     steps_per_period=STEPS_PER_PERIOD):
    """Simulate the blockade CZ gate between two collective qubits.

    The logical 1 state holds a single F=2 excitation, so the g1 <-> r
    drive runs at the single-atom Rabi frequency ``single_rabi`` (Hz).
    Passing ``gate_duration`` instead sets Omega = 4 pi / T. The blockade
    defaults to the vdW shift of ``level`` at ``distance`` (default: the
    control's site pitch); ``blockade_hz=math.inf`` gives a perfect
    blockade.

    The error is 1 - mean state fidelity over |00>, |01>, |10>, |11>, |++>
    after the best local Z phases. It splits into Rydberg decay (lost
    norm), Rydberg population left at the end, and the remainder, which
    is put down to imperfect blockade.
    """
    if (single_rabi is None) == (gate_duration is None):
        raise ValueError("give exactly one of single_rabi or gate_duration")
    if gate_duration is not None:
        rabi = 4 * math.pi / gate_duration
    else:
        rabi = hz_to_angular(single_rabi)
    if blockade_hz is None:
        blockade_hz = blockade_shift(level, control.site_pitch if distance is None else distance)
    if decay_rate is None:
        decay_rate = level.decay_rate
    blockade = hz_to_angular(blockade_hz) if math.isfinite(blockade_hz) else math.inf

    basis = EnsembleBasis(2, LEVELS[:3])
    seq = cz_sequence(rabi)
    u = propagator(basis, seq, blockade, decay_rate, steps_per_period=steps_per_period)

    logical = basis.logical_indices()
    outputs = [u[:, i] for i in logical]
    plus = sum(outputs) / 2
    outputs.append(plus)

    n_ryd = basis.rydberg_counts() > 0
    fids = {}
    decay = leftover = 0.0
    for lab, idx, out in zip(CZ_INPUT_LABELS, logical + [None], outputs):
        norm2 = float(np.vdot(out, out).real)
        decay += 1 - norm2
        leftover += float(np.sum(abs(out[n_ryd]) ** 2))
        if idx is not None:
            fids[lab] = float(abs(out[idx]) ** 2)
    phases_local, f_pp = _best_local_phases(plus[logical])
    fids["++"] = float(f_pp)

    k = len(CZ_INPUT_LABELS)
    error = 1 - sum(fids.values()) / k
    # without decay the norm drift is integrator error, not decay
    decay = decay / k if decay_rate > 0 else 0.0
    leftover /= k
    diag = np.array([u[i, i] for i in logical])
    ref = np.angle(diag[0])
    phases = tuple(float(np.angle(d) - ref) % (2 * math.pi) for d in diag)
    return GateFidelityReport(
        gate_error=float(error),
        error_breakdown={
            "rydberg_decay": max(0.0, decay),
            "leftover_rydberg_population": max(0.0, leftover),
            "blockade_leakage": max(0.0, error - decay - leftover),
        },
        gate_duration=sum(s.duration for s in seq),
        blockade_hz=float(blockade_hz),
        rabi_hz=rabi / TWO_PI,
        decay_rate=float(decay_rate),
        fidelities=fids,
        phases=phases,
        local_phases=tuple(float(x) for x in phases_local),
    )
