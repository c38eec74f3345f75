"""End-to-end design report: runs every model stage and checks each claim.

Each stage yields claim rows keyed ``<stage>.<name>``. Rows carry the
computed value in a display unit, the published figure where one exists,
a tolerance rule and a status of ``pass``, ``fail`` or ``advisory``.
"""

from dataclasses import dataclass
import csv
from functools import cached_property
import io
import json
import math

import numpy as np

from . import detection as det
from .budget import decoherence_budget, gate_to_coherence_ratio
from .config import ScenarioConfig
from .gates import build_hadamard_pulse, differential_light_shift, minimum_gate_error, \
    phase_gate_budget
from .optimize import optimize_cz_duration
from .rydberg import (CollectiveQubit, RydbergScalingModel, blockade_condition, blockade_shift,
                      collective_rabi, rydberg_level)
from .simulate import simulate_cz_gate, simulate_hadamard
from .species import load_species
from .traps import DipoleTrapSpec, MagneticTrapSpec, dipole_trap, loading_estimate, thermal_cloud
from .units import hz_to_angular

REPORT_VERSION = 1
STATUSES = ("pass", "fail", "advisory")


def canonical(x):
    """9-significant-digit decimal string; the basis of report determinism."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = f"{x:.9g}"
    return "0" if s == "-0" else s


# -- tolerance rules -------------------------------------------------------

@dataclass(frozen=True)
class Check:
    kind: str          # rel, range, min, max, factor, record
    a: float = 0.0
    b: float = 0.0

    def holds(self, value, target=None):
        if self.kind == "record":
            return True
        if value is None or not math.isfinite(value):
            return False
        if self.kind == "rel":
            return abs(value - target) <= self.a * abs(target)
        if self.kind == "range":
            return self.a <= value <= self.b
        if self.kind == "min":
            return value >= self.a
        if self.kind == "max":
            return value <= self.a
        if self.kind == "factor":
            return target / self.a <= value <= target * self.a
        raise ValueError(self.kind)

    def describe(self):
        if self.kind == "rel":
            return "exact" if self.a <= 1e-9 else f"+/-{canonical(self.a * 100)}%"
        if self.kind == "range":
            return f"[{canonical(self.a)}, {canonical(self.b)}]"
        if self.kind == "min":
            return f">= {canonical(self.a)}"
        if self.kind == "max":
            return f"<= {canonical(self.a)}"
        if self.kind == "factor":
            return f"within x{canonical(self.a)}"
        return "recorded"


EXACT = Check("rel", 1e-9)
RECORD = Check("record")


@dataclass(frozen=True)
class ClaimRow:
    claim_id: str
    value: float | None
    unit: str
    published_value: float | None
    reference: str
    tolerance: str
    status: str
    provenance: str
    note: str = ""

    def to_dict(self):
        return {
            "claim_id": self.claim_id,
            "value": canonical(self.value),
            "unit": self.unit,
            "published_value": canonical(self.published_value),
            "reference": self.reference,
            "tolerance": self.tolerance,
            "status": self.status,
            "provenance": self.provenance,
            "note": self.note,
        }


def claim(claim_id, value, unit, reference, check=RECORD, published=None, target=None,
          advisory=None):
    """Build a row. ``target`` defaults to the published value."""
    target = published if target is None else target
    ok = check.holds(value, target)
    status = "pass" if ok else "fail"
    if ok and advisory:
        status = "advisory"
    return ClaimRow(claim_id, None if value is None else float(value), unit,
                    None if published is None else float(published), reference,
                    check.describe(), status, "published" if published is not None else "derived",
                    advisory or "")


class ReportStageError(RuntimeError):
    def __init__(self, stage, claims, cause):
        self.stage = stage
        self.claims = tuple(claims)
        self.cause = cause
        super().__init__(f"stage '{stage}' failed, blocking claim {claims[0]}"
                         f"{' (+%d more)' % (len(claims) - 1) if len(claims) > 1 else ''}: {cause}")


# -- the shared model state ------------------------------------------------

class Scenario:
    """Lazily evaluated model objects for one config."""

    def __init__(self, config, seed=None):
        self.cfg = config
        self.seed = config.integer("monte_carlo.seed") if seed is None else int(seed)

    @cached_property
    def species(self):
        return load_species(self.cfg.raw("species.source"), self.cfg.raw("species.isat_convention"))

    @cached_property
    def cloud(self):
        c = self.cfg
        trap = MagneticTrapSpec.from_hz(c.si("cloud.axial_frequency"), c.si("cloud.radial_frequency"))
        return thermal_cloud(trap, c.si("cloud.atoms"), c.si("cloud.temperature"), self.species)

    def trap_spec(self, contrast=None):
        c = self.cfg
        if contrast is None:
            contrast = c.si("dipole_trap.interference_contrast")
        return DipoleTrapSpec(
            beam_power_each=c.si("dipole_trap.beam_power_each"),
            wavelength=c.si("dipole_trap.wavelength"),
            mode_field_radius=c.si("chip.mode_field_radius"),
            interference_contrast=contrast,
            polarizability_model=c.raw("dipole_trap.polarizability_model"),
            facet_separation=c.si("chip.trench_width"),
        )

    @cached_property
    def trap(self):
        return dipole_trap(self.trap_spec(), self.species)

    @cached_property
    def loading(self):
        return loading_estimate(self.cloud, self.trap, self.cfg.si("dipole_trap.loading_truncation"),
                                self.cfg.si("chip.trench_width"))

    @cached_property
    def probe(self):
        c = self.cfg
        return det.ProbeSetup(
            beam_area=det.effective_area(c.si("chip.mode_field_radius")),
            cross_section=det.scattering_cross_section(self.species.d2),
            n_scattered_per_atom=c.si("probe.scattered_photons_per_atom"),
            detection_efficiency=c.si("probe.detection_efficiency"),
        )

    @cached_property
    def rydberg_model(self):
        c = self.cfg
        return RydbergScalingModel.calibrated(
            shift=c.si("rydberg.anchor_shift"), distance=c.si("rydberg.anchor_distance"),
            n_anchor=c.integer("rydberg.anchor_n"), lifetime=c.si("rydberg.anchor_lifetime"))

    @cached_property
    def gate_level(self):
        return rydberg_level(self.rydberg_model, self.cfg.integer("rydberg.principal_n"))

    @cached_property
    def hadamard_level(self):
        return rydberg_level(self.rydberg_model, self.cfg.integer("gates.hadamard_principal_n"))

    @cached_property
    def qubit(self):
        c = self.cfg
        return CollectiveQubit(c.integer("qubit.atoms"), extent=c.si("qubit.extent"),
                               site_pitch=c.si("rydberg.gate_distance"))

    @cached_property
    def intra_blockade_hz(self):
        """Blockade inside one ensemble: the Hadamard level across the qubit extent."""
        return blockade_shift(self.hadamard_level, self.qubit.extent)

    @cached_property
    def phase_gate(self):
        c = self.cfg
        shift = differential_light_shift(c.si("gates.phase_gate_power"),
                                         c.si("gates.phase_gate_detuning"),
                                         c.si("chip.mode_field_radius"), self.species)
        budget = phase_gate_budget(c.si("gates.phase_gate_angle"), shift,
                                   c.si("gates.phase_gate_detuning"), self.species)
        return shift, budget

    @cached_property
    def hadamard(self):
        pulse = build_hadamard_pulse(self.qubit, self.cfg.si("gates.single_rabi"))
        return pulse, simulate_hadamard(pulse, hz_to_angular(self.intra_blockade_hz),
                                        self.hadamard_level)

    @cached_property
    def cz_blockade_hz(self):
        b = self.cfg.si("cz.blockade")
        return blockade_shift(self.gate_level, self.qubit.site_pitch) if b is None else b

    @cached_property
    def cz_fixed(self):
        return simulate_cz_gate(self.qubit, self.qubit, self.gate_level,
                                blockade_hz=self.cz_blockade_hz,
                                gate_duration=self.cfg.si("cz.gate_duration"))

    def cz_bounds(self):
        t = self.cfg.si("cz.gate_duration")
        if self.gate_level.decay_rate > 0 and math.isfinite(self.cz_blockade_hz):
            return None
        return (t / 10, t * 10)

    @cached_property
    def cz_optimum(self):
        return optimize_cz_duration(self.qubit, self.qubit, self.gate_level,
                                    blockade_hz=self.cz_blockade_hz, bounds=self.cz_bounds(),
                                    grid_points=self.cfg.integer("cz.grid_points"))

    @cached_property
    def decoherence(self):
        c = self.cfg
        entries = {name: c.si(f"decoherence.{name}") for name in
                   ("surface_spin_flip", "trap_light_scattering", "ac_stark_inhomogeneity")}
        entries["extra"] = c.extra_rates()
        trap = self.trap if entries["trap_light_scattering"] is None else None
        return decoherence_budget(entries, trap)


# -- stages ----------------------------------------------------------------

def stage_config(s):
    c = s.cfg
    yield claim("config.magnetic_field", c.si("chip.magnetic_field") / 1e-4, "G",
                "qubit magnetic-field working point across the trench", EXACT, published=3.23)
    yield claim("config.channels", c.si("chip.channels"), "1",
                "number of waveguides on the chip", EXACT, published=12)


def stage_cloud(s):
    cl = s.cloud
    yield claim("cloud.length_1e2", cl.half_length_1e2 * 1e6, "um",
                "1/e^2 length of the magnetically trapped cloud", Check("rel", 0.05), published=220)
    yield claim("cloud.sigma_radial", cl.sigma_radial * 1e6, "um",
                "transverse rms size of the cloud", Check("rel", 0.05), published=2.2)
    yield claim("cloud.peak_linear_density", cl.peak_linear_density * 1e-6, "1/um",
                "central linear density of the cloud", Check("rel", 0.05), published=360)


def stage_trap(s):
    t0 = dipole_trap(s.trap_spec(0.0), s.species)
    t1 = dipole_trap(s.trap_spec(1.0), s.species)
    band = Check("rel", 0.35)
    yield claim("trap.axial_freq_contrast0", t0.axial_freq_hz / 1e3, "kHz",
                "axial frequency, two beams without interference", band, published=0.3)
    yield claim("trap.radial_freq_contrast0", t0.radial_freq_hz / 1e3, "kHz",
                "radial frequency, two beams without interference", band, published=6.6)
    yield claim("trap.axial_freq_contrast1", t1.axial_freq_hz / 1e3, "kHz",
                "axial frequency in the standing wave", band, published=120)
    yield claim("trap.radial_freq_contrast1", t1.radial_freq_hz / 1e3, "kHz",
                "radial frequency in the standing wave", band, published=9)
    yield claim("trap.scattering_rate", s.trap.photon_scattering_rate, "1/s",
                "trap-light photon scattering rate per atom", Check("max", 1.0), published=1.0)
    yield claim("trap.depth", s.trap.depth_kelvin * 1e6, "uK",
                "dipole trap depth at the configured contrast")


def stage_loading(s):
    yield claim("loading.atoms", s.loading.atoms, "1",
                "atoms loaded into the dipole trap (factor-2 band)",
                Check("range", 750, 3000), published=1500)
    yield claim("loading.three_body_losses", None, "", "collisional losses during loading",
                advisory="three-body loss is not modelled; the loaded number is an upper estimate")


def stage_detection(s):
    c = s.cfg
    p = s.probe
    line = s.species.d2
    yield claim("detection.cross_section", p.cross_section * 1e12, "um^2",
                "resonant scattering cross-section against 3 lambda^2 / 2 pi", Check("rel", 0.01),
                target=3 * line.wavelength**2 / (2 * math.pi) * 1e12)
    yield claim("detection.effective_area", p.beam_area * 1e12, "um^2", "guided-mode area pi w^2 / 2")

    r = c.si("probe.mirror_reflectivity")
    readout = det.cavity_enhancement(p, r, expected_atoms=1)
    gain = 1 / math.sqrt(1 - r)
    published, ref = None, "single-atom absorption SNR with mirrors of reflectivity R"
    if r == 0:
        published, ref = 1.0, "single-atom absorption SNR"
    elif abs(r - 0.9) < 1e-12:
        published, ref = 3.0, "single-atom absorption SNR with 90% mirrors"
    yield claim("detection.snr_single_atom", readout.snr_single_atom, "1", ref,
                Check("range", 0.7 * gain, 1.3 * gain), published=published)

    mc = det.simulate_absorption_readout(p, 1.0, trials=c.integer("monte_carlo.trials"), rng=s.seed)
    yield claim("detection.monte_carlo_sigma_n", mc, "atoms",
                "shot-noise Monte-Carlo of the atom-number uncertainty", Check("rel", 0.03),
                target=det.atom_number_uncertainty(p).sigma_n_atoms)

    w, lam, trench = c.si("chip.mode_field_radius"), line.wavelength, c.si("chip.trench_width")
    yield claim("detection.rayleigh_length", det.rayleigh_length(w, lam) * 1e6, "um",
                "Rayleigh length of the guided mode in free space", Check("range", 19, 21),
                published=20)
    cav = det.plane_cavity_effective_reflectivity(w, lam, trench)
    yield claim("detection.plane_cavity_reflectivity", cav.reflectivity, "1",
                "diffraction-limited plane-cavity reflectivity across the trench",
                advisory=cav.advisory)

    geom = det.CollectionGeometry(c.si("fluorescence.lens_diameter"),
                                  c.si("fluorescence.lens_distance"), c.si("fluorescence.camera_qe"))
    counts = det.fluorescence_readout(geom, c.si("fluorescence.scattering_events"),
                                      c.si("fluorescence.collection_fraction"))
    yield claim("detection.fluorescence_counts", counts, "1",
                "camera counts from fluorescence before depumping", EXACT, published=30)
    yield claim("detection.collection_fraction", geom.collection_fraction * 100, "%",
                "geometric collection fraction of the imaging lens", Check("range", 0.6, 1.1),
                published=1)


def stage_rydberg(s):
    c = s.cfg
    anchor = rydberg_level(s.rydberg_model, c.integer("rydberg.anchor_n"))
    yield claim("rydberg.anchor_shift", blockade_shift(anchor, c.si("rydberg.anchor_distance")) / 1e6,
                "MHz", "blockade shift of the anchor level (calibration)", EXACT, published=90)
    yield claim("rydberg.gate_shift", blockade_shift(s.gate_level, c.si("rydberg.gate_distance")) / 1e6,
                "MHz", "blockade shift between neighbouring qubit sites", Check("min", 50),
                published=50)
    yield claim("rydberg.gate_level_lifetime", s.gate_level.lifetime * 1e3, "ms",
                "radiative lifetime of the gate level (n^3 scaling)")
    rabi_n = collective_rabi(c.si("gates.single_rabi"), s.qubit.atom_count)
    yield claim("rydberg.collective_rabi", rabi_n / 1e6, "MHz", "sqrt(N)-enhanced Rabi frequency")
    linewidth = 1 / (2 * math.pi * s.hadamard_level.lifetime)
    verdict = blockade_condition(s.intra_blockade_hz, rabi_n, linewidth)
    yield claim("rydberg.blockade_ratio", verdict.ratio, "1",
                "intra-ensemble blockade shift over the excitation linewidth",
                advisory=None if verdict.blockaded else
                f"{verdict.verdict} at threshold {canonical(verdict.threshold)}")


def stage_gates(s):
    shift, pg = s.phase_gate
    yield claim("gates.phase_gate_shift", abs(shift) / 1e6, "MHz",
                "differential light shift of the phase-gate beam", Check("factor", 2), published=0.24)
    yield claim("gates.phase_gate_duration", pg.duration * 1e6, "us",
                "phase-gate duration", Check("range", 1.0, 1.1), published=1.0)
    yield claim("gates.phase_gate_photons", pg.scattered_photons_per_atom, "1",
                "photons scattered per atom per phase gate", Check("factor", 3), published=0.0015)
    pulse, had = s.hadamard
    yield claim("gates.hadamard_pulse_duration", pulse.duration * 1e9, "ns",
                "closed-form collective pi/2 time")
    yield claim("gates.hadamard_duration", had.completion_time * 1e9, "ns",
                "simulated collective pi/2 completion time", Check("range", 20, 28), published=25)
    oracle = (pulse.rabi / (2 * hz_to_angular(s.intra_blockade_hz))) ** 2
    yield claim("gates.hadamard_double_excitation", had.double_excitation, "1",
                "double-excitation leakage during the collective pi/2 pulse",
                Check("max", 1.5 * oracle))


def stage_cz(s):
    band = Check("range", 1e-4, 1e-2)
    yield claim("cz.blockade", s.cz_blockade_hz / 1e6, "MHz", "blockade used for the CZ gate")
    yield claim("cz.error_fixed_duration", s.cz_fixed.gate_error, "1",
                "simulated CZ error at the configured gate time", band)
    opt = s.cz_optimum
    yield claim("cz.error_optimized", opt.error, "1",
                "simulated CZ error at the optimised gate time", band,
                advisory=opt.advisory)
    yield claim("cz.optimal_duration", opt.duration * 1e6, "us", "optimised CZ gate time")
    formula = minimum_gate_error(s.cz_blockade_hz, s.gate_level.lifetime)
    yield claim("cz.error_formula", formula, "1",
                "closed-form optimised blockade-gate error 3 (B tau)^(-2/3)", published=0.01,
                advisory=(f"published headline not asserted; simulated optimum "
                          f"{canonical(opt.error)} vs formula {canonical(formula)}"))


def stage_budget(s):
    b = s.decoherence
    yield claim("budget.total_rate", b.total_rate, "1/s", "sum of decoherence rates", EXACT,
                target=math.fsum(r for _, r in b.entries()))
    yield claim("budget.coherence_time", b.coherence_time, "s", "qubit coherence time",
                advisory=b.advisory)
    yield claim("budget.log10_ratio_phase_gate", gate_to_coherence_ratio(b, s.phase_gate[1].duration),
                "1", "orders of magnitude between coherence time and phase-gate time",
                Check("range", 5, 6), published=5.5)
    yield claim("budget.log10_ratio_hadamard",
                gate_to_coherence_ratio(b, s.hadamard[1].completion_time), "1",
                "orders of magnitude between coherence time and Hadamard time")
    yield claim("budget.log10_ratio_cz", gate_to_coherence_ratio(b, s.cz_optimum.duration), "1",
                "orders of magnitude between coherence time and optimised CZ time")
    yield claim("budget.hyperfine_coherence_cap", b.coherence_time, "s",
                "bare hyperfine coherence of several seconds",
                advisory="bare hyperfine coherence of a few seconds caps any longer budget value")


STAGES = {
    "config": stage_config,
    "cloud": stage_cloud,
    "trap": stage_trap,
    "loading": stage_loading,
    "detection": stage_detection,
    "rydberg": stage_rydberg,
    "gates": stage_gates,
    "cz": stage_cz,
    "budget": stage_budget,
}

CLAIMS = {
    "config": ("config.magnetic_field", "config.channels"),
    "cloud": ("cloud.length_1e2", "cloud.sigma_radial", "cloud.peak_linear_density"),
    "trap": ("trap.axial_freq_contrast0", "trap.radial_freq_contrast0", "trap.axial_freq_contrast1",
             "trap.radial_freq_contrast1", "trap.scattering_rate", "trap.depth"),
    "loading": ("loading.atoms", "loading.three_body_losses"),
    "detection": ("detection.cross_section", "detection.effective_area",
                  "detection.snr_single_atom", "detection.monte_carlo_sigma_n",
                  "detection.rayleigh_length", "detection.plane_cavity_reflectivity",
                  "detection.fluorescence_counts", "detection.collection_fraction"),
    "rydberg": ("rydberg.anchor_shift", "rydberg.gate_shift", "rydberg.gate_level_lifetime",
                "rydberg.collective_rabi", "rydberg.blockade_ratio"),
    "gates": ("gates.phase_gate_shift", "gates.phase_gate_duration", "gates.phase_gate_photons",
              "gates.hadamard_pulse_duration", "gates.hadamard_duration",
              "gates.hadamard_double_excitation"),
    "cz": ("cz.blockade", "cz.error_fixed_duration", "cz.error_optimized", "cz.optimal_duration",
           "cz.error_formula"),
    "budget": ("budget.total_rate", "budget.coherence_time", "budget.log10_ratio_phase_gate",
               "budget.log10_ratio_hadamard", "budget.log10_ratio_cz",
               "budget.hyperfine_coherence_cap"),
}


def stage_of(claim_id):
    stage = claim_id.split(".", 1)[0]
    if stage not in CLAIMS or claim_id not in CLAIMS[stage]:
        raise KeyError(f"unknown claim identifier {claim_id!r}")
    return stage


def run_stage(scenario, stage):
    try:
        with np.errstate(all="ignore"):
            return list(STAGES[stage](scenario))
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        raise ReportStageError(stage, CLAIMS[stage], exc) from exc


# -- the report ------------------------------------------------------------

@dataclass(frozen=True)
class DesignReport:
    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(sorted(self.rows, key=lambda r: r.claim_id)))

    def __getitem__(self, claim_id):
        for row in self.rows:
            if row.claim_id == claim_id:
                return row
        raise KeyError(claim_id)

    @property
    def counts(self):
        return {s: sum(r.status == s for r in self.rows) for s in STATUSES}

    @property
    def failed(self):
        return [r for r in self.rows if r.status == "fail"]

    def to_json(self):
        doc = {"report_version": REPORT_VERSION, "summary": self.counts,
               "rows": [r.to_dict() for r in self.rows]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        fields = list(ClaimRow.__dataclass_fields__)
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(r.to_dict())
        return buf.getvalue()

    def to_text(self):
        cols = ("claim_id", "value", "unit", "published_value", "tolerance", "status", "provenance")
        table = [cols] + [tuple(r.to_dict()[c] or "-" for c in cols) for r in self.rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
        lines = ["  ".join(cell.ljust(wd) for cell, wd in zip(row, widths)).rstrip()
                 for row in table]
        lines.insert(1, "  ".join("-" * wd for wd in widths))
        notes = [f"  {r.claim_id}: {r.note}" for r in self.rows if r.note]
        c = self.counts
        lines += ["", f"{len(self.rows)} claims: {c['pass']} pass, {c['fail']} fail, "
                      f"{c['advisory']} advisory"]
        if notes:
            lines += ["", "notes:"] + notes
        return "\n".join(lines) + "\n"

    def render(self, fmt):
        return {"txt": self.to_text, "json": self.to_json, "csv": self.to_csv}[fmt]()


def assemble_report(config=None, seed=None, stages=None):
    """Run the pipeline (all stages, or the named subset) and collect the claim rows.

    A model rejection raises :class:`ReportStageError` naming the blocked claims.
    """
    if config is None:
        config = ScenarioConfig.default()
    scenario = Scenario(config, seed)
    rows = []
    for stage in (STAGES if stages is None else stages):
        rows.extend(run_stage(scenario, stage))
    return DesignReport(tuple(rows))


def evaluate_claim(config, claim_id, seed=None):
    """Value of a single claim, running only the stage that produces it."""
    return assemble_report(config, seed, stages=[stage_of(claim_id)])[claim_id].value
