"""Design budgets and small quantum simulations for an atom-chip quantum processor.

Rb-87 ensembles held in optical traps between waveguide facets, collectively
encoded hyperfine qubits and Rydberg-blockade gates.
"""

from .budget import DecoherenceBudget, decoherence_budget, gate_to_coherence_ratio
from .config import ConfigError, ScenarioConfig
from .detection import (CollectionGeometry, ProbeSetup, atom_number_uncertainty,
                        cavity_enhancement, effective_area, fluorescence_readout,
                        scattering_cross_section)
from .gates import (build_hadamard_pulse, differential_light_shift, minimum_gate_error,
                    phase_gate_budget)
from .optimize import optimize_cz_duration
from .report import DesignReport, ReportStageError, assemble_report
from .rydberg import (CollectiveQubit, RydbergScalingModel, blockade_condition, blockade_shift,
                      collective_rabi, rydberg_level, two_photon_rabi)
from .simulate import (EnsembleBasis, EnsembleState, PulseSegment, simulate_cz_gate,
                       simulate_hadamard, simulate_pulse_sequence)
from .species import load_species
from .traps import (DipoleTrapSpec, MagneticTrapSpec, dipole_trap, loading_estimate,
                    thermal_cloud)
from .units import CONSTANTS

__version__ = "0.1.0"
