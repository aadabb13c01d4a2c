"""
Core numerical functionality for the DTC toolkit.

This package contains the circuit Hamiltonian and its spectrum, the
lumped-mode model, ZZ analysis, pulse shaping, gate dynamics and
calibration, noise channels, randomized benchmarking and process
tomography.
"""

from dtc_toolkit.core.base import Optimizer, WaveformObjective
from dtc_toolkit.core.optimizer import EvolutionStrategy
from dtc_toolkit.core.circuit_model import (
    anharmonicities,
    build_hamiltonian,
    eigensolve,
    label_states,
    spectrum_scan,
    transition_frequencies,
)
from dtc_toolkit.core.toy_model import (
    derive_toy_params,
    effective_coupling,
    idle_point_estimate,
    potential_surface,
)
from dtc_toolkit.core.zz_analysis import find_idle_point, parameter_search, zz_at, zz_scan
from dtc_toolkit.core.pulse_shaping import apply_distortion, predistort, slepian_unit_pulse
from dtc_toolkit.core.gate_dynamics import (
    average_gate_fidelity,
    cphase_angles,
    cz_fidelity,
    evolve,
    gate_report,
    leakage_of,
)
from dtc_toolkit.core.calibration_optim import (
    CZFidelityObjective,
    Jazz2Objective,
    calibrate_amplitude,
    calibrate_vz,
    fit_jazz,
    optimize_pulse,
)
from dtc_toolkit.core.noise_channels import (
    average_fidelity_of,
    error_budget,
    flux_noise_mc,
    incoherent_error_estimate,
)
from dtc_toolkit.core.clifford import CliffordGroup, build_clifford_group
from dtc_toolkit.core.benchmarking import (
    cz_metrics,
    fit_lrb,
    gate_length_study,
    recursion_survival,
    simulate_rb,
    single_qubit_rb_error,
)
from dtc_toolkit.core.tomography import (
    fidelity_from_ptm,
    ptm_of,
    reconstruct_ptm,
    simulate_qpt,
)

__all__ = [
    # Interfaces
    "Optimizer",
    "WaveformObjective",
    "EvolutionStrategy",
    # Circuit model
    "anharmonicities",
    "build_hamiltonian",
    "eigensolve",
    "label_states",
    "spectrum_scan",
    "transition_frequencies",
    # Lumped-mode model
    "derive_toy_params",
    "effective_coupling",
    "idle_point_estimate",
    "potential_surface",
    # ZZ analysis
    "find_idle_point",
    "parameter_search",
    "zz_at",
    "zz_scan",
    # Pulse shaping
    "apply_distortion",
    "predistort",
    "slepian_unit_pulse",
    # Gate dynamics and calibration
    "average_gate_fidelity",
    "cphase_angles",
    "cz_fidelity",
    "evolve",
    "gate_report",
    "leakage_of",
    "CZFidelityObjective",
    "Jazz2Objective",
    "calibrate_amplitude",
    "calibrate_vz",
    "fit_jazz",
    "optimize_pulse",
    # Noise
    "average_fidelity_of",
    "error_budget",
    "flux_noise_mc",
    "incoherent_error_estimate",
    # Benchmarking
    "CliffordGroup",
    "build_clifford_group",
    "cz_metrics",
    "fit_lrb",
    "gate_length_study",
    "recursion_survival",
    "simulate_rb",
    "single_qubit_rb_error",
    # Tomography
    "fidelity_from_ptm",
    "ptm_of",
    "reconstruct_ptm",
    "simulate_qpt",
]
