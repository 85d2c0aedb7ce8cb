"""Entangling gates between distant neutral atoms via weak van der Waals
Rydberg interactions: pulse-sequence design, exact state-vector
simulation, decay budget, and position-fluctuation-averaged fidelity."""

from .constants import C6_97S, LIFETIME_97S_4K_MS, LIFETIME_97S_300K_MS, MHZ
from .dynamics import (
    Level,
    basis_state,
    build_hamiltonian,
    computational_states,
    evolve,
    exponentiate,
)
from .errors import ConfigError, NumericError
from .gates import extract_gate_matrix, ideal_cnot, ideal_cz, pedersen_fidelity
from .geometry import QubitGeometry, VdwModel, distance, separation_for_interaction, vdw_interaction
from .noise import (
    FidelityReport,
    FidelityTable,
    GridSpec,
    InflatedSigmas,
    NoiseConfig,
    decay_error,
    grid_average_fidelity,
    grid_convergence,
    inflate_sigmas,
    monte_carlo_average_fidelity,
)
from .protocol import (
    GateProtocol,
    ProtocolParams,
    Pulse,
    build_cnot_protocol,
    build_cz_protocol,
    gate_duration,
    hyperfine_leakage_estimate,
    phase_from_interaction,
    rydberg_exposure,
    solve_interaction_for_phase,
)

__version__ = "0.1.0"
