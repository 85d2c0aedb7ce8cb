"""Gate-matrix extraction and average-fidelity scoring.

The simulated gate is summarized by the 4x4 matrix of computational
basis amplitudes after the full pulse sequence.  Population left in
Rydberg levels makes the matrix sub-unitary; that leakage is kept and
scored by the average-fidelity formula of Pedersen, Moller and Molmer,
Phys. Lett. A 367, 47 (2007), which is valid for non-unitary actuals.
"""

from __future__ import annotations

import numpy as np

from . import dynamics
from .protocol import GateProtocol

__all__ = ["extract_gate_matrix", "ideal_cz", "ideal_cnot", "ideal_gate", "pedersen_fidelity"]


def ideal_cz(theta: float) -> np.ndarray:
    """Target controlled-phase matrix diag(1, 1, 1, e^{i*theta})."""
    return np.diag([1.0, 1.0, 1.0, np.exp(1j * theta)]).astype(complex)


def ideal_cnot() -> np.ndarray:
    """Target CNOT matrix (|10> <-> |11| swap)."""
    gate = np.zeros((4, 4), dtype=complex)
    gate[0, 0] = gate[1, 1] = gate[2, 3] = gate[3, 2] = 1.0
    return gate


def ideal_gate(protocol: GateProtocol) -> np.ndarray:
    """The target matrix a protocol was designed for."""
    return ideal_cnot() if protocol.kind == "cnot" else ideal_cz(protocol.theta)


def extract_gate_matrix(
    protocol: GateProtocol, interaction: float | None = None
) -> np.ndarray:
    """Simulate the sequence and project it onto the computational basis.

    Each qubit basis state is propagated through the full 9-dimensional
    dynamics; column j of the result holds the computational-basis
    amplitudes of the evolved state j.  A global phase is removed by
    making the |00> -> |00> element real and positive.

    Parameters
    ----------
    protocol : GateProtocol
        Pulse sequence to simulate.
    interaction : float, optional
        Pair interaction in rad/us; defaults to the protocol's design
        value.  Pulse durations are never rescaled, so an off-design
        value produces exactly the error a fluctuating atom spacing
        would.

    Returns
    -------
    ndarray
        Complex matrix of shape (4, 4), sub-unitary if population
        leaked out of the qubit subspace.
    """
    unitaries = [
        dynamics.exponentiate(h, duration)
        for h, duration in protocol.segments(interaction)
    ]
    basis = dynamics.computational_states()
    gate = np.empty((4, 4), dtype=complex)
    for j, state0 in enumerate(basis):
        final = dynamics.evolve(state0, unitaries)
        for i, bra in enumerate(basis):
            gate[i, j] = np.vdot(bra, final)
    anchor = gate[0, 0]
    if abs(anchor) > 1e-12:
        gate *= abs(anchor) / anchor
    return gate


def pedersen_fidelity(actual: np.ndarray, ideal: np.ndarray) -> float:
    """Average gate fidelity [|Tr(U^d A)|^2 + Tr(U^d A A^d U)] / 20.

    ``ideal`` (U) must be unitary; ``actual`` (A) may be any 4x4
    contraction.  Equals 1 exactly when A matches U up to a global
    phase, and is insensitive to that phase.
    """
    actual = np.asarray(actual, dtype=complex)
    ideal = np.asarray(ideal, dtype=complex)
    if actual.shape != (4, 4) or ideal.shape != (4, 4):
        raise ValueError("gate matrices must be 4x4")
    overlap = ideal.conj().T @ actual
    trace = np.trace(overlap)
    purity = np.trace(overlap @ overlap.conj().T).real
    return float((abs(trace) ** 2 + purity) / 20.0)
