"""Search-loop building blocks: uniform preparation, the reflection step,
the iteration driver, and the closed-form success probability.

One search iteration is an oracle application followed by the reflection
about the uniform state. The reflection is realized as H X ... MCZ ... X H
over the input qubits only, which equals the textbook reflection up to a
global phase; all contracts here are on probabilities.
"""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .oracle import PhaseOracle
from .qsim import (
    DEFAULT_MAX_QUBITS,
    GateKind,
    GateOp,
    QuantumState,
    apply_gate,
    new_state,
    probabilities,
)


def prepare_uniform(
    num_qubits: int, max_qubits: int = DEFAULT_MAX_QUBITS
) -> QuantumState:
    """Equal superposition over all basis states of the register."""
    state = new_state(num_qubits, max_qubits=max_qubits)
    for q in range(num_qubits):
        apply_gate(state, GateOp(GateKind.H, q))
    return state


def apply_diffusion(state: QuantumState, input_qubits: Iterable[int]) -> QuantumState:
    """Reflect about the uniform state over the given qubits (global phase free)."""
    qubits = list(input_qubits)
    if not qubits:
        raise ValueError("diffusion needs at least one qubit")
    for q in qubits:
        apply_gate(state, GateOp(GateKind.H, q))
    for q in qubits:
        apply_gate(state, GateOp(GateKind.X, q))
    if len(qubits) == 1:
        apply_gate(state, GateOp(GateKind.Z, qubits[0]))
    else:
        apply_gate(
            state, GateOp(GateKind.MCZ, qubits[-1], frozenset(qubits[:-1]))
        )
    for q in qubits:
        apply_gate(state, GateOp(GateKind.X, q))
    for q in qubits:
        apply_gate(state, GateOp(GateKind.H, q))
    return state


def run_grover(oracle: PhaseOracle, iterations: int) -> QuantumState:
    """Uniform preparation followed by ``iterations`` (oracle, reflection) rounds.

    Ancilla qubits of a gate-backend oracle start in |0> and are excluded
    from the preparation and the reflection.
    """
    if iterations < 0:
        raise ValueError("iteration count must be >= 0")
    state = new_state(oracle.total_qubits)
    inputs = range(oracle.n_inputs)
    for q in inputs:
        apply_gate(state, GateOp(GateKind.H, q))
    for _ in range(iterations):
        oracle.apply(state)
        apply_diffusion(state, inputs)
    return state


def input_probabilities(state: QuantumState, n_inputs: int) -> np.ndarray:
    """Measurement probabilities marginalized onto the input register."""
    probs = probabilities(state)
    if state.num_qubits == n_inputs:
        return probs
    return probs.reshape(1 << n_inputs, -1).sum(axis=1)


def success_probability(iterations: int, num_marked: int, num_states: int) -> float:
    """Probability of measuring a marked state after the given iterations.

    Equals sin^2((2g+1) * arcsin(sqrt(c/N))) for g iterations, c marked
    states out of N.
    """
    if num_states < 1:
        raise ValueError("num_states must be >= 1")
    if not 0 <= num_marked <= num_states:
        raise ValueError(f"num_marked {num_marked} out of range 0..{num_states}")
    theta = math.asin(math.sqrt(num_marked / num_states))
    return math.sin((2 * iterations + 1) * theta) ** 2


def initial_iterations(num_states: int) -> int:
    """Iteration count to start the descending schedule from.

    This is the near-optimal count for a single marked state,
    floor(pi / (4 * arcsin(sqrt(1/N))) - 1/2), floored at 1.
    """
    if num_states < 2:
        raise ValueError("num_states must be >= 2")
    theta_one = math.asin(math.sqrt(1.0 / num_states))
    return max(1, math.floor(math.pi / (4.0 * theta_one) - 0.5))
