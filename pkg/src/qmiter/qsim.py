"""Dense statevector simulation of the small gate set the search needs.

Conventions:
  * qubit 0 is the most significant bit of the basis-state index, so a
    register holding a circuit assignment has basis index equal to the
    assignment's numeric value;
  * amplitudes are numpy complex128 and gates act in place;
  * the default register cap is 26 qubits (1 GiB of amplitudes).

Sampling draws basis states by inverse transform over the probability
vector with a counter-based Philox generator, so a (state, shots, seed)
triple always reproduces the same histogram. Seeds for sub-tasks are
derived from a master seed with the SplitMix64 finalizer so parallel or
repeated runs stay reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

DEFAULT_MAX_QUBITS = 26

_SQRT_HALF = 1.0 / np.sqrt(2.0)
_MASK64 = (1 << 64) - 1

# SplitMix64 constants (Steele et al.), used only for seed derivation.
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_SPLITMIX_MIX1 = 0xBF58476D1CE4E5B9
_SPLITMIX_MIX2 = 0x94D049BB133111EB


class GateKind(Enum):
    H = "h"
    X = "x"
    Z = "z"
    CX = "cx"
    MCX = "mcx"
    MCZ = "mcz"


_CONTROLLED = {GateKind.CX, GateKind.MCX, GateKind.MCZ}


@dataclass(frozen=True)
class GateOp:
    """One gate application: kind, target qubit, optional control qubits."""

    kind: GateKind
    target: int
    controls: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "controls", frozenset(self.controls))
        if self.target < 0 or any(c < 0 for c in self.controls):
            raise ValueError("qubit indices must be non-negative")
        if self.target in self.controls:
            raise ValueError(f"target {self.target} also listed as control")
        if self.kind in _CONTROLLED:
            if not self.controls:
                raise ValueError(f"{self.kind.name} needs at least one control")
            if self.kind is GateKind.CX and len(self.controls) != 1:
                raise ValueError("CX takes exactly one control")
        elif self.controls:
            raise ValueError(f"{self.kind.name} takes no controls")


class QuantumState:
    """A register of ``num_qubits`` qubits as 2^q complex amplitudes."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits: int, amplitudes: np.ndarray):
        self.num_qubits = num_qubits
        self.amplitudes = amplitudes

    def copy(self) -> "QuantumState":
        return QuantumState(self.num_qubits, self.amplitudes.copy())


def new_state(num_qubits: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> QuantumState:
    """The all-zeros state |0...0>."""
    if num_qubits < 1:
        raise ValueError("need at least one qubit")
    if num_qubits > max_qubits:
        required = (1 << num_qubits) * 16
        raise ValueError(
            f"{num_qubits} qubits exceeds the {max_qubits}-qubit limit "
            f"({required / 2**30:.1f} GiB of amplitudes required)"
        )
    amplitudes = np.zeros(1 << num_qubits, dtype=np.complex128)
    amplitudes[0] = 1.0
    return QuantumState(num_qubits, amplitudes)


def apply_gate(state: QuantumState, op: GateOp) -> QuantumState:
    """Apply one gate in place; returns the state for chaining."""
    q = state.num_qubits
    if op.target >= q or any(c >= q for c in op.controls):
        raise ValueError(f"qubit index out of range for {q}-qubit state: {op}")

    psi = state.amplitudes.reshape((2,) * q)
    sel: list = [slice(None)] * q
    for ctl in op.controls:
        sel[ctl] = 1

    kind = op.kind
    if kind is GateKind.H:
        s0, s1 = list(sel), list(sel)
        s0[op.target], s1[op.target] = 0, 1
        lo = psi[tuple(s0)].copy()
        hi = psi[tuple(s1)]
        psi[tuple(s0)] = (lo + hi) * _SQRT_HALF
        psi[tuple(s1)] = (lo - hi) * _SQRT_HALF
    elif kind in (GateKind.X, GateKind.CX, GateKind.MCX):
        s0, s1 = list(sel), list(sel)
        s0[op.target], s1[op.target] = 0, 1
        tmp = psi[tuple(s0)].copy()
        psi[tuple(s0)] = psi[tuple(s1)]
        psi[tuple(s1)] = tmp
    else:  # Z, MCZ
        sel[op.target] = 1
        psi[tuple(sel)] *= -1.0
    return state


def probabilities(state: QuantumState) -> np.ndarray:
    """Per-basis-state measurement probabilities |amplitude|^2."""
    amps = state.amplitudes
    return (amps.real * amps.real + amps.imag * amps.imag)


@dataclass(frozen=True)
class MeasurementHistogram:
    """Shot counts per measured basis-state index; zero counts are omitted."""

    shots: int
    counts: dict[int, int]

    @property
    def measured_count(self) -> int:
        return len(self.counts)


def sample(state: QuantumState, shots: int, seed: int) -> MeasurementHistogram:
    """Draw ``shots`` independent basis-state measurements, reproducibly."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = probabilities(state)
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0  # guards searchsorted against rounding at the top end
    rng = np.random.Generator(np.random.Philox(key=seed & _MASK64))
    draws = rng.random(shots)
    indices = np.searchsorted(cdf, draws, side="right")
    values, counts = np.unique(indices, return_counts=True)
    return MeasurementHistogram(
        shots=shots,
        counts={int(v): int(c) for v, c in zip(values, counts)},
    )


def derive_seed(master_seed: int, index: int) -> int:
    """Deterministic 64-bit sub-seed for task ``index`` under a master seed."""
    x = (master_seed + (index + 1) * _SPLITMIX_GAMMA) & _MASK64
    x = ((x ^ (x >> 30)) * _SPLITMIX_MIX1) & _MASK64
    x = ((x ^ (x >> 27)) * _SPLITMIX_MIX2) & _MASK64
    return x ^ (x >> 31)
