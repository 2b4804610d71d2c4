"""Phase oracles: flip the sign of amplitudes at distinguishing assignments.

Two interchangeable backends:

  * SEMANTIC - negates amplitudes through a precomputed marked-state mask.
    Needs only the input qubits, so it is the default execution path.
  * GATE - a reversible compute/phase/uncompute program: every gate of the
    combined miter circuit writes into a fresh ancilla, the single output
    is copied onto a result qubit, a Z on the result injects the phase,
    and the whole computation is undone so ancillas end in |0>.

Qubit layout for the GATE backend: inputs 0..n-1, one ancilla per combined
gate in declaration order, then the result qubit. Reversible realizations
per gate kind (target is the gate's ancilla):

    AND    MCX(operands)
    NAND   MCX(operands), X target
    NOR    X operands, MCX, X operands
    OR     X operands, MCX, X operands, X target
    XOR    CX per operand occurrence
    XNOR   CX per operand occurrence, X target
    BUF    CX
    NOT    CX, X target
    ONEHOT one X-conjugated MCX per eligible operand (disjoint minterms)

AND/OR-family realizations dedupe repeated operand signals (idempotent);
XOR counts occurrences (parity); ONEHOT only emits minterms for signals
that occur exactly once, which preserves its occurrence-count semantics.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .miter import MiterInstance, enumerate_counterexamples
from .netlist import assignment_to_index, truth_table
from .qsim import DEFAULT_MAX_QUBITS, GateKind, GateOp, QuantumState, apply_gate


class Backend(Enum):
    SEMANTIC = "semantic"
    GATE = "gate"


@dataclass(frozen=True)
class MarkedSet:
    """Basis-state indices on which the miter indicator is 1."""

    assignments: frozenset[int]

    @property
    def c(self) -> int:
        return len(self.assignments)


class PhaseOracle:
    """Multiplies the amplitude of each marked basis state by -1."""

    def __init__(
        self,
        backend: Backend,
        n_inputs: int,
        mask: np.ndarray | None = None,
        gate_program: tuple[GateOp, ...] = (),
        num_ancillas: int = 0,
        ancilla_map: dict[str, int] | None = None,
    ):
        self.backend = backend
        self.n_inputs = n_inputs
        self._mask = mask
        self.gate_program = gate_program
        self.num_ancillas = num_ancillas
        self.ancilla_map = ancilla_map or {}

    @property
    def total_qubits(self) -> int:
        return self.n_inputs + self.num_ancillas

    def apply(self, state: QuantumState) -> QuantumState:
        if state.num_qubits != self.total_qubits:
            raise ValueError(
                f"oracle expects {self.total_qubits} qubits, "
                f"state has {state.num_qubits}"
            )
        if self.backend is Backend.SEMANTIC:
            state.amplitudes[self._mask] *= -1.0
        else:
            for op in self.gate_program:
                apply_gate(state, op)
        return state

    def dump(self) -> str:
        """Debug listing, one gate per line (GATE backend only)."""
        if self.backend is Backend.SEMANTIC:
            marked = np.flatnonzero(self._mask)
            return f"semantic oracle over {self.n_inputs} inputs, " \
                   f"{marked.size} marked states\n"
        lines = [
            f"gate oracle: {self.n_inputs} inputs, "
            f"{self.num_ancillas} ancillas, {len(self.gate_program)} ops"
        ]
        for op in self.gate_program:
            ctl = ",".join(str(c) for c in sorted(op.controls))
            lines.append(f"{op.kind.name} target={op.target}"
                         + (f" controls={ctl}" if ctl else ""))
        return "\n".join(lines) + "\n"


def semantic_oracle(m: MiterInstance) -> PhaseOracle:
    """Oracle that flips exactly the miter's counterexample states."""
    mask = truth_table(m.combined)[0].astype(bool)
    return PhaseOracle(Backend.SEMANTIC, m.n_inputs, mask=mask)


def oracle_from_indices(n_inputs: int, indices) -> PhaseOracle:
    """Semantic oracle over an explicit marked index set (for studies/tests)."""
    mask = np.zeros(1 << n_inputs, dtype=bool)
    for i in indices:
        if not 0 <= i < mask.size:
            raise ValueError(f"marked index {i} out of range for {n_inputs} inputs")
        mask[i] = True
    return PhaseOracle(Backend.SEMANTIC, n_inputs, mask=mask)


def marked_set(m: MiterInstance) -> MarkedSet:
    """The miter's counterexample indices, by brute-force enumeration."""
    return MarkedSet(
        frozenset(assignment_to_index(a) for a in enumerate_counterexamples(m))
    )


def _realize_gate(kind: str, operands: list[int], target: int) -> list[GateOp]:
    distinct = sorted(set(operands))

    def mcx(controls) -> GateOp:
        controls = frozenset(controls)
        if len(controls) == 1:
            return GateOp(GateKind.CX, target, controls)
        return GateOp(GateKind.MCX, target, controls)

    if kind in ("AND", "NAND"):
        ops = [mcx(distinct)]
        if kind == "NAND":
            ops.append(GateOp(GateKind.X, target))
        return ops
    if kind in ("OR", "NOR"):
        flips = [GateOp(GateKind.X, q) for q in distinct]
        ops = flips + [mcx(distinct)] + flips
        if kind == "OR":
            ops.append(GateOp(GateKind.X, target))
        return ops
    if kind in ("XOR", "XNOR"):
        ops = [GateOp(GateKind.CX, target, frozenset({q})) for q in operands]
        if kind == "XNOR":
            ops.append(GateOp(GateKind.X, target))
        return ops
    if kind == "BUF":
        return [GateOp(GateKind.CX, target, frozenset({operands[0]}))]
    if kind == "NOT":
        return [
            GateOp(GateKind.CX, target, frozenset({operands[0]})),
            GateOp(GateKind.X, target),
        ]
    if kind == "ONEHOT":
        # Exactly-one-high holds only for signals occurring once; minterms
        # over the distinct signals are disjoint, so XOR-ing them ORs them.
        ops: list[GateOp] = []
        for q in distinct:
            if operands.count(q) != 1:
                continue
            flips = [GateOp(GateKind.X, p) for p in distinct if p != q]
            ops.extend(flips)
            ops.append(mcx(distinct))
            ops.extend(flips)
        return ops
    raise ValueError(f"unknown gate kind '{kind}'")


def synthesize_gate_oracle(
    m: MiterInstance, max_qubits: int = DEFAULT_MAX_QUBITS
) -> PhaseOracle:
    """Build the reversible compute/phase/uncompute oracle for a miter."""
    n = m.n_inputs
    combined = m.combined
    total = n + len(combined.gates) + 1
    if total > max_qubits:
        raise ValueError(
            f"gate oracle needs {total} qubits "
            f"({n} inputs + {len(combined.gates)} ancillas + result) "
            f"but the limit is {max_qubits}"
        )

    qubit_of = {name: i for i, name in enumerate(combined.inputs)}
    compute: list[GateOp] = []
    for j, gate in enumerate(combined.gates):
        ancilla = n + j
        compute.extend(
            _realize_gate(gate.kind, [qubit_of[s] for s in gate.operands], ancilla)
        )
        qubit_of[gate.out] = ancilla

    result = total - 1
    out_qubit = qubit_of[combined.outputs[0]]
    copy_out = GateOp(GateKind.CX, result, frozenset({out_qubit}))
    program = (
        compute
        + [copy_out, GateOp(GateKind.Z, result), copy_out]
        + list(reversed(compute))  # every compute op is self-inverse
    )
    return PhaseOracle(
        Backend.GATE,
        n,
        gate_program=tuple(program),
        num_ancillas=len(combined.gates) + 1,
        ancilla_map={name: q for name, q in qubit_of.items() if q >= n},
    )
