"""Gate-level combinational netlists: parsing, validation, evaluation.

File format (``.ckt``): UTF-8 text, one statement per line, ``#`` starts a
comment. The first statement must be ``inputs``, the last ``outputs``, with
any number of ``gate`` statements in between:

    inputs x0 x1 x2
    gate g1 = AND x0 x1
    gate g2 = XOR g1 x2
    outputs g2

Names match ``[A-Za-z_][A-Za-z0-9_]*``. Gate operands must be declared on an
earlier line, so the gate list is topologically ordered by construction.

Input declaration order fixes bit significance: the first declared input is
the most significant bit of an assignment string, so assignment ``"110"``
sets x0=1, x1=1, x2=0 and has numeric index 6.

Gate semantics are two-valued. XOR/XNOR over n operands are parity based;
ONEHOT is true iff exactly one operand is 1 (for two operands ONEHOT and
XOR coincide, for three or more they differ).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

GATE_KINDS = frozenset(
    {"AND", "OR", "XOR", "XNOR", "NAND", "NOR", "NOT", "BUF", "ONEHOT"}
)
_UNARY_KINDS = frozenset({"NOT", "BUF"})
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class NetlistError(ValueError):
    """Malformed netlist text or structurally invalid circuit."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Gate:
    """One gate: ``out`` is the signal it defines, driven by kind(operands)."""

    out: str
    kind: str
    operands: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "operands", tuple(self.operands))
        if self.kind not in GATE_KINDS:
            raise NetlistError(f"unknown gate kind '{self.kind}' for '{self.out}'")
        _check_arity(self.kind, len(self.operands), self.out)


@dataclass(frozen=True)
class Circuit:
    """An immutable combinational circuit. ``name`` is a label, not structure."""

    inputs: tuple[str, ...]
    gates: tuple[Gate, ...]
    outputs: tuple[str, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        _validate_structure(self)

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)


def _check_arity(kind: str, n_operands: int, out: str) -> None:
    if kind in _UNARY_KINDS:
        if n_operands != 1:
            raise NetlistError(
                f"gate '{out}': {kind} takes exactly 1 operand, got {n_operands}"
            )
    elif n_operands < 2:
        raise NetlistError(
            f"gate '{out}': {kind} takes at least 2 operands, got {n_operands}"
        )


def _check_name(name: str, what: str, line: int | None = None) -> None:
    if not _NAME_RE.match(name):
        raise NetlistError(f"invalid {what} name '{name}'", line)


def _validate_structure(circuit: Circuit) -> None:
    if not circuit.inputs:
        raise NetlistError("circuit has no inputs")
    if not circuit.outputs:
        raise NetlistError("circuit has no outputs")

    defined: set[str] = set()
    for name in circuit.inputs:
        _check_name(name, "input")
        if name in defined:
            raise NetlistError(f"duplicate signal '{name}'")
        defined.add(name)

    all_defined = defined | {g.out for g in circuit.gates}
    for gate in circuit.gates:
        _check_name(gate.out, "gate")
        if gate.out in defined:
            raise NetlistError(f"duplicate signal '{gate.out}'")
        for op in gate.operands:
            if op in defined:
                continue
            if op in all_defined:
                raise NetlistError(
                    f"cyclic definition: gate '{gate.out}' uses '{op}' "
                    "which is not defined yet"
                )
            raise NetlistError(f"undefined signal '{op}' in gate '{gate.out}'")
        defined.add(gate.out)

    for out in circuit.outputs:
        if out not in defined:
            raise NetlistError(f"undefined signal '{out}' in outputs")


def parse_circuit(text: str, name: str = "") -> Circuit:
    """Parse netlist text into a validated Circuit.

    Raises NetlistError with a line number for syntax errors, undefined or
    duplicate signals, cyclic definitions, and arity violations.
    """
    inputs: tuple[str, ...] | None = None
    outputs: tuple[str, ...] | None = None
    gates: list[Gate] = []
    gate_lines: list[int] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0]

        if outputs is not None:
            raise NetlistError("statements after 'outputs' line", lineno)

        if keyword == "inputs":
            if inputs is not None:
                raise NetlistError("duplicate 'inputs' line", lineno)
            if len(tokens) < 2:
                raise NetlistError("'inputs' needs at least one name", lineno)
            inputs = tuple(tokens[1:])
        elif keyword == "gate":
            if inputs is None:
                raise NetlistError("'gate' before 'inputs' line", lineno)
            if len(tokens) < 5 or tokens[2] != "=":
                raise NetlistError(
                    "expected 'gate <name> = <KIND> <operand>...'", lineno
                )
            out, kind, operands = tokens[1], tokens[3], tuple(tokens[4:])
            _check_name(out, "gate", lineno)
            if kind not in GATE_KINDS:
                raise NetlistError(f"unknown gate kind '{kind}'", lineno)
            for op in operands:
                _check_name(op, "operand", lineno)
            gates.append(Gate(out, kind, operands))
            gate_lines.append(lineno)
        elif keyword == "outputs":
            if inputs is None:
                raise NetlistError("'outputs' before 'inputs' line", lineno)
            if len(tokens) < 2:
                raise NetlistError("'outputs' needs at least one name", lineno)
            outputs = tuple(tokens[1:])
        else:
            column = raw.index(keyword) + 1
            raise NetlistError(
                f"unknown statement '{keyword}' (column {column})", lineno
            )

    if inputs is None:
        raise NetlistError("missing 'inputs' line")
    if outputs is None:
        raise NetlistError("missing 'outputs' line")

    try:
        return Circuit(inputs, tuple(gates), outputs, name=name)
    except NetlistError as err:
        # Re-attach a line number for errors only visible with full context.
        culprit = str(err)
        for gate, lineno in zip(gates, gate_lines):
            if f"'{gate.out}'" in culprit:
                raise NetlistError(culprit, lineno) from None
        raise


def serialize_circuit(circuit: Circuit) -> str:
    """Canonical text form; ``parse_circuit`` round-trips it structurally."""
    lines = ["inputs " + " ".join(circuit.inputs)]
    for gate in circuit.gates:
        lines.append(f"gate {gate.out} = {gate.kind} " + " ".join(gate.operands))
    lines.append("outputs " + " ".join(circuit.outputs))
    return "\n".join(lines) + "\n"


def _eval_gate(kind: str, vals: list[int]) -> int:
    if kind == "AND":
        return int(all(vals))
    if kind == "OR":
        return int(any(vals))
    if kind == "XOR":
        return sum(vals) & 1
    if kind == "XNOR":
        return (sum(vals) & 1) ^ 1
    if kind == "NAND":
        return int(not all(vals))
    if kind == "NOR":
        return int(not any(vals))
    if kind == "NOT":
        return vals[0] ^ 1
    if kind == "BUF":
        return vals[0]
    if kind == "ONEHOT":
        return int(sum(vals) == 1)
    raise NetlistError(f"unknown gate kind '{kind}'")


def evaluate(circuit: Circuit, assignment: str) -> str:
    """Evaluate the circuit on one input assignment, one output bit per char."""
    if len(assignment) != len(circuit.inputs):
        raise NetlistError(
            f"assignment width {len(assignment)} does not match "
            f"{len(circuit.inputs)} inputs"
        )
    if any(ch not in "01" for ch in assignment):
        raise NetlistError(f"assignment '{assignment}' must be binary")
    values = {name: int(bit) for name, bit in zip(circuit.inputs, assignment)}
    for gate in circuit.gates:
        values[gate.out] = _eval_gate(gate.kind, [values[s] for s in gate.operands])
    return "".join(str(values[s]) for s in circuit.outputs)


def _eval_gate_vec(kind: str, ops: list[np.ndarray]) -> np.ndarray:
    if kind == "AND":
        out = ops[0].copy()
        for v in ops[1:]:
            out &= v
        return out
    if kind == "OR":
        out = ops[0].copy()
        for v in ops[1:]:
            out |= v
        return out
    if kind in ("XOR", "XNOR"):
        out = ops[0].copy()
        for v in ops[1:]:
            out ^= v
        return out ^ 1 if kind == "XNOR" else out
    if kind == "NAND":
        return _eval_gate_vec("AND", ops) ^ 1
    if kind == "NOR":
        return _eval_gate_vec("OR", ops) ^ 1
    if kind == "NOT":
        return ops[0] ^ 1
    if kind == "BUF":
        return ops[0].copy()
    if kind == "ONEHOT":
        total = np.zeros(ops[0].shape, dtype=np.int16)
        for v in ops:
            total += v
        return (total == 1).astype(np.uint8)
    raise NetlistError(f"unknown gate kind '{kind}'")


def truth_table(circuit: Circuit) -> np.ndarray:
    """All outputs over all 2^n assignments, shape (n_outputs, 2^n), dtype uint8.

    Column index equals the assignment's numeric value (first input = MSB).
    Intended for desk-scale circuits; memory grows as O(signals * 2^n).
    """
    n = len(circuit.inputs)
    size = 1 << n
    idx = np.arange(size, dtype=np.int64)
    values: dict[str, np.ndarray] = {}
    for j, name in enumerate(circuit.inputs):
        values[name] = ((idx >> (n - 1 - j)) & 1).astype(np.uint8)
    for gate in circuit.gates:
        values[gate.out] = _eval_gate_vec(gate.kind, [values[s] for s in gate.operands])
    return np.stack([values[s] for s in circuit.outputs])


def assignment_to_index(assignment: str) -> int:
    """Numeric value of an assignment string (first char = MSB)."""
    return int(assignment, 2)


def index_to_assignment(index: int, width: int) -> str:
    """Inverse of assignment_to_index for a given input count."""
    if not 0 <= index < (1 << width):
        raise ValueError(f"index {index} out of range for width {width}")
    return format(index, f"0{width}b")
