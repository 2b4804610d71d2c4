"""Miter construction: two circuits combined into one difference indicator.

The combined circuit shares the first circuit's primary inputs, XORs each
pair of corresponding outputs, and ORs those XORs into a single output that
is 1 exactly on assignments where the circuits disagree. Output pairing is
positional; callers are responsible for matching output order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .netlist import Circuit, Gate, evaluate, index_to_assignment, truth_table

# Enumeration over all assignments is capped to keep brute force under ~1M
# circuit evaluations.
BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class MiterInstance:
    """Two circuits plus their combined single-output indicator."""

    circuit_a: Circuit
    circuit_b: Circuit
    combined: Circuit
    n_inputs: int
    num_states: int


def _fresh(base: str, used: set[str]) -> str:
    name = base
    while name in used:
        name += "_"
    used.add(name)
    return name


def build_miter(a: Circuit, b: Circuit) -> MiterInstance:
    """Combine two arity-compatible circuits into a MiterInstance.

    The second circuit's inputs are identified with the first's positionally,
    so both see the same primary input assignment.
    """
    if len(a.inputs) != len(b.inputs):
        raise ValueError(
            f"input arity mismatch: {len(a.inputs)} vs {len(b.inputs)}"
        )
    if len(a.outputs) != len(b.outputs):
        raise ValueError(
            f"output arity mismatch: {len(a.outputs)} vs {len(b.outputs)}"
        )

    used = set(a.inputs)
    gates: list[Gate] = []

    rename_a: dict[str, str] = {name: name for name in a.inputs}
    for gate in a.gates:
        rename_a[gate.out] = _fresh("a_" + gate.out, used)
        gates.append(
            Gate(rename_a[gate.out], gate.kind,
                 tuple(rename_a[s] for s in gate.operands))
        )

    rename_b: dict[str, str] = dict(zip(b.inputs, a.inputs))
    for gate in b.gates:
        rename_b[gate.out] = _fresh("b_" + gate.out, used)
        gates.append(
            Gate(rename_b[gate.out], gate.kind,
                 tuple(rename_b[s] for s in gate.operands))
        )

    xor_outs = []
    for i, (out_a, out_b) in enumerate(zip(a.outputs, b.outputs)):
        name = _fresh(f"d{i}", used)
        gates.append(Gate(name, "XOR", (rename_a[out_a], rename_b[out_b])))
        xor_outs.append(name)

    if len(xor_outs) == 1:
        indicator = xor_outs[0]
    else:
        indicator = _fresh("diff", used)
        gates.append(Gate(indicator, "OR", tuple(xor_outs)))

    combined = Circuit(
        a.inputs, tuple(gates), (indicator,),
        name=f"miter({a.name or 'a'},{b.name or 'b'})",
    )
    n = len(a.inputs)
    return MiterInstance(a, b, combined, n, 1 << n)


def miter_eval(m: MiterInstance, assignment: str) -> int:
    """1 iff the two circuits disagree on the assignment."""
    return int(evaluate(m.combined, assignment))


def enumerate_counterexamples(
    m: MiterInstance, limit: int = BRUTE_FORCE_LIMIT
) -> list[str]:
    """All distinguishing assignments, ascending by numeric value."""
    if m.n_inputs > limit:
        raise ValueError(
            f"{m.n_inputs} inputs exceeds brute-force limit of {limit}"
        )
    indicator = truth_table(m.combined)[0]
    return [
        index_to_assignment(int(i), m.n_inputs)
        for i in np.flatnonzero(indicator)
    ]
