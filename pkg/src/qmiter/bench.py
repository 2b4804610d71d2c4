"""Benchmark harness: seeded instance generation, threshold sweeps, CSV output.

Instances are built so the number of distinguishing assignments is exact:
circuit B is circuit A with its first output XOR-ed against an indicator
that ORs the minterms of a randomly chosen c-element assignment set (for
c = 0 the indicator is a constant-0 XOR), so the difference set is that
set, no search required.

The default sweep covers 6 to 9 input bits with preset difference counts
per width, thresholds 0.1 to 0.9, and 10 seeded runs per combination.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .checker import CheckerConfig, Verdict, check_equivalence
from .grover import success_probability
from .netlist import Circuit, Gate, index_to_assignment
from .oracle import Backend
from .qsim import derive_seed

DEFAULT_BITS = (6, 7, 8, 9)
DEFAULT_COUNTS: dict[int, tuple[int, ...]] = {
    6: (0, 1, 3, 6, 13),
    7: (0, 1, 6, 13, 26),
    8: (0, 3, 13, 26, 51),
    9: (0, 5, 26, 51, 102),
}
DEFAULT_PHIS = (0.1, 0.3, 0.5, 0.7, 0.9)
DEFAULT_RUNS = 10

CSV_HEADER = "bits,c_true,phi,run,verdict,correct,accumulated_iterations,successful_g,wall_ms"

# Record seeds live in a disjoint index space from instance seeds.
_RECORD_SEED_BASE = 1_000_000


@dataclass(frozen=True)
class InstanceSpec:
    n_bits: int
    c: int
    seed: int


@dataclass(frozen=True)
class ExperimentRecord:
    n_bits: int
    c_true: int
    phi: float
    run_index: int
    verdict: Verdict
    correct: bool
    accumulated_iterations: int
    successful_g: int | None
    wall_ms: float


_TWO_OPERAND_KINDS = ("AND", "OR", "XOR", "NAND", "NOR", "XNOR")


def generate_instance(spec: InstanceSpec) -> tuple[Circuit, Circuit]:
    """A seeded circuit pair with exactly ``spec.c`` distinguishing assignments."""
    n = spec.n_bits
    num_states = 1 << n
    if not 0 <= spec.c <= num_states:
        raise ValueError(f"c={spec.c} exceeds {num_states} assignments")

    rng = np.random.Generator(np.random.Philox(key=derive_seed(spec.seed, 0)))
    inputs = tuple(f"x{i}" for i in range(n))
    signals = list(inputs)
    gates: list[Gate] = []
    for j in range(n + 3):
        kind = _TWO_OPERAND_KINDS[int(rng.integers(len(_TWO_OPERAND_KINDS)))]
        arity = 2 if len(signals) < 3 else int(rng.integers(2, 4))
        picks = rng.choice(len(signals), size=arity, replace=False)
        gates.append(Gate(f"g{j}", kind, tuple(signals[int(p)] for p in picks)))
        signals.append(f"g{j}")

    outputs = (gates[-1].out, gates[-2].out)
    circuit_a = Circuit(inputs, tuple(gates), outputs, name=f"rand{n}")

    chosen = sorted(
        int(i) for i in rng.choice(num_states, size=spec.c, replace=False)
    )
    b_gates = list(gates)
    not_of: dict[str, str] = {}

    def negated(signal: str) -> str:
        if signal not in not_of:
            name = f"n_{signal}"
            b_gates.append(Gate(name, "NOT", (signal,)))
            not_of[signal] = name
        return not_of[signal]

    minterms = []
    for k, idx in enumerate(chosen):
        bits = index_to_assignment(idx, n)
        literals = tuple(
            inputs[j] if bit == "1" else negated(inputs[j])
            for j, bit in enumerate(bits)
        )
        if len(literals) == 1:
            minterms.append(literals[0])
        else:
            b_gates.append(Gate(f"m{k}", "AND", literals))
            minterms.append(f"m{k}")

    if not minterms:
        b_gates.append(Gate("ind", "XOR", (inputs[0], inputs[0])))  # constant 0
        indicator = "ind"
    elif len(minterms) == 1:
        indicator = minterms[0]
    else:
        b_gates.append(Gate("ind", "OR", tuple(minterms)))
        indicator = "ind"

    b_gates.append(Gate("flip", "XOR", (outputs[0], indicator)))
    circuit_b = Circuit(
        inputs, tuple(b_gates), ("flip",) + outputs[1:], name=f"rand{n}c{spec.c}"
    )
    return circuit_a, circuit_b


def _suite_tasks(bits, counts, phis, runs, master_seed, shots_factor, backend):
    instances = {}
    for inst_index, (nb, c) in enumerate(
        (nb, c) for nb in bits for c in counts[nb]
    ):
        instances[(nb, c)] = generate_instance(
            InstanceSpec(nb, c, derive_seed(master_seed, inst_index))
        )
    tasks = []
    task_index = 0
    for nb in bits:
        for c in counts[nb]:
            for phi in phis:
                for run in range(runs):
                    seed = derive_seed(master_seed, _RECORD_SEED_BASE + task_index)
                    tasks.append(
                        (instances[(nb, c)], nb, c, phi, run, seed,
                         shots_factor, backend)
                    )
                    task_index += 1
    return tasks


def _run_one(task) -> ExperimentRecord:
    (a, b), nb, c, phi, run, seed, shots_factor, backend = task
    cfg = CheckerConfig(phi=phi, shots_factor=shots_factor, seed=seed,
                        backend=backend)
    start = time.perf_counter()
    outcome = check_equivalence(a, b, cfg)
    wall_ms = (time.perf_counter() - start) * 1000.0
    return ExperimentRecord(
        n_bits=nb,
        c_true=c,
        phi=phi,
        run_index=run,
        verdict=outcome.verdict,
        correct=(outcome.verdict is Verdict.NON_EQUIVALENT) == (c > 0),
        accumulated_iterations=outcome.accumulated_iterations,
        successful_g=outcome.successful_g,
        wall_ms=wall_ms,
    )


def run_suite(
    bits=DEFAULT_BITS,
    counts: dict[int, tuple[int, ...]] | None = None,
    phis=DEFAULT_PHIS,
    runs: int = DEFAULT_RUNS,
    master_seed: int = 0,
    shots_factor: int = 8,
    backend: Backend = Backend.SEMANTIC,
    workers: int = 1,
) -> list[ExperimentRecord]:
    """Run the full (bits x counts x phis x runs) cross product.

    Per-task seeds derive from the master seed, so the decision columns of
    the records are reproducible regardless of worker count or ordering.
    """
    counts = dict(DEFAULT_COUNTS if counts is None else counts)
    tasks = _suite_tasks(bits, counts, phis, runs, master_seed,
                         shots_factor, backend)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_one, tasks, chunksize=4))
    else:
        records = [_run_one(t) for t in tasks]
    records.sort(key=lambda r: (r.n_bits, r.c_true, r.phi, r.run_index))
    return records


def records_to_csv(records, include_timing: bool = False) -> str:
    """CSV per the documented schema, LF line endings.

    Timing is a measurement, not data: it is only emitted on request so
    that identical seeds produce byte-identical files.
    """
    lines = [CSV_HEADER]
    for r in records:
        successful = "" if r.successful_g is None else str(r.successful_g)
        wall = f"{r.wall_ms:.3f}" if include_timing else ""
        lines.append(
            f"{r.n_bits},{r.c_true},{r.phi:g},{r.run_index},"
            f"{r.verdict.value},{str(r.correct).lower()},"
            f"{r.accumulated_iterations},{successful},{wall}"
        )
    return "\n".join(lines) + "\n"


def summary_table(records) -> str:
    """Per-instance summary: '-' on any misclassification, else the modal
    accumulated iteration count over the runs."""
    phis = sorted({r.phi for r in records})
    groups: dict[tuple[int, int, float], list[ExperimentRecord]] = {}
    for r in records:
        groups.setdefault((r.n_bits, r.c_true, r.phi), []).append(r)

    header = ["bits", "c"] + [f"phi={phi:g}" for phi in phis]
    rows = []
    for nb, c in sorted({(r.n_bits, r.c_true) for r in records}):
        row = [str(nb), str(c)]
        for phi in phis:
            cell_records = groups.get((nb, c, phi), [])
            if not cell_records:
                row.append("")
            elif not all(r.correct for r in cell_records):
                row.append("-")
            else:
                tally = Counter(r.accumulated_iterations for r in cell_records)
                best = max(tally.items(), key=lambda kv: (kv[1], -kv[0]))[0]
                row.append(str(best))
        rows.append(row)

    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    fmt = "  ".join(f"{{:>{w}}}" for w in widths)
    lines = [fmt.format(*header)]
    lines.extend(fmt.format(*row) for row in rows)
    return "\n".join(lines) + "\n"


def theory_curve(num_states: int, num_marked: int, g_max: int) -> str:
    """CSV of (iterations, success probability) rows for g = 0..g_max."""
    if g_max < 0:
        raise ValueError("g_max must be >= 0")
    lines = ["g,probability"]
    for g in range(g_max + 1):
        p = success_probability(g, num_marked, num_states)
        lines.append(f"{g},{p:.10f}")
    return "\n".join(lines) + "\n"
