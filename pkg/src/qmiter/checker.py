"""Equivalence decision procedure over shot histograms.

The checker runs the search with a descending iteration count, starting
from the single-counterexample optimum. After each run it sorts the shot
histogram and looks for a relative gap between adjacent counts larger
than the threshold phi (counts m_i sorted descending, split where
1 - m_{i+1}/m_i > phi). If the scan consumes all measured states within
the first N/2 ranks, the measured set itself is taken as one group.

A split only proposes candidates: one classical miter evaluation of the
most frequent state decides which side of the split to take, and every
candidate is then re-verified classically, so a NON_EQUIVALENT verdict is
always sound. If verification eliminates all candidates the attempt is
discarded and the iteration count decremented. When the count reaches
zero without a surviving split, the circuits are reported EQUIVALENT.

Known limitation: when the difference set is empty or covers exactly half
(or all) of the assignment space, every iteration count yields a uniform
histogram, so non-equivalence at c = N/2 (or c = N) is typically reported
as EQUIVALENT. This is inherent to the method, not a bug in it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .grover import initial_iterations, run_grover
from .miter import MiterInstance, build_miter, miter_eval
from .netlist import Circuit, index_to_assignment
from .oracle import Backend, PhaseOracle, semantic_oracle, synthesize_gate_oracle
from .qsim import MeasurementHistogram, derive_seed, sample


class Verdict(Enum):
    EQUIVALENT = "EQUIVALENT"
    NON_EQUIVALENT = "NON_EQUIVALENT"


@dataclass(frozen=True)
class CheckerConfig:
    phi: float = 0.3
    shots_factor: int = 8
    seed: int = 0
    backend: Backend = Backend.SEMANTIC

    def __post_init__(self):
        if not 0.0 < self.phi < 1.0:
            raise ValueError(f"phi must be in (0, 1), got {self.phi}")
        if self.shots_factor < 1:
            raise ValueError("shots_factor must be >= 1")


@dataclass(frozen=True)
class SplitDecision:
    """Outcome of scanning one sorted histogram for a group boundary."""

    found: bool
    split_index: int | None = None
    top_group: tuple[int, ...] = ()
    all_measured_consumed: bool = False


@dataclass(frozen=True)
class AttemptRecord:
    """One executed iteration count and what its histogram produced."""

    iterations: int
    shots: int
    measured_count: int
    split: SplitDecision
    verified_count: int = 0


@dataclass(frozen=True)
class CheckOutcome:
    verdict: Verdict
    counterexamples: tuple[str, ...]
    attempts: tuple[AttemptRecord, ...]
    accumulated_iterations: int
    successful_g: int | None = None
    n_inputs: int = 0

    @property
    def equivalent(self) -> bool:
        return self.verdict is Verdict.EQUIVALENT


def _ranked(hist: MeasurementHistogram) -> list[tuple[int, int]]:
    # Descending by count; ties broken by ascending basis-state index so the
    # procedure is deterministic.
    return sorted(hist.counts.items(), key=lambda kv: (-kv[1], kv[0]))


def split_histogram(
    hist: MeasurementHistogram, phi: float, num_states: int
) -> SplitDecision:
    """Find the first rank i (up to N/2) where the sorted counts separate."""
    ranked = _ranked(hist)
    bound = min(len(ranked), num_states // 2)
    for i in range(1, bound + 1):
        if i == len(ranked):
            return SplitDecision(
                found=True,
                split_index=i,
                top_group=tuple(idx for idx, _ in ranked),
                all_measured_consumed=True,
            )
        if 1.0 - ranked[i][1] / ranked[i - 1][1] > phi:
            return SplitDecision(
                found=True,
                split_index=i,
                top_group=tuple(idx for idx, _ in ranked[:i]),
            )
    return SplitDecision(found=False)


def verify_candidates(m: MiterInstance, candidates: list[str]) -> list[str]:
    """Keep only candidates the miter confirms, preserving order."""
    return [a for a in candidates if miter_eval(m, a)]


def _sample_inputs(state, oracle: PhaseOracle, shots: int, seed: int) -> MeasurementHistogram:
    hist = sample(state, shots, seed)
    ancillas = state.num_qubits - oracle.n_inputs
    if ancillas == 0:
        return hist
    # Gate-backend ancillas are |0> outside oracle application, so shifting
    # them away cannot merge distinct input assignments.
    counts: dict[int, int] = {}
    for idx, cnt in hist.counts.items():
        key = idx >> ancillas
        counts[key] = counts.get(key, 0) + cnt
    return MeasurementHistogram(shots=hist.shots, counts=counts)


def check_equivalence(
    a: Circuit, b: Circuit, cfg: CheckerConfig = CheckerConfig()
) -> CheckOutcome:
    """Decide equivalence of two circuits; see the module docstring."""
    m = build_miter(a, b)
    if cfg.backend is Backend.SEMANTIC:
        orc = semantic_oracle(m)
    else:
        orc = synthesize_gate_oracle(m)

    n = m.n_inputs
    num_states = m.num_states
    shots = cfg.shots_factor * num_states
    attempts: list[AttemptRecord] = []
    accumulated = 0

    g_start = initial_iterations(num_states)
    for attempt_index, g in enumerate(range(g_start, 0, -1)):
        state = run_grover(orc, g)
        hist = _sample_inputs(
            state, orc, shots, derive_seed(cfg.seed, attempt_index)
        )
        accumulated += g

        split = split_histogram(hist, cfg.phi, num_states)
        verified: list[str] = []
        if split.found:
            ranked = _ranked(hist)
            rest = [idx for idx, _ in ranked[split.split_index:]]
            representative = index_to_assignment(split.top_group[0], n)
            if miter_eval(m, representative):
                candidate_indices = list(split.top_group)
            else:
                candidate_indices = rest
            verified = verify_candidates(
                m, [index_to_assignment(i, n) for i in candidate_indices]
            )

        attempts.append(
            AttemptRecord(
                iterations=g,
                shots=shots,
                measured_count=hist.measured_count,
                split=split,
                verified_count=len(verified),
            )
        )
        if verified:
            return CheckOutcome(
                verdict=Verdict.NON_EQUIVALENT,
                counterexamples=tuple(verified),
                attempts=tuple(attempts),
                accumulated_iterations=accumulated,
                successful_g=g,
                n_inputs=n,
            )

    return CheckOutcome(
        verdict=Verdict.EQUIVALENT,
        counterexamples=(),
        attempts=tuple(attempts),
        accumulated_iterations=accumulated,
        successful_g=None,
        n_inputs=n,
    )


def format_report(outcome: CheckOutcome) -> str:
    """Human-readable multi-line report of a check outcome."""
    lines = [f"verdict: {outcome.verdict.value}"]
    lines.append(f"accumulated iterations: {outcome.accumulated_iterations}")
    if outcome.successful_g is not None:
        lines.append(f"separating iteration count: {outcome.successful_g}")
    if outcome.counterexamples:
        lines.append(f"counterexamples ({len(outcome.counterexamples)}):")
        for cex in outcome.counterexamples:
            lines.append(f"  {cex}")
    lines.append("attempts:")
    for att in outcome.attempts:
        split = att.split
        if split.found:
            kind = "all-measured" if split.all_measured_consumed else "threshold"
            detail = f"split at rank {split.split_index} ({kind}), " \
                     f"{att.verified_count} verified"
        else:
            detail = "no split"
        lines.append(
            f"  g={att.iterations}: {att.measured_count} states measured "
            f"in {att.shots} shots, {detail}"
        )
    return "\n".join(lines) + "\n"
