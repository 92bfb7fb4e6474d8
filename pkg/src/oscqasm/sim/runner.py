"""Shot-based execution of elaborated circuits.

Two execution modes, chosen by `CircuitIR.has_dynamics`:

* fast path - circuits whose measurements are terminal: one statevector
  evolution, then the joint outcome distribution of the measured qubits
  is sampled `shots` times.
* trajectory path - circuits with mid-circuit measurement, reset, or
  classical conditions: every shot evolves its own statevector with
  genuine collapse at each measurement.

Counts keys: within a classical register bit 0 is the rightmost
character; with several registers the last-declared one appears leftmost
and groups are separated by a single space.
"""

from __future__ import annotations

import numpy as np

from ..qasm.ir import BarrierOp, CircuitIR, CondOp, CXOp, MeasureOp, ResetOp, UOp
from .errors import NoMeasurements, ShotsOutOfRange, TooManyQubits
from .sampling import make_rng, order_counts, sample_counts
from .statevector import Statevector

DEFAULT_MAX_QUBITS = 20
MAX_SHOTS = 1_048_576


def format_key(clbits: list[int], layout: tuple[tuple[str, int], ...]) -> str:
    """Render clbit values as a counts key per the documented bit order."""
    groups = []
    base = 0
    for _, size in layout:
        bits = "".join(str(clbits[base + k]) for k in range(size - 1, -1, -1))
        groups.append(bits)
        base += size
    return " ".join(reversed(groups))


def run(
    circ: CircuitIR,
    shots: int,
    seed: int | None = None,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> dict[str, int]:
    """Execute `circ` and aggregate measured bitstrings over `shots`."""
    if not 1 <= shots <= MAX_SHOTS:
        raise ShotsOutOfRange(f"shots must be in 1..{MAX_SHOTS}, got {shots}")
    if circ.num_qubits > max_qubits:
        raise TooManyQubits(
            f"circuit needs {circ.num_qubits} qubits, limit is {max_qubits}"
        )
    if circ.num_measurements == 0:
        raise NoMeasurements("circuit contains no measurements")
    if circ.has_dynamics:
        return _run_trajectories(circ, shots, seed)
    distribution = outcome_distribution(circ)
    return sample_counts(distribution, shots, seed=seed)


def outcome_distribution(circ: CircuitIR) -> dict[str, float]:
    """Fast-path exact outcome distribution over counts keys.

    Only valid for circuits without dynamics: evolves the statevector
    once, then reads the joint marginal of every measured qubit.
    """
    if circ.has_dynamics:
        raise ValueError("outcome distribution requires a dynamics-free circuit")
    state = Statevector(circ.num_qubits)
    writes: dict[int, int] = {}  # clbit -> source qubit (last write wins)
    for op in circ.ops:
        if isinstance(op, UOp):
            state.apply_u(op.theta, op.phi, op.lam, op.qubit)
        elif isinstance(op, CXOp):
            state.apply_cx(op.control, op.target)
        elif isinstance(op, MeasureOp):
            writes[op.clbit] = op.qubit
        elif isinstance(op, BarrierOp):
            pass

    probs = state.probabilities()
    written = sorted(writes)
    indices = np.arange(probs.size, dtype=np.uint64)
    pattern = np.zeros(probs.size, dtype=np.uint64)
    for j, clbit in enumerate(written):
        pattern |= ((indices >> np.uint64(writes[clbit])) & np.uint64(1)) << np.uint64(j)
    weights = np.bincount(pattern.astype(np.int64), weights=probs, minlength=1 << len(written))

    distribution: dict[str, float] = {}
    clbits = [0] * circ.num_clbits
    for value in np.nonzero(weights)[0]:
        for j, clbit in enumerate(written):
            clbits[clbit] = (int(value) >> j) & 1
        distribution[format_key(clbits, circ.clbit_layout)] = float(weights[value])
    return distribution


def _run_trajectories(circ: CircuitIR, shots: int, seed: int | None) -> dict[str, int]:
    rng = make_rng(seed)
    layout = circ.clbit_layout
    offsets = circ.creg_offsets
    sizes = dict(layout)
    tallies: dict[str, int] = {}
    for _ in range(shots):
        state = Statevector(circ.num_qubits)
        clbits = [0] * circ.num_clbits

        def creg_value(name: str) -> int:
            base = offsets[name]
            return sum(clbits[base + k] << k for k in range(sizes[name]))

        def apply(op) -> None:
            if isinstance(op, UOp):
                state.apply_u(op.theta, op.phi, op.lam, op.qubit)
            elif isinstance(op, CXOp):
                state.apply_cx(op.control, op.target)
            elif isinstance(op, MeasureOp):
                clbits[op.clbit] = _measure(state, op.qubit, rng)
            elif isinstance(op, ResetOp):
                if _measure(state, op.qubit, rng) == 1:
                    state.apply_x(op.qubit)
            elif isinstance(op, CondOp):
                if creg_value(op.creg) == op.value:
                    apply(op.op)

        for op in circ.ops:
            apply(op)
        key = format_key(clbits, layout)
        tallies[key] = tallies.get(key, 0) + 1
    return order_counts(tallies)


def _measure(state: Statevector, qubit: int, rng: np.random.Generator) -> int:
    p1 = state.prob_one(qubit)
    outcome = 1 if rng.random() < p1 else 0
    state.collapse(qubit, outcome)
    return outcome
