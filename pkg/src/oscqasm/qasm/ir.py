"""Flat primitive-operation circuit representation.

Every program elaborates to a sequence over six op kinds: U, CX, measure,
reset, barrier, and classically-conditioned wrappers of the first four.
Qubit indices follow qreg declaration order (first register occupies
0..size-1), clbit indices follow creg declaration order the same way.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property


@dataclass(frozen=True)
class UOp:
    theta: float
    phi: float
    lam: float
    qubit: int

    def __str__(self) -> str:
        return f"U({self.theta!r},{self.phi!r},{self.lam!r}) q[{self.qubit}]"


@dataclass(frozen=True)
class CXOp:
    control: int
    target: int

    def __str__(self) -> str:
        return f"CX q[{self.control}],q[{self.target}]"


@dataclass(frozen=True)
class MeasureOp:
    qubit: int
    clbit: int

    def __str__(self) -> str:
        return f"measure q[{self.qubit}] -> c[{self.clbit}]"


@dataclass(frozen=True)
class ResetOp:
    qubit: int

    def __str__(self) -> str:
        return f"reset q[{self.qubit}]"


@dataclass(frozen=True)
class BarrierOp:
    def __str__(self) -> str:
        return "barrier"


@dataclass(frozen=True)
class CondOp:
    """Apply `op` only when classical register `creg` equals `value`."""

    creg: str
    value: int
    op: "UOp | CXOp | MeasureOp | ResetOp"

    def __str__(self) -> str:
        return f"if ({self.creg}=={self.value}) {self.op}"


Op = UOp | CXOp | MeasureOp | ResetOp | BarrierOp | CondOp


@dataclass(frozen=True)
class CircuitIR:
    num_qubits: int
    clbit_layout: tuple[tuple[str, int], ...]  # (creg name, size), declaration order
    ops: tuple[Op, ...]

    @property
    def num_clbits(self) -> int:
        return sum(size for _, size in self.clbit_layout)

    @cached_property
    def creg_offsets(self) -> dict[str, int]:
        offsets = {}
        base = 0
        for name, size in self.clbit_layout:
            offsets[name] = base
            base += size
        return offsets

    @cached_property
    def has_dynamics(self) -> bool:
        """True when per-shot trajectory simulation is required.

        Any conditional or reset forces it, as does a measurement that is
        followed by a later gate or reset anywhere in the circuit.
        """
        seen_measure = False
        for op in self.ops:
            if isinstance(op, (CondOp, ResetOp)):
                return True
            if isinstance(op, MeasureOp):
                seen_measure = True
            elif isinstance(op, (UOp, CXOp)) and seen_measure:
                return True
        return False

    @property
    def num_measurements(self) -> int:
        return sum(
            1
            for op in self.ops
            if isinstance(op, MeasureOp)
            or (isinstance(op, CondOp) and isinstance(op.op, MeasureOp))
        )

    def to_text(self) -> str:
        """Line-oriented debug serialization, one op per line."""
        lines = [f"qubits {self.num_qubits}"]
        for name, size in self.clbit_layout:
            lines.append(f"creg {name}[{size}]")
        lines.extend(str(op) for op in self.ops)
        return "\n".join(lines) + "\n"
