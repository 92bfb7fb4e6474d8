"""AST node types for parsed OpenQASM 2.0 programs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .expr import Expr


@dataclass(frozen=True)
class Argument:
    """A register reference, optionally subscripted: ``q`` or ``q[3]``."""

    register: str
    index: int | None
    line: int = 0
    column: int = 0

    def __str__(self) -> str:
        if self.index is None:
            return self.register
        return f"{self.register}[{self.index}]"


@dataclass(frozen=True)
class RegDecl:
    kind: str  # 'qreg' or 'creg'
    name: str
    size: int
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class GateCall:
    """Application of a gate (builtin U/CX, library, or user-defined)."""

    name: str
    params: tuple[Expr, ...]
    args: tuple[Argument, ...]
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class BodyBarrier:
    """``barrier`` inside a gate body (plain identifiers only)."""

    args: tuple[str, ...]


@dataclass(frozen=True)
class BodyCall:
    """Gate application inside a gate body; qubit args are formal names."""

    name: str
    params: tuple[Expr, ...]
    qargs: tuple[str, ...]
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class GateDef:
    name: str
    params: tuple[str, ...]
    qargs: tuple[str, ...]
    body: tuple[BodyCall | BodyBarrier, ...]
    opaque: bool = False
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Measure:
    source: Argument
    target: Argument
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Reset:
    target: Argument
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Barrier:
    args: tuple[Argument, ...]
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Conditional:
    """``if (creg == value) statement`` guarding a single quantum op."""

    creg: str
    value: int
    body: "Statement"
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Include:
    """A resolved ``include``; the included definitions ride along."""

    filename: str
    statements: tuple["Statement", ...] = field(default_factory=tuple)
    line: int = 0
    column: int = 0


Statement = RegDecl | GateDef | GateCall | Measure | Reset | Barrier | Conditional | Include


@dataclass(frozen=True)
class Program:
    version: tuple[int, int]
    statements: tuple[Statement, ...]
