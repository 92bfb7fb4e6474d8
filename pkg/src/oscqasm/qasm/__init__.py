"""OpenQASM 2.0 front end: lex, parse, include-resolve, elaborate."""

from .ast import Program
from .elaborator import elaborate
from .errors import (
    EvalError,
    LexError,
    QasmError,
    QasmSyntaxError,
    RecursionLimit,
    SemanticError,
    UnknownInclude,
)
from .expr import eval_expr
from .ir import BarrierOp, CircuitIR, CondOp, CXOp, MeasureOp, Op, ResetOp, UOp
from .parser import parse


def compile_source(source: str) -> CircuitIR:
    """Parse and elaborate `source` in one step."""
    return elaborate(parse(source))


__all__ = [
    "Program",
    "CircuitIR",
    "Op",
    "UOp",
    "CXOp",
    "MeasureOp",
    "ResetOp",
    "BarrierOp",
    "CondOp",
    "parse",
    "elaborate",
    "compile_source",
    "eval_expr",
    "QasmError",
    "LexError",
    "QasmSyntaxError",
    "SemanticError",
    "UnknownInclude",
    "RecursionLimit",
    "EvalError",
]
