"""Error types raised while compiling OpenQASM 2.0 sources.

Every error carries a short stable `code` (used verbatim in wire-level
error replies) and, where known, the 1-based line/column of the offending
token.
"""

from __future__ import annotations


class QasmError(Exception):
    """Base class for all front-end failures."""

    code = "QasmError"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.line is not None:
            return f"{self.message} (line {self.line}, column {self.column})"
        return self.message


class LexError(QasmError):
    code = "LexError"


class QasmSyntaxError(QasmError):
    code = "SyntaxError"


class SemanticError(QasmError):
    code = "SemanticError"


class UnknownInclude(QasmError):
    code = "UnknownInclude"


class RecursionLimit(QasmError):
    code = "RecursionLimit"


class EvalError(QasmError):
    code = "EvalError"
