"""Parameter expression trees and their evaluation.

Gate parameters are arithmetic over real/integer literals, ``pi``, bound
parameter names, the six standard unary functions, and ``+ - * / ^``.
``^`` is right-associative; unary minus binds tighter than ``+``/``-``
(and than ``*``/``/``) but looser than ``^``, so ``-2^2 == -4``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EvalError

__all__ = ["Expr", "Num", "Pi", "Param", "Unary", "BinOp", "eval_expr", "UNARY_FNS"]


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Pi:
    pass


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # 'neg' or one of UNARY_FNS
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


Expr = Num | Pi | Param | Unary | BinOp

UNARY_FNS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
}


def eval_expr(e: Expr, bindings: dict[str, float] | None = None) -> float:
    """Evaluate `e` to a finite real, resolving names through `bindings`."""
    result = _eval(e, bindings or {})
    if not math.isfinite(result):
        raise EvalError(f"expression evaluated to a non-finite value ({result})")
    return result


def _eval(e: Expr, bindings: dict[str, float]) -> float:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Pi):
        return math.pi
    if isinstance(e, Param):
        try:
            return bindings[e.name]
        except KeyError:
            raise EvalError(f"unbound parameter '{e.name}'") from None
    if isinstance(e, Unary):
        if e.op == "neg":
            return -_eval(e.operand, bindings)
        value = _eval(e.operand, bindings)
        try:
            return UNARY_FNS[e.op](value)
        except ValueError:
            raise EvalError(f"{e.op}({value}) is undefined") from None
        except OverflowError:
            raise EvalError(f"{e.op}({value}) overflows") from None
    left = _eval(e.left, bindings)
    right = _eval(e.right, bindings)
    try:
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if e.op == "/":
            return left / right
        if e.op == "^":
            power = left**right
            if isinstance(power, complex):
                raise EvalError(f"{left} ^ {right} is not real")
            return power
    except ZeroDivisionError:
        raise EvalError("division by zero") from None
    except OverflowError:
        raise EvalError(f"{left} ^ {right} overflows") from None
    raise EvalError(f"unknown operator '{e.op}'")
