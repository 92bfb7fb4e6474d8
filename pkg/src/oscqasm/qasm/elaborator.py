"""Elaboration: AST -> flat CircuitIR.

Recursively expands every gate application down to U/CX, evaluates all
parameter expressions to radians, applies the register-broadcast rules,
and assigns global qubit/clbit indices by declaration order.
"""

from __future__ import annotations

from . import ast
from .errors import RecursionLimit, SemanticError
from .expr import eval_expr
from .ir import BarrierOp, CircuitIR, CondOp, CXOp, MeasureOp, Op, ResetOp, UOp

# Gate-definition chains deeper than this indicate a malformed program;
# OpenQASM 2.0 has no recursion, so legitimate depth is small.
EXPANSION_DEPTH_LIMIT = 64


def elaborate(program: ast.Program) -> CircuitIR:
    return _Elaborator(program).run()


class _Elaborator:
    def __init__(self, program: ast.Program):
        self.program = program
        self.qreg_offsets: dict[str, int] = {}
        self.qreg_sizes: dict[str, int] = {}
        self.creg_offsets: dict[str, int] = {}
        self.creg_sizes: dict[str, int] = {}
        self.clbit_layout: list[tuple[str, int]] = []
        self.gates: dict[str, ast.GateDef] = {}
        self.ops: list[Op] = []
        self.num_qubits = 0

    def run(self) -> CircuitIR:
        for stmt in self.program.statements:
            self.handle(stmt)
        return CircuitIR(
            num_qubits=self.num_qubits,
            clbit_layout=tuple(self.clbit_layout),
            ops=tuple(self.ops),
        )

    def handle(self, stmt: ast.Statement) -> None:
        if isinstance(stmt, ast.RegDecl):
            self.declare(stmt)
        elif isinstance(stmt, ast.Include):
            for inner in stmt.statements:
                self.handle(inner)
        elif isinstance(stmt, ast.GateDef):
            self.gates[stmt.name] = stmt
        elif isinstance(stmt, ast.GateCall):
            self.ops.extend(self.expand_call(stmt))
        elif isinstance(stmt, ast.Measure):
            self.ops.extend(self.expand_measure(stmt))
        elif isinstance(stmt, ast.Reset):
            self.ops.extend(
                ResetOp(q) for q in self.qubit_indices(stmt.target)
            )
        elif isinstance(stmt, ast.Barrier):
            self.ops.append(BarrierOp())
        elif isinstance(stmt, ast.Conditional):
            self.ops.extend(self.expand_conditional(stmt))
        else:  # pragma: no cover - parser produces no other nodes
            raise SemanticError(f"cannot elaborate {type(stmt).__name__}")

    def declare(self, decl: ast.RegDecl) -> None:
        if decl.kind == "qreg":
            self.qreg_offsets[decl.name] = self.num_qubits
            self.qreg_sizes[decl.name] = decl.size
            self.num_qubits += decl.size
        else:
            offset = sum(self.creg_sizes.values())
            self.creg_offsets[decl.name] = offset
            self.creg_sizes[decl.name] = decl.size
            self.clbit_layout.append((decl.name, decl.size))

    def qubit_indices(self, arg: ast.Argument) -> list[int]:
        base = self.qreg_offsets[arg.register]
        if arg.index is not None:
            return [base + arg.index]
        return [base + i for i in range(self.qreg_sizes[arg.register])]

    # -- expansion ----------------------------------------------------------

    def expand_call(self, call: ast.GateCall) -> list[Op]:
        param_values = [eval_expr(p) for p in call.params]
        columns = [self.qubit_indices(a) for a in call.args]
        width = max(len(col) for col in columns)
        out: list[Op] = []
        for i in range(width):
            qubits = [col[i] if len(col) > 1 else col[0] for col in columns]
            out.extend(
                self.expand_primitive(call.name, param_values, qubits, 0, call)
            )
        return out

    def expand_primitive(
        self,
        name: str,
        params: list[float],
        qubits: list[int],
        depth: int,
        site: ast.GateCall | ast.BodyCall,
    ) -> list[Op]:
        if depth > EXPANSION_DEPTH_LIMIT:
            raise RecursionLimit(
                f"gate expansion exceeded depth {EXPANSION_DEPTH_LIMIT} at {name!r}",
                site.line,
                site.column,
            )
        if name == "U":
            return [UOp(params[0], params[1], params[2], qubits[0])]
        if name == "CX":
            if qubits[0] == qubits[1]:
                raise SemanticError(
                    "CX control and target must differ", site.line, site.column
                )
            return [CXOp(qubits[0], qubits[1])]
        gdef = self.gates[name]
        if gdef.opaque:
            raise SemanticError(
                f"opaque gate {name!r} has no definition and cannot be executed",
                site.line,
                site.column,
            )
        bindings = dict(zip(gdef.params, params))
        qubit_map = dict(zip(gdef.qargs, qubits))
        out: list[Op] = []
        for body_op in gdef.body:
            if isinstance(body_op, ast.BodyBarrier):
                out.append(BarrierOp())
                continue
            values = [eval_expr(p, bindings) for p in body_op.params]
            mapped = [qubit_map[a] for a in body_op.qargs]
            out.extend(self.expand_primitive(body_op.name, values, mapped, depth + 1, body_op))
        return out

    def expand_measure(self, stmt: ast.Measure) -> list[Op]:
        qubits = self.qubit_indices(stmt.source)
        cbase = self.creg_offsets[stmt.target.register]
        if stmt.target.index is not None:
            clbits = [cbase + stmt.target.index]
        else:
            clbits = [cbase + i for i in range(self.creg_sizes[stmt.target.register])]
        return [MeasureOp(q, c) for q, c in zip(qubits, clbits)]

    def expand_conditional(self, stmt: ast.Conditional) -> list[Op]:
        inner: list[Op]
        if isinstance(stmt.body, ast.GateCall):
            inner = self.expand_call(stmt.body)
        elif isinstance(stmt.body, ast.Measure):
            inner = self.expand_measure(stmt.body)
        elif isinstance(stmt.body, ast.Reset):
            inner = [ResetOp(q) for q in self.qubit_indices(stmt.body.target)]
        else:  # pragma: no cover - grammar restricts conditional bodies
            raise SemanticError("conditional may only guard a quantum op", stmt.line, stmt.column)
        wrapped: list[Op] = []
        for op in inner:
            if isinstance(op, BarrierOp):
                wrapped.append(op)
            else:
                wrapped.append(CondOp(stmt.creg, stmt.value, op))
        return wrapped
