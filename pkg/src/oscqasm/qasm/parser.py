"""Recursive-descent parser for OpenQASM 2.0.

Produces a `Program` AST and performs the semantic checks that only need
declaration knowledge: declared-before-use, duplicate declarations, index
bounds, gate arity, register-broadcast size agreement, and overlapping
quantum arguments. ``include "qelib1.inc";`` resolves against the embedded
standard header; any other include is rejected.
"""

from __future__ import annotations

from . import ast
from .errors import QasmSyntaxError, SemanticError, UnknownInclude
from .expr import BinOp, Expr, Num, Param, Pi, UNARY_FNS, Unary
from .lexer import Token, tokenize
from .qelib1 import QELIB1_SOURCE

# Builtin primitives: name -> (param count, qubit count)
BUILTIN_GATES = {"U": (3, 1), "CX": (0, 2)}


def parse(source: str) -> ast.Program:
    """Parse OpenQASM 2.0 `source` into a validated Program."""
    return _Parser(tokenize(source)).parse_program()


class _Parser:
    def __init__(self, tokens: list[Token], gates: dict[str, ast.GateDef] | None = None):
        self.tokens = tokens
        self.pos = 0
        self.registers: dict[str, ast.RegDecl] = {}
        self.gates: dict[str, ast.GateDef] = dict(gates) if gates else {}
        self.included = False

    # -- token plumbing ----------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.cur
        if tok.kind != kind:
            expected = what or f"'{kind}'"
            found = repr(tok.text) if tok.kind != "eof" else "end of input"
            raise QasmSyntaxError(f"expected {expected}, found {found}", tok.line, tok.column)
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        tok = self.cur
        if tok.kind != "keyword" or tok.text != word:
            raise QasmSyntaxError(f"expected '{word}', found {tok.text!r}", tok.line, tok.column)
        return self.advance()

    def at_keyword(self, *words: str) -> bool:
        return self.cur.kind == "keyword" and self.cur.text in words

    # -- program -----------------------------------------------------------

    def parse_program(self) -> ast.Program:
        self.expect_keyword("OPENQASM")
        ver = self.expect("real", "version number")
        if ver.text != "2.0":
            raise QasmSyntaxError(f"unsupported OPENQASM version {ver.text}", ver.line, ver.column)
        self.expect(";")
        statements: list[ast.Statement] = []
        while self.cur.kind != "eof":
            statements.append(self.parse_statement())
        return ast.Program(version=(2, 0), statements=tuple(statements))

    def parse_statement(self) -> ast.Statement:
        tok = self.cur
        if tok.kind == "keyword":
            if tok.text == "include":
                return self.parse_include()
            if tok.text in ("qreg", "creg"):
                return self.parse_regdecl()
            if tok.text == "gate":
                return self.parse_gatedef(opaque=False)
            if tok.text == "opaque":
                return self.parse_gatedef(opaque=True)
            if tok.text == "if":
                return self.parse_conditional()
            if tok.text == "barrier":
                return self.parse_barrier()
            if tok.text in ("measure", "reset", "U", "CX"):
                return self.parse_qop()
        if tok.kind == "id":
            return self.parse_qop()
        raise QasmSyntaxError(f"unexpected token {tok.text!r}", tok.line, tok.column)

    # -- declarations ------------------------------------------------------

    def parse_include(self) -> ast.Include:
        kw = self.expect_keyword("include")
        name = self.expect("string", "include filename")
        self.expect(";")
        if name.text != "qelib1.inc":
            raise UnknownInclude(
                f"cannot include {name.text!r}; only \"qelib1.inc\" is available",
                name.line,
                name.column,
            )
        if self.included:
            return ast.Include("qelib1.inc", (), kw.line, kw.column)
        self.included = True
        lib = _Parser(tokenize(QELIB1_SOURCE), gates=self.gates)
        lib_statements: list[ast.Statement] = []
        while lib.cur.kind != "eof":
            lib_statements.append(lib.parse_statement())
        self.gates.update(lib.gates)
        return ast.Include("qelib1.inc", tuple(lib_statements), kw.line, kw.column)

    def _check_fresh_name(self, tok: Token) -> None:
        if tok.text in self.registers or tok.text in self.gates or tok.text in BUILTIN_GATES:
            raise SemanticError(f"duplicate declaration of {tok.text!r}", tok.line, tok.column)

    def parse_regdecl(self) -> ast.RegDecl:
        kw = self.advance()
        name = self.expect("id", "register name")
        self._check_fresh_name(name)
        self.expect("[")
        size = self.expect("nninteger", "register size")
        self.expect("]")
        self.expect(";")
        if int(size.text) < 1:
            raise SemanticError(f"register {name.text!r} must have size >= 1", size.line, size.column)
        decl = ast.RegDecl(kw.text, name.text, int(size.text), kw.line, kw.column)
        self.registers[name.text] = decl
        return decl

    def parse_gatedef(self, opaque: bool) -> ast.GateDef:
        kw = self.advance()
        name = self.expect("id", "gate name")
        self._check_fresh_name(name)
        params: tuple[str, ...] = ()
        if self.cur.kind == "(":
            self.advance()
            if self.cur.kind != ")":
                params = self.parse_idlist("parameter name")
            self.expect(")")
        qargs = self.parse_idlist("qubit argument")
        if len(set(params)) != len(params) or len(set(qargs)) != len(qargs):
            raise SemanticError(f"repeated formal argument in gate {name.text!r}", name.line, name.column)
        overlap = set(params) & set(qargs)
        if overlap:
            raise SemanticError(
                f"name {sorted(overlap)[0]!r} used as both parameter and qubit argument",
                name.line,
                name.column,
            )
        body: tuple[ast.BodyCall | ast.BodyBarrier, ...] = ()
        if opaque:
            self.expect(";")
        else:
            self.expect("{")
            body = self.parse_gate_body(name.text, set(params), list(qargs))
            self.expect("}")
        gdef = ast.GateDef(name.text, params, qargs, body, opaque, kw.line, kw.column)
        self.gates[name.text] = gdef
        return gdef

    def parse_idlist(self, what: str) -> tuple[str, ...]:
        names = [self.expect("id", what).text]
        while self.cur.kind == ",":
            self.advance()
            names.append(self.expect("id", what).text)
        return tuple(names)

    def parse_gate_body(
        self, gate_name: str, params: set[str], qargs: list[str]
    ) -> tuple[ast.BodyCall | ast.BodyBarrier, ...]:
        body: list[ast.BodyCall | ast.BodyBarrier] = []
        known = set(qargs)
        while self.cur.kind != "}":
            tok = self.cur
            if self.at_keyword("barrier"):
                self.advance()
                ids = self.parse_idlist("qubit argument")
                self.expect(";")
                for arg in ids:
                    if arg not in known:
                        raise SemanticError(f"undeclared qubit argument {arg!r}", tok.line, tok.column)
                body.append(ast.BodyBarrier(ids))
                continue
            if self.at_keyword("U", "CX") or tok.kind == "id":
                body.append(self.parse_body_call(params, known))
                continue
            raise QasmSyntaxError(
                f"unexpected token {tok.text!r} in body of gate {gate_name!r}", tok.line, tok.column
            )
        return tuple(body)

    def parse_body_call(self, params: set[str], qargs: set[str]) -> ast.BodyCall:
        name = self.advance()
        call_params: tuple[Expr, ...] = ()
        if self.cur.kind == "(":
            self.advance()
            if self.cur.kind != ")":
                call_params = self.parse_explist(params)
            self.expect(")")
        args = self.parse_idlist("qubit argument")
        self.expect(";")
        for arg in args:
            if arg not in qargs:
                raise SemanticError(f"undeclared qubit argument {arg!r}", name.line, name.column)
        if len(set(args)) != len(args):
            raise SemanticError(f"repeated qubit argument in call to {name.text!r}", name.line, name.column)
        self._check_arity(name, len(call_params), len(args))
        return ast.BodyCall(name.text, call_params, args, name.line, name.column)

    def _check_arity(self, name: Token, n_params: int, n_qargs: int) -> None:
        if name.text in BUILTIN_GATES:
            want_p, want_q = BUILTIN_GATES[name.text]
        elif name.text in self.gates:
            gdef = self.gates[name.text]
            want_p, want_q = len(gdef.params), len(gdef.qargs)
        else:
            raise SemanticError(f"gate {name.text!r} is not defined", name.line, name.column)
        if n_params != want_p:
            raise SemanticError(
                f"gate {name.text!r} takes {want_p} parameter(s), got {n_params}",
                name.line,
                name.column,
            )
        if n_qargs != want_q:
            raise SemanticError(
                f"gate {name.text!r} takes {want_q} qubit argument(s), got {n_qargs}",
                name.line,
                name.column,
            )

    # -- quantum operations ------------------------------------------------

    def parse_qop(self) -> ast.Statement:
        if self.at_keyword("measure"):
            return self.parse_measure()
        if self.at_keyword("reset"):
            kw = self.advance()
            target = self.parse_argument("qreg")
            self.expect(";")
            return ast.Reset(target, kw.line, kw.column)
        return self.parse_gatecall()

    def parse_conditional(self) -> ast.Conditional:
        kw = self.expect_keyword("if")
        self.expect("(")
        reg = self.expect("id", "classical register name")
        decl = self.registers.get(reg.text)
        if decl is None or decl.kind != "creg":
            raise SemanticError(f"{reg.text!r} is not a declared classical register", reg.line, reg.column)
        self.expect("==")
        value = self.expect("nninteger", "comparison value")
        self.expect(")")
        body = self.parse_qop()
        return ast.Conditional(reg.text, int(value.text), body, kw.line, kw.column)

    def parse_barrier(self) -> ast.Barrier:
        kw = self.expect_keyword("barrier")
        args = [self.parse_argument("qreg")]
        while self.cur.kind == ",":
            self.advance()
            args.append(self.parse_argument("qreg"))
        self.expect(";")
        return ast.Barrier(tuple(args), kw.line, kw.column)

    def parse_measure(self) -> ast.Measure:
        kw = self.expect_keyword("measure")
        source = self.parse_argument("qreg")
        self.expect("->")
        target = self.parse_argument("creg")
        self.expect(";")
        src_size = 1 if source.index is not None else self.registers[source.register].size
        dst_size = 1 if target.index is not None else self.registers[target.register].size
        if src_size != dst_size:
            raise SemanticError(
                f"measure size mismatch: {source} has {src_size} bit(s), {target} has {dst_size}",
                kw.line,
                kw.column,
            )
        return ast.Measure(source, target, kw.line, kw.column)

    def parse_gatecall(self) -> ast.GateCall:
        name = self.advance()
        params: tuple[Expr, ...] = ()
        if name.text == "U" or (self.cur.kind == "(" and name.text != "CX"):
            self.expect("(")
            if self.cur.kind != ")":
                params = self.parse_explist(set())
            self.expect(")")
        args = [self.parse_argument("qreg")]
        while self.cur.kind == ",":
            self.advance()
            args.append(self.parse_argument("qreg"))
        self.expect(";")
        self._check_arity(name, len(params), len(args))
        self._check_broadcast(args, name)
        return ast.GateCall(name.text, params, tuple(args), name.line, name.column)

    def _check_broadcast(self, args: list[ast.Argument], at: Token) -> None:
        sizes = {
            self.registers[a.register].size for a in args if a.index is None
        }
        if len(sizes) > 1:
            raise SemanticError(
                f"mismatched register sizes {sorted(sizes)} in broadcast application",
                at.line,
                at.column,
            )
        for i, a in enumerate(args):
            for b in args[i + 1 :]:
                if a.register != b.register:
                    continue
                if a.index is None or b.index is None or a.index == b.index:
                    raise SemanticError(
                        f"overlapping qubit arguments {a} and {b}", at.line, at.column
                    )

    def parse_argument(self, want_kind: str) -> ast.Argument:
        name = self.expect("id", "register name")
        decl = self.registers.get(name.text)
        if decl is None:
            raise SemanticError(f"undeclared register {name.text!r}", name.line, name.column)
        if decl.kind != want_kind:
            raise SemanticError(
                f"{name.text!r} is a {decl.kind} where a {want_kind} is required",
                name.line,
                name.column,
            )
        index: int | None = None
        if self.cur.kind == "[":
            self.advance()
            idx = self.expect("nninteger", "index")
            self.expect("]")
            index = int(idx.text)
            if index >= decl.size:
                raise SemanticError(
                    f"index {index} out of range for {name.text}[{decl.size}]", idx.line, idx.column
                )
        return ast.Argument(name.text, index, name.line, name.column)

    # -- expressions ---------------------------------------------------------

    def parse_explist(self, params: set[str]) -> tuple[Expr, ...]:
        exprs = [self.parse_expr(params)]
        while self.cur.kind == ",":
            self.advance()
            exprs.append(self.parse_expr(params))
        return tuple(exprs)

    def parse_expr(self, params: set[str]) -> Expr:
        node = self.parse_term(params)
        while self.cur.kind in ("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.parse_term(params))
        return node

    def parse_term(self, params: set[str]) -> Expr:
        node = self.parse_unary(params)
        while self.cur.kind in ("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.parse_unary(params))
        return node

    def parse_unary(self, params: set[str]) -> Expr:
        if self.cur.kind == "-":
            self.advance()
            return Unary("neg", self.parse_unary(params))
        return self.parse_power(params)

    def parse_power(self, params: set[str]) -> Expr:
        node = self.parse_atom(params)
        if self.cur.kind == "^":
            self.advance()
            node = BinOp("^", node, self.parse_unary(params))
        return node

    def parse_atom(self, params: set[str]) -> Expr:
        tok = self.cur
        if tok.kind in ("real", "nninteger"):
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "keyword" and tok.text == "pi":
            self.advance()
            return Pi()
        if tok.kind == "keyword" and tok.text in UNARY_FNS:
            self.advance()
            self.expect("(")
            inner = self.parse_expr(params)
            self.expect(")")
            return Unary(tok.text, inner)
        if tok.kind == "id":
            if tok.text not in params:
                raise SemanticError(f"undeclared identifier {tok.text!r} in expression", tok.line, tok.column)
            self.advance()
            return Param(tok.text)
        if tok.kind == "(":
            self.advance()
            inner = self.parse_expr(params)
            self.expect(")")
            return inner
        raise QasmSyntaxError(f"unexpected token {tok.text!r} in expression", tok.line, tok.column)
