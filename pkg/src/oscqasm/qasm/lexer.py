"""Tokenizer for OpenQASM 2.0 source text.

The language is ASCII-only; the first non-ASCII byte raises a positioned
LexError. Identifiers follow the official grammar (lowercase first letter),
``U`` and ``CX`` are keywords, comments run from ``//`` to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import LexError

KEYWORDS = frozenset(
    {
        "OPENQASM",
        "include",
        "qreg",
        "creg",
        "gate",
        "opaque",
        "measure",
        "reset",
        "barrier",
        "if",
        "pi",
        "U",
        "CX",
        "sin",
        "cos",
        "tan",
        "exp",
        "ln",
        "sqrt",
    }
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<real>(\d+\.\d*|\.\d+)([eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<nninteger>\d+)
  | (?P<word>[A-Za-z][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<eq>==)
  | (?P<sym>[;,(){}\[\]+\-*/^])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'real' | 'nninteger' | 'id' | 'keyword' | 'string' | symbol text | 'eof'
    text: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    """Tokenize `source`, ending with a single 'eof' token."""
    for i, ch in enumerate(source):
        if ord(ch) > 127:
            line = source.count("\n", 0, i) + 1
            col = i - source.rfind("\n", 0, i)
            raise LexError(f"non-ASCII byte {ch!r} in source", line, col)

    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise LexError(
                f"unexpected character {source[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "ws" or kind == "comment":
            pass
        elif kind == "word":
            if text in KEYWORDS:
                tokens.append(Token("keyword", text, line, col))
            elif text[0].islower():
                tokens.append(Token("id", text, line, col))
            else:
                raise LexError(
                    f"identifier {text!r} must start with a lowercase letter", line, col
                )
        elif kind == "string":
            tokens.append(Token("string", text[1:-1], line, col))
        elif kind in ("real", "nninteger"):
            tokens.append(Token(kind, text, line, col))
        else:  # arrow, eq, sym
            tokens.append(Token(text, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            line_start = pos + text.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, n - line_start + 1))
    return tokens
