from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from c2o.errors import LexError, Span

KEYWORDS = frozenset(
    """
    component input output record node assume guarantee eq assign
    pre if then else not and or div mod true false bool int real
    """.split()
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<block>/\*.*?\*/)
  | (?P<real>[0-9]+\.[0-9]+)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<sym>->|=>|<=|>=|<>|[{}();:,.=<>+\-*/])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "kw", "ident", "int", "real", "string", "sym", "eof"
    text: str
    span: Span
    value: object = None

    def is_(self, kind: str, text: str | None = None) -> bool:
        return self.kind == kind and (text is None or self.text == text)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        span = Span(line, pos - line_start + 1)
        if m is None:
            if source.startswith("/*", pos):
                raise LexError("unterminated block comment", span)
            if source[pos] == '"':
                raise LexError("unterminated string literal", span)
            raise LexError(f"unexpected character {source[pos]!r}", span)
        kind = m.lastgroup
        text = m.group()
        if kind == "ident":
            tokens.append(Token("kw" if text in KEYWORDS else "ident", text, span))
        elif kind == "int":
            tokens.append(Token("int", text, span, int(text)))
        elif kind == "real":
            tokens.append(Token("real", text, span, Fraction(text)))
        elif kind == "string":
            tokens.append(Token("string", text, span, text[1:-1]))
        elif kind == "sym":
            tokens.append(Token("sym", text, span))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", Span(line, pos - line_start + 1)))
    return tokens
