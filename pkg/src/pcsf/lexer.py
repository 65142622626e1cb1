"""Tokenizer shared by the .pcsf, .bc and set-literal readers."""
from __future__ import annotations

import re
from dataclasses import dataclass


class PcsfSyntaxError(SyntaxError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.msg_text = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+|--[^\n]*)
  | (?P<nl>\n)
  | (?P<rec>@rec\b)
  | (?P<num>\#\d+)
  | (?P<str>"[01]*"b)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>:=|[()/,:{}<>|])
    """,
    re.VERBOSE,
)


def tokenize(source: str) -> list[Token]:
    out: list[Token] = []
    line, start = 1, 0
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if not m:
            raise PcsfSyntaxError(f"unexpected character {source[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind != "ws":
            text = m.group()
            out.append(Token("op" if kind == "op" else kind, text, line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


class TokenStream:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.text == text and tok.kind in ("op", "ident")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return self.next()

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.error(f"expected an identifier, found {tok.text or 'end of input'!r}", tok)
        return self.next()

    def error(self, message: str, tok: Token | None = None) -> PcsfSyntaxError:
        tok = tok or self.peek()
        return PcsfSyntaxError(message, tok.line, tok.col)
