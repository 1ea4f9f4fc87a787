"""Tokenizer for ``.rsg`` sources."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from enum import Enum

from rsgdsl.diagnostics import ParseError, error


class Tok(str, Enum):
    IDENT = "identifier"
    KEYWORD = "keyword"
    NUMBER = "number"
    STRING = "string"
    PUNCT = "punctuation"
    EOF = "end of input"


# Hard keywords; everything else (section names, unit symbols) is contextual.
KEYWORDS = frozenset(
    {
        "root",
        "Node",
        "Group",
        "Transform",
        "GeometricNode",
        "FunctionBlock",
        "PointCloudType",
        "MeshType",
        "Box",
        "Cylinder",
        "PointCloud",
        "Mesh",
    }
)

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<punct>[{}\[\](),=*])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    type: Tok
    text: str
    line: int
    column: int
    value: object = None

    def describe(self) -> str:
        if self.type is Tok.EOF:
            return "end of input"
        return repr(self.text)


def is_identifier(name: str) -> bool:
    return bool(IDENT_RE.match(name)) and name not in KEYWORDS


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, i = 1, 0, 0
    n = len(source)
    while i < n:
        m = _TOKEN_RE.match(source, i)
        col = i - line_start + 1
        if m is None:
            if source[i] == '"':
                raise ParseError([error(line, col, "unterminated string literal", "LEXICAL")])
            raise ParseError([error(line, col, f"unexpected character {source[i]!r}", "LEXICAL")])
        kind = m.lastgroup
        text = m.group()
        if kind == "number":
            value = float(text)
            if not math.isfinite(value):
                raise ParseError([error(line, col, f"number {text} is not finite", "LEXICAL")])
            tokens.append(Token(Tok.NUMBER, text, line, col, value))
        elif kind == "ident":
            tok_type = Tok.KEYWORD if text in KEYWORDS else Tok.IDENT
            tokens.append(Token(tok_type, text, line, col))
        elif kind == "string":
            try:
                value = json.loads(text, strict=False)
            except ValueError:
                raise ParseError(
                    [error(line, col, f"invalid escape in string literal {text}", "LEXICAL")]
                ) from None
            tokens.append(Token(Tok.STRING, text, line, col, value))
        elif kind == "punct":
            tokens.append(Token(Tok.PUNCT, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = i + text.rindex("\n") + 1
        i = m.end()
    col = i - line_start + 1
    tokens.append(Token(Tok.EOF, "", line, col))
    return tokens
