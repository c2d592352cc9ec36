"""
Tokenizer shared by the policy, request, domain, config and request-set
grammars. Whitespace and `//` comments are dropped; newlines are kept as
tokens so the line-oriented grammars can see them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, List, Union

from facpl.core.errors import SourceError
from facpl.models.values import IDENTIFIER

NAME = "NAME"
IDENT = "IDENT"
STRING = "STRING"
NUMBER = "NUMBER"
DATE = "DATE"
PUNCT = "PUNCT"
NEWLINE = "NEWLINE"
EOF = "EOF"

_TOKEN_RE = re.compile(
    rf"""
    (?P<WS>[ \t\r\f\v]+)
  | (?P<COMMENT>//[^\n]*)
  | (?P<NEWLINE>\n)
  | (?P<STRING>"(?:[^"\\\n]|\\.)*")
  | (?P<DATE>\d{{4}}-\d{{2}}-\d{{2}}(?![\w.]))
  | (?P<NUMBER>-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?(?![\w.]))
  | (?P<NAME>{IDENTIFIER}/{IDENTIFIER})
  | (?P<IDENT>{IDENTIFIER})
  | (?P<PUNCT><=|->|[{{}}(),:])
    """,
    re.VERBOSE,
)

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    def is_punct(self, text: str) -> bool:
        return self.kind == PUNCT and self.text == text

    def is_word(self, text: str) -> bool:
        return self.kind == IDENT and self.text == text

    def describe(self) -> str:
        if self.kind == EOF:
            return "end of input"
        if self.kind == NEWLINE:
            return "end of line"
        return repr(self.text)


class SourceText:
    """Input text with line lookup for error snippets"""

    def __init__(self, text: Union[str, bytes]):
        if isinstance(text, (bytes, bytearray)):
            try:
                text = bytes(text).decode("utf-8")
            except UnicodeDecodeError as exc:
                prefix = bytes(text)[: exc.start].decode("utf-8", errors="replace")
                line = prefix.count("\n") + 1
                column = len(prefix) - (prefix.rfind("\n") + 1) + 1
                raise SourceError("input is not valid UTF-8", line, column) from None
        self.text = text
        self.lines = text.split("\n")

    def snippet(self, line: int) -> str:
        if 1 <= line <= len(self.lines):
            return self.lines[line - 1].replace("\t", " ")
        return ""

    def error(self, message: str, line: int, column: int) -> SourceError:
        return SourceError(message, line, max(column, 1), self.snippet(line))


def tokenize(source: SourceText) -> List[Token]:
    return list(_scan(source))


def _scan(source: SourceText) -> Iterator[Token]:
    text = source.text
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise source.error(f"unexpected character {text[pos]!r}", line, column)
        kind = match.lastgroup
        lexeme = match.group()
        if kind == "NEWLINE":
            yield Token(NEWLINE, lexeme, line, column)
            line += 1
            line_start = match.end()
        elif kind not in ("WS", "COMMENT"):
            yield Token(kind, lexeme, line, column)
        pos = match.end()
    yield Token(EOF, "", line, max(len(text) - line_start, 0) + 1)


def unquote(token: Token, source: SourceText) -> str:
    """Decode a double-quoted string literal"""
    body = token.text[1:-1]
    out = []
    i = 0
    while i < len(body):
        char = body[i]
        if char == "\\":
            escaped = body[i + 1]
            if escaped not in _ESCAPES:
                raise source.error(f"unknown escape \\{escaped}", token.line, token.column + i + 1)
            out.append(_ESCAPES[escaped])
            i += 2
        else:
            out.append(char)
            i += 1
    return "".join(out)
