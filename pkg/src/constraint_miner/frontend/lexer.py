"""Tokenizer for ``.mj`` source files."""

import re
from dataclasses import dataclass
from typing import List

from ..exceptions import SourceSyntaxError

KEYWORDS = frozenset(
    {
        "class", "enum", "extends", "implements", "interface", "package", "import",
        "public", "private", "protected", "static", "final", "abstract",
        "void", "if", "else", "switch", "case", "default", "for", "return",
        "throw", "throws", "break", "continue", "new", "this", "true", "false", "null",
        # recognised only to be rejected
        "while", "do", "try", "catch", "finally", "synchronized", "instanceof",
    }
)

MODIFIERS = frozenset({"public", "private", "protected", "static", "final", "abstract"})

_TOKEN_SPEC = [
    ("NEWLINE", r"\n"),
    ("WS", r"[ \t\r\f]+"),
    ("LINE_COMMENT", r"//[^\n]*"),
    ("BLOCK_COMMENT", r"/\*(?:.|\n)*?\*/"),
    ("STRING", r'"(?:[^"\\\n]|\\.)*"'),
    ("CHAR", r"'(?:[^'\\\n]|\\.)'"),
    ("NUMBER", r"\d+(?:\.\d+)?[lLdDfF]?"),
    ("IDENT", r"[A-Za-z_$][A-Za-z0-9_$]*"),
    ("OP", r"->|::|\+\+|--|&&|\|\||==|!=|<=|>=|\+=|-=|\*=|/=|[-+*/%<>=!?:&|^~]"),
    ("PUNCT", r"[(){}\[\];,.@]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "'": "'", "\\": "\\", "0": "\0"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    @property
    def value(self):
        if self.kind == "STRING":
            return unescape(self.text[1:-1])
        if self.kind == "NUMBER":
            text = self.text.rstrip("lLdDfF")
            return float(text) if "." in text else int(text)
        return self.text

    def is_(self, text: str) -> bool:
        return self.text == text and self.kind not in ("STRING", "CHAR")


def unescape(body: str) -> str:
    return re.sub(r"\\(.)", lambda m: _ESCAPES.get(m.group(1), m.group(1)), body)


def tokenize(source: str, filename: str = "<source>") -> List[Token]:
    """Split ``source`` into tokens; the list always ends with an EOF token."""
    tokens: List[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            raise SourceSyntaxError(f"unexpected character {source[pos]!r}", filename, line, pos - line_start + 1)
        kind = match.lastgroup
        text = match.group()
        column = pos - line_start + 1
        if kind == "IDENT" and text in KEYWORDS:
            kind = "KEYWORD"
        if kind not in ("WS", "NEWLINE", "LINE_COMMENT", "BLOCK_COMMENT"):
            tokens.append(Token(kind, text, line, column))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = match.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens
