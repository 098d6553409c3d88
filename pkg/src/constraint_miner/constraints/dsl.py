"""Reader and printer for the constraint DSL.

One statement per line, ``#`` starts a comment::

    paymentMethod.type == "iDEAL" and not present(returnUrl) -> invalid
    requires(recurring.contract == "ONECLICK", card.cvc)  @class(inter) @cat(A3)
    exactly-one(bankAccount, card)
    offset > 80 -> invalid  @class(single)
"""

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable, List, Optional, Set, Union

from ..exceptions import DslSyntaxError, UnknownPathError
from .atoms import COMPARISON_OPS, Cmp, CmpParams, Eq, InSet, Len, Present, Unparsed
from .constraint import (
    CONSTRAINT_CLASSES,
    Constraint,
    Origin,
    all_or_none,
    any_of,
    exactly_one,
    requires,
)
from .formula import FALSE, TRUE, And, Formula, Leaf, Not, Or, normalize, render

CATEGORY_PATTERN = re.compile(r"^(A[1-4]|B[1-8])$")

_TOKEN_SPEC = [
    ("WS", r"[ \t\r]+"),
    ("COMMENT", r"#.*"),
    ("STRING", r'"(?:[^"\\]|\\.)*"'),
    ("NUMBER", r"-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?"),
    ("SUGAR", r"(?:exactly-one|all-or-none|any-of)(?![A-Za-z0-9_])"),
    ("PATH", r"[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)*"),
    ("ARROW", r"->"),
    ("OP", r"==|!=|<=|>=|<|>"),
    ("PUNCT", r"[(){}\[\],@]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))

_KEYWORDS = {"and", "or", "not", "present", "len", "unparsed", "in", "true", "false", "null", "invalid"}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(line_text: str, line_no: int) -> List[_Token]:
    tokens: List[_Token] = []
    pos = 0
    while pos < len(line_text):
        match = _TOKEN_RE.match(line_text, pos)
        if match is None:
            raise DslSyntaxError(f"unexpected character {line_text[pos]!r}", line_no, pos + 1)
        kind = match.lastgroup
        if kind not in ("WS", "COMMENT"):
            tokens.append(_Token(kind, match.group(), line_no, pos + 1))
        pos = match.end()
    return tokens


class _StatementParser:
    """Recursive descent over the tokens of one statement."""

    def __init__(self, tokens: List[_Token], line_no: int, line_length: int,
                 check_path: Callable[[str, _Token], None]):
        self.tokens = tokens
        self.pos = 0
        self.line_no = line_no
        self.line_length = line_length
        self.check_path = check_path

    # token helpers

    def peek(self, offset: int = 0) -> Optional[_Token]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def error(self, message: str, token: Optional[_Token] = None) -> DslSyntaxError:
        token = token or self.peek()
        column = token.column if token else self.line_length + 1
        return DslSyntaxError(message, self.line_no, column)

    def next(self) -> _Token:
        token = self.peek()
        if token is None:
            raise self.error("unexpected end of statement")
        self.pos += 1
        return token

    def at(self, text: str) -> bool:
        token = self.peek()
        return token is not None and token.text == text and token.kind != "STRING"

    def expect(self, text: str) -> _Token:
        token = self.peek()
        if token is None or token.text != text or token.kind == "STRING":
            found = repr(token.text) if token else "end of statement"
            raise self.error(f"expected {text!r}, found {found}")
        self.pos += 1
        return token

    def path(self) -> str:
        token = self.next()
        if token.kind != "PATH" or token.text in _KEYWORDS:
            raise self.error(f"expected a parameter path, found {token.text!r}", token)
        self.check_path(token.text, token)
        return token.text

    def literal(self) -> Any:
        token = self.next()
        if token.kind == "STRING":
            return json.loads(token.text)
        if token.kind == "NUMBER":
            return _number(token.text)
        if token.kind == "PATH" and token.text in ("true", "false"):
            return token.text == "true"
        raise self.error(f"expected a literal, found {token.text!r}", token)

    # grammar

    def statement(self) -> Constraint:
        token = self.peek()
        if token is not None and token.kind == "SUGAR":
            formula = self.group_sugar()
        elif token is not None and token.text == "requires" and self.peek(1) is not None and self.peek(1).text == "(":
            formula = self.requires_sugar()
        else:
            formula = self.formula()
            self.expect_arrow()
        label_class, category, ref, origin = self.labels()
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek().text!r} after statement")
        return Constraint(
            precondition=formula,
            origin=origin,
            source_ref=ref or f"line {self.line_no}",
            label_class=label_class,
            category=category,
        )

    def expect_arrow(self) -> None:
        token = self.peek()
        if token is None or token.kind != "ARROW":
            found = repr(token.text) if token else "end of statement"
            raise self.error(f"expected '->', found {found}")
        self.pos += 1
        token = self.next()
        if token.text != "invalid":
            raise self.error("the only consequence is 'invalid'", token)

    def group_sugar(self) -> Formula:
        name = self.next().text
        self.expect("(")
        paths = [self.path()]
        while self.at(","):
            self.next()
            paths.append(self.path())
        self.expect(")")
        try:
            if name == "exactly-one":
                return exactly_one(paths)
            if name == "all-or-none":
                return all_or_none(paths)
            return any_of(paths)
        except ValueError as e:
            raise self.error(str(e)) from e

    def requires_sugar(self) -> Formula:
        self.next()
        self.expect("(")
        trigger = self.formula()
        self.expect(",")
        if self.at("["):
            self.next()
            targets = [self.path()]
            while self.at(","):
                self.next()
                targets.append(self.path())
            self.expect("]")
        else:
            targets = [self.path()]
        self.expect(")")
        return requires(trigger, targets)

    def labels(self):
        label_class = category = ref = None
        origin = Origin.TRUTH
        while self.at("@"):
            self.next()
            name_token = self.next()
            self.expect("(")
            value_token = self.next()
            value = json.loads(value_token.text) if value_token.kind == "STRING" else value_token.text
            self.expect(")")
            name = name_token.text
            if name == "class":
                if value not in CONSTRAINT_CLASSES:
                    raise self.error(f"@class must be one of {CONSTRAINT_CLASSES}", value_token)
                label_class = value
            elif name == "cat":
                if not CATEGORY_PATTERN.match(str(value)):
                    raise self.error("@cat must be one of A1..A4, B1..B8", value_token)
                category = value
            elif name == "ref":
                ref = str(value)
            elif name == "origin":
                try:
                    origin = Origin(value if value != "truth" else Origin.TRUTH.value)
                except ValueError:
                    raise self.error(f"unknown origin {value!r}", value_token) from None
            else:
                raise self.error(f"unknown label @{name}", name_token)
        return label_class, category, ref, origin

    def formula(self) -> Formula:
        parts = [self.conjunction()]
        while self.at("or"):
            self.next()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self) -> Formula:
        parts = [self.negation()]
        while self.at("and"):
            self.next()
            parts.append(self.negation())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def negation(self) -> Formula:
        if self.at("not"):
            self.next()
            return Not(self.negation())
        return self.primary()

    def primary(self) -> Formula:
        token = self.peek()
        if token is None:
            raise self.error("expected a formula")
        if token.text == "(" and token.kind == "PUNCT":
            self.next()
            inner = self.formula()
            self.expect(")")
            return inner
        if token.kind != "PATH":
            raise self.error(f"expected a formula, found {token.text!r}", token)
        if token.text == "true":
            self.next()
            return TRUE
        if token.text == "false":
            self.next()
            return FALSE
        if token.text == "present":
            self.next()
            self.expect("(")
            path = self.path()
            self.expect(")")
            return Leaf(Present(path))
        if token.text == "unparsed":
            self.next()
            self.expect("(")
            text_token = self.next()
            if text_token.kind != "STRING":
                raise self.error("unparsed(...) takes a string", text_token)
            self.expect(")")
            return Leaf(Unparsed(json.loads(text_token.text)))
        if token.text == "len":
            self.next()
            self.expect("(")
            path = self.path()
            self.expect(")")
            op = self.operator()
            bound_token = self.next()
            if bound_token.kind != "NUMBER" or not re.fullmatch(r"\d+", bound_token.text):
                raise self.error("len(...) compares against a non-negative integer", bound_token)
            return Leaf(Len(path, op, int(bound_token.text)))
        return self.comparison()

    def operator(self) -> str:
        token = self.next()
        if token.kind != "OP" or token.text not in COMPARISON_OPS:
            raise self.error(f"expected a comparison operator, found {token.text!r}", token)
        return token.text

    def comparison(self) -> Formula:
        path = self.path()
        token = self.peek()
        if token is None or not (token.kind == "OP" or token.text == "in"):
            # a bare path stands for its presence
            return Leaf(Present(path))
        if token.text == "in":
            self.next()
            self.expect("{")
            values = [self.literal()]
            while self.at(","):
                self.next()
                values.append(self.literal())
            self.expect("}")
            return Leaf(InSet(path, frozenset(values)))

        op = self.operator()
        rhs = self.peek()
        if rhs is None:
            raise self.error("expected a value after the operator")
        if rhs.kind == "PATH" and rhs.text == "null":
            self.next()
            if op == "==":
                return Not(Leaf(Present(path)))
            if op == "!=":
                return Leaf(Present(path))
            raise self.error("null only supports == and !=", rhs)
        if rhs.kind == "PATH" and rhs.text not in _KEYWORDS:
            return Leaf(CmpParams(path, op, self.path()))

        value = self.literal()
        if op == "==":
            return Leaf(Eq(path, value))
        if isinstance(value, (str, bool)):
            if op == "!=":
                return Not(Leaf(Eq(path, value)))
            raise self.error(f"operator {op} needs a numeric bound", rhs)
        return Leaf(Cmp(path, op, value))


def _number(text: str) -> Union[int, float]:
    if re.fullmatch(r"-?\d+", text):
        return int(text)
    return float(text)


def parse_dsl(
    text: str,
    catalog: Optional[Iterable[str]] = None,
    origin: Optional[Origin] = None,
) -> List[Constraint]:
    """Parse a DSL document into constraints (sugar expanded).

    ``catalog`` restricts parameter paths to a known set; ``origin``
    overrides the origin recorded on every constraint.
    """
    known: Optional[Set[str]] = set(catalog) if catalog is not None else None

    def check_path(path: str, token: _Token) -> None:
        if known is not None and path not in known:
            raise UnknownPathError(path, where=f"line {token.line}, column {token.column}")

    constraints: List[Constraint] = []
    for line_no, line_text in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(line_text, line_no)
        if not tokens:
            continue
        parser = _StatementParser(tokens, line_no, len(line_text), check_path)
        constraint = parser.statement()
        if origin is not None:
            constraint = Constraint(
                precondition=constraint.precondition,
                origin=origin,
                source_ref=constraint.source_ref,
                label_class=constraint.label_class,
                category=constraint.category,
            )
        constraints.append(constraint)
    return constraints


def load_dsl_file(path: Path, catalog: Optional[Iterable[str]] = None,
                  origin: Optional[Origin] = None) -> List[Constraint]:
    return parse_dsl(Path(path).read_text(encoding="utf-8"), catalog=catalog, origin=origin)


def pretty_print(constraint: Constraint, with_labels: bool = True) -> str:
    """Canonical one-line form of ``constraint``."""
    line = f"{render(normalize(constraint.precondition))} -> invalid"
    if not with_labels:
        return line
    labels = []
    if constraint.label_class:
        labels.append(f"@class({constraint.label_class})")
    if constraint.category:
        labels.append(f"@cat({constraint.category})")
    if constraint.origin is not Origin.TRUTH:
        labels.append(f"@origin({constraint.origin.value})")
    if constraint.source_ref:
        labels.append(f"@ref({json.dumps(constraint.source_ref, ensure_ascii=False)})")
    return "  ".join([line] + labels) if labels else line


def dump_dsl(constraints: Iterable[Constraint], header: Optional[str] = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {row}" for row in header.splitlines())
    lines.extend(pretty_print(c) for c in constraints)
    return "\n".join(lines) + "\n"
