"""Parameter atoms: the leaves of constraint formulas."""

import json
from dataclasses import dataclass
from typing import Any, FrozenSet, Tuple, Union

COMPARISON_OPS = ("<", "<=", ">", ">=", "!=", "==")

# Mirror image of an operator when its operands swap sides.
FLIPPED_OPS = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "!=": "!=", "==": "=="}

Literal = Union[str, int, float, bool]


def is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def literal_equals(a: Any, b: Any) -> bool:
    """JSON-flavoured equality: booleans never equal numbers."""
    if isinstance(a, bool) or isinstance(b, bool):
        return type(a) is type(b) and a == b
    if is_number(a) and is_number(b):
        return a == b
    return type(a) is type(b) and a == b


def compare(left: Any, op: str, right: Any) -> bool:
    if op == "==":
        return literal_equals(left, right)
    if op == "!=":
        return not literal_equals(left, right)
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    if op == ">=":
        return left >= right
    raise ValueError(f"unknown comparison operator: {op}")


def render_literal(value: Any) -> str:
    return json.dumps(value, ensure_ascii=False)


def literal_sort_key(value: Any) -> Tuple[str, str]:
    return (type(value).__name__, render_literal(value))


@dataclass(frozen=True)
class Present:
    path: str

    def paths(self) -> Tuple[str, ...]:
        return (self.path,)

    def render(self) -> str:
        return f"present({self.path})"


@dataclass(frozen=True)
class Eq:
    path: str
    value: Literal

    def __post_init__(self) -> None:
        if self.value is None:
            raise ValueError("Eq cannot compare against null; use Present instead")

    def paths(self) -> Tuple[str, ...]:
        return (self.path,)

    def render(self) -> str:
        return f"{self.path} == {render_literal(self.value)}"


@dataclass(frozen=True)
class Cmp:
    path: str
    op: str
    bound: Union[int, float]

    def __post_init__(self) -> None:
        if self.op not in COMPARISON_OPS:
            raise ValueError(f"unknown comparison operator: {self.op}")
        if not is_number(self.bound) or self.bound != self.bound or self.bound in (
            float("inf"),
            float("-inf"),
        ):
            raise ValueError(f"Cmp bound must be a finite number, got {self.bound!r}")

    def paths(self) -> Tuple[str, ...]:
        return (self.path,)

    def render(self) -> str:
        return f"{self.path} {self.op} {render_literal(self.bound)}"


@dataclass(frozen=True)
class CmpParams:
    left: str
    op: str
    right: str

    def __post_init__(self) -> None:
        if self.op not in COMPARISON_OPS:
            raise ValueError(f"unknown comparison operator: {self.op}")

    def paths(self) -> Tuple[str, ...]:
        return (self.left, self.right)

    def render(self) -> str:
        return f"{self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class Len:
    path: str
    op: str
    bound: int

    def __post_init__(self) -> None:
        if self.op not in COMPARISON_OPS:
            raise ValueError(f"unknown comparison operator: {self.op}")
        if not isinstance(self.bound, int) or isinstance(self.bound, bool) or self.bound < 0:
            raise ValueError(f"Len bound must be a non-negative integer, got {self.bound!r}")

    def paths(self) -> Tuple[str, ...]:
        return (self.path,)

    def render(self) -> str:
        return f"len({self.path}) {self.op} {self.bound}"


@dataclass(frozen=True)
class InSet:
    path: str
    values: FrozenSet[Literal]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("InSet needs at least one value")
        object.__setattr__(self, "values", frozenset(self.values))

    def paths(self) -> Tuple[str, ...]:
        return (self.path,)

    def sorted_values(self) -> Tuple[Literal, ...]:
        return tuple(sorted(self.values, key=literal_sort_key))

    def render(self) -> str:
        inner = ", ".join(render_literal(v) for v in self.sorted_values())
        return f"{self.path} in {{{inner}}}"


@dataclass(frozen=True)
class Unparsed:
    """Guard fragment kept verbatim because it could not be translated."""

    text: str

    def paths(self) -> Tuple[str, ...]:
        return ()

    def render(self) -> str:
        return f"unparsed({render_literal(self.text)})"


Atom = Union[Present, Eq, Cmp, CmpParams, Len, InSet, Unparsed]
