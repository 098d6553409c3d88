"""Propositional formulas over parameter atoms.

Formulas are immutable trees of ``And``, ``Or``, ``Not`` and ``Leaf`` nodes.
The empty conjunction ``And()`` is the constant true and the empty
disjunction ``Or()`` the constant false; ``normalize`` absorbs both.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Mapping, Set, Tuple, Union

from ..exceptions import DomainCoverageError, PartialConstraintError
from .atoms import (
    Atom,
    Cmp,
    CmpParams,
    Eq,
    InSet,
    Len,
    Present,
    Unparsed,
    compare,
    is_number,
    literal_equals,
    render_literal,
)


@dataclass(frozen=True)
class Leaf:
    atom: Atom


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    children: Tuple["Formula", ...] = ()

    @classmethod
    def of(cls, *children: "Formula") -> "And":
        return cls(tuple(children))


@dataclass(frozen=True)
class Or:
    children: Tuple["Formula", ...] = ()

    @classmethod
    def of(cls, *children: "Formula") -> "Or":
        return cls(tuple(children))


Formula = Union[Leaf, Not, And, Or]

TRUE: Formula = And(())
FALSE: Formula = Or(())


class _Absent:
    """Marker for a parameter missing from a request."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ABSENT"

    def __reduce__(self):
        return (_Absent, ())


ABSENT = _Absent()


@dataclass(frozen=True)
class Assignment:
    """A point of a Domain: a value (or ABSENT) per path, a truth value per Unparsed text."""

    values: Mapping[str, Any]
    unparsed: Mapping[str, bool] = field(default_factory=dict)

    def is_present(self, path: str) -> bool:
        return self.lookup(path) is not ABSENT

    def lookup(self, path: str) -> Any:
        try:
            return self.values[path]
        except KeyError:
            raise DomainCoverageError(path) from None


def leaf(atom: Atom) -> Leaf:
    return Leaf(atom)


def is_true(f: Formula) -> bool:
    return isinstance(f, And) and not f.children


def is_false(f: Formula) -> bool:
    return isinstance(f, Or) and not f.children


def conjoin(*parts: Formula) -> Formula:
    return normalize(And(tuple(parts)))


def disjoin(*parts: Formula) -> Formula:
    return normalize(Or(tuple(parts)))


def negate(f: Formula) -> Formula:
    return normalize(Not(f))


# --------------------------------------------------------------------------
# Rendering

_PREC_OR, _PREC_AND, _PREC_NOT, _PREC_ATOM = 1, 2, 3, 4


def _precedence(f: Formula) -> int:
    if isinstance(f, Or):
        return _PREC_OR if f.children else _PREC_ATOM
    if isinstance(f, And):
        return _PREC_AND if f.children else _PREC_ATOM
    if isinstance(f, Not):
        return _PREC_NOT
    return _PREC_ATOM


def render(f: Formula) -> str:
    """Render ``f`` in the constraint DSL syntax."""
    if isinstance(f, Leaf):
        return f.atom.render()
    if is_true(f):
        return "true"
    if is_false(f):
        return "false"
    if isinstance(f, Not):
        inner = render(f.child)
        if _precedence(f.child) < _PREC_NOT:
            inner = f"({inner})"
        return f"not {inner}"
    own = _precedence(f)
    joiner = " and " if isinstance(f, And) else " or "
    parts = []
    for child in f.children:
        text = render(child)
        if _precedence(child) <= own and not isinstance(child, (Leaf, Not)):
            text = f"({text})"
        parts.append(text)
    return joiner.join(parts)


def render_term(f: Formula) -> str:
    """Functional rendering, e.g. ``and(not(Unparsed("x")), present(a))``."""
    if isinstance(f, Leaf):
        if isinstance(f.atom, Unparsed):
            return f"Unparsed({render_literal(f.atom.text)})"
        return f.atom.render()
    if is_true(f):
        return "true"
    if is_false(f):
        return "false"
    if isinstance(f, Not):
        return f"not({render_term(f.child)})"
    name = "and" if isinstance(f, And) else "or"
    return f"{name}({', '.join(render_term(c) for c in f.children)})"


def sort_key(f: Formula) -> str:
    return render(f)


# --------------------------------------------------------------------------
# Normalization


def normalize(f: Formula) -> Formula:
    """Flatten, deduplicate, sort, drop double negation and collapse single children."""
    if isinstance(f, Leaf):
        return f
    if isinstance(f, Not):
        child = normalize(f.child)
        if isinstance(child, Not):
            return child.child
        if is_true(child):
            return FALSE
        if is_false(child):
            return TRUE
        return Not(child)

    kind = type(f)
    absorbing = FALSE if kind is And else TRUE
    collected: Dict[str, Formula] = {}
    for child in f.children:
        n = normalize(child)
        if type(n) is kind:
            members = n.children
        elif n == absorbing:
            return absorbing
        else:
            members = (n,)
        for member in members:
            collected.setdefault(sort_key(member), member)

    children = tuple(collected[key] for key in sorted(collected))
    if len(children) == 1:
        return children[0]
    return kind(children)


# --------------------------------------------------------------------------
# Inspection


def iter_atoms(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Leaf):
        yield f.atom
    elif isinstance(f, Not):
        yield from iter_atoms(f.child)
    else:
        for child in f.children:
            yield from iter_atoms(child)


def referenced_paths(f: Formula) -> Set[str]:
    paths: Set[str] = set()
    for atom in iter_atoms(f):
        paths.update(atom.paths())
    return paths


def unparsed_texts(f: Formula) -> List[str]:
    return [atom.text for atom in iter_atoms(f) if isinstance(atom, Unparsed)]


def has_unparsed(f: Formula) -> bool:
    return any(isinstance(atom, Unparsed) for atom in iter_atoms(f))


# --------------------------------------------------------------------------
# Evaluation


def _length(value: Any) -> Any:
    if isinstance(value, (str, list, tuple)):
        return len(value)
    return None


def evaluate_atom(atom: Atom, assignment: Assignment) -> bool:
    if isinstance(atom, Unparsed):
        try:
            return bool(assignment.unparsed[atom.text])
        except KeyError:
            raise PartialConstraintError(
                f"no truth value supplied for unparsed atom {atom.render()}"
            ) from None

    if isinstance(atom, Present):
        return assignment.is_present(atom.path)

    if isinstance(atom, CmpParams):
        left = assignment.lookup(atom.left)
        right = assignment.lookup(atom.right)
        if left is ABSENT or right is ABSENT:
            return False
        if is_number(left) and is_number(right):
            return compare(left, atom.op, right)
        if atom.op in ("==", "!="):
            return compare(left, atom.op, right)
        return False

    value = assignment.lookup(atom.path)
    # A missing field cannot equal, compare to, or be measured against anything.
    if value is ABSENT:
        return False

    if isinstance(atom, Eq):
        return literal_equals(value, atom.value)
    if isinstance(atom, Cmp):
        return is_number(value) and compare(value, atom.op, atom.bound)
    if isinstance(atom, Len):
        length = _length(value)
        return length is not None and compare(length, atom.op, atom.bound)
    if isinstance(atom, InSet):
        return any(literal_equals(value, v) for v in atom.values)
    raise TypeError(f"unknown atom type: {type(atom).__name__}")


def evaluate(f: Formula, assignment: Assignment) -> bool:
    """Evaluate ``f`` under one assignment (absent-falsity for value atoms)."""
    if isinstance(f, Leaf):
        return evaluate_atom(f.atom, assignment)
    if isinstance(f, Not):
        return not evaluate(f.child, assignment)
    if isinstance(f, And):
        return all(evaluate(child, assignment) for child in f.children)
    return any(evaluate(child, assignment) for child in f.children)
