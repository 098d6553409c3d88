"""Constraints: a precondition formula that implies an invalid state."""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, List, Optional, Sequence

from .atoms import Present, Unparsed
from .formula import (
    And,
    Formula,
    Leaf,
    Not,
    Or,
    has_unparsed,
    iter_atoms,
    normalize,
    render,
    render_term,
)

INVALID_STATE = "invalid"

CONSTRAINT_CLASSES = ("inter", "single")


class Origin(str, Enum):
    DOC = "doc"
    CODE = "code"
    TRUTH = "ground-truth"


@dataclass(frozen=True)
class Constraint:
    """``precondition -> InvalidState``; the only consequence kind there is."""

    precondition: Formula
    origin: Origin = field(default=Origin.TRUTH, compare=False)
    source_ref: str = field(default="", compare=False)
    label_class: Optional[str] = field(default=None, compare=False)
    category: Optional[str] = field(default=None, compare=False)

    consequence = INVALID_STATE

    @property
    def partial(self) -> bool:
        return has_unparsed(self.precondition)

    @property
    def constraint_class(self) -> str:
        """``inter`` when two or more parameters are involved, else ``single``."""
        if self.label_class:
            return self.label_class
        paths = set()
        for atom in iter_atoms(self.precondition):
            if not isinstance(atom, Unparsed):
                paths.update(atom.paths())
        return "inter" if len(paths) >= 2 else "single"

    def normalized(self) -> "Constraint":
        return replace(self, precondition=normalize(self.precondition))

    def render(self) -> str:
        return f"{render(normalize(self.precondition))} -> {INVALID_STATE}"

    def render_term(self) -> str:
        return render_term(normalize(self.precondition))

    def __str__(self) -> str:
        return self.render()


# --------------------------------------------------------------------------
# Sugar: every form expands to a plain precondition


def present(path: str) -> Formula:
    return Leaf(Present(path))


def absent(path: str) -> Formula:
    return Not(Leaf(Present(path)))


def requires(trigger: Formula, targets: Sequence[str]) -> Formula:
    """``trigger -> all targets present``: invalid when the trigger holds and a target is missing."""
    if not targets:
        raise ValueError("requires needs at least one target")
    if len(targets) == 1:
        missing: Formula = absent(targets[0])
    else:
        missing = Or(tuple(absent(t) for t in targets))
    return And.of(trigger, missing)


def any_of(paths: Sequence[str]) -> Formula:
    """At least one of ``paths`` must be present."""
    _check_group(paths, "any-of")
    return And(tuple(absent(p) for p in paths))


def exactly_one(paths: Sequence[str]) -> Formula:
    """Exactly one of ``paths`` must be present."""
    _check_group(paths, "exactly-one")
    none = And(tuple(absent(p) for p in paths))
    pairs = [
        And.of(present(a), present(b))
        for i, a in enumerate(paths)
        for b in paths[i + 1:]
    ]
    return Or((none,) + tuple(pairs))


def all_or_none(paths: Sequence[str]) -> Formula:
    """Either all of ``paths`` are present or none is."""
    _check_group(paths, "all-or-none")
    mixed = [
        And.of(present(a), absent(b))
        for a in paths
        for b in paths
        if a != b
    ]
    return Or(tuple(mixed))


def _check_group(paths: Sequence[str], name: str) -> None:
    if len(paths) < 2:
        raise ValueError(f"{name} needs at least two parameters")
    if len(set(paths)) != len(paths):
        raise ValueError(f"{name} lists a parameter twice")


# --------------------------------------------------------------------------
# Decomposition


def _is_missing_target(f: Formula) -> bool:
    return isinstance(f, Not) and isinstance(f.child, Leaf) and isinstance(f.child.atom, Present)


def _consequent_targets(f: Formula) -> Optional[List[Formula]]:
    """Targets of a consequent conjunction ``B & C`` as it appears inside a precondition."""
    if isinstance(f, Or) and len(f.children) >= 2 and all(_is_missing_target(c) for c in f.children):
        return list(f.children)
    if (
        isinstance(f, Not)
        and isinstance(f.child, And)
        and len(f.child.children) >= 2
        and all(isinstance(c, Leaf) and isinstance(c.atom, Present) for c in f.child.children)
    ):
        return [Not(c) for c in f.child.children]
    return None


def decompose(constraint: Constraint) -> List[Constraint]:
    """Split ``P -> B & C`` into ``P -> B`` and ``P -> C``.

    Only the consequent side is split; a disjunctive trigger such as
    ``A || B -> C`` stays one constraint.
    """
    pre = normalize(constraint.precondition)
    if not isinstance(pre, And):
        return [replace(constraint, precondition=pre)]

    groups = [(i, _consequent_targets(c)) for i, c in enumerate(pre.children)]
    groups = [(i, targets) for i, targets in groups if targets is not None]
    if len(groups) != 1:
        return [replace(constraint, precondition=pre)]

    index, targets = groups[0]
    trigger = pre.children[:index] + pre.children[index + 1:]
    return [
        replace(constraint, precondition=normalize(And(trigger + (target,))))
        for target in targets
    ]


def decompose_all(constraints: Iterable[Constraint]) -> List[Constraint]:
    result: List[Constraint] = []
    for constraint in constraints:
        result.extend(decompose(constraint))
    return result


def dedupe(constraints: Iterable[Constraint]) -> List[Constraint]:
    """Normalize and drop structurally repeated constraints, keeping the first."""
    seen = set()
    result = []
    for constraint in constraints:
        normal = constraint.normalized()
        key = render(normal.precondition)
        if key in seen:
            continue
        seen.add(key)
        result.append(normal)
    return result
