"""Finite evaluation domains and brute-force logical equivalence."""

import itertools
from dataclasses import dataclass
from typing import (
    TYPE_CHECKING,
    Any,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from ..exceptions import DomainCoverageError, PartialConstraintError
from .atoms import Cmp, CmpParams, Eq, InSet, Len, Present, Unparsed, is_number, literal_sort_key
from .constraint import Constraint
from .formula import ABSENT, Assignment, evaluate, iter_atoms, referenced_paths

if TYPE_CHECKING:
    from ..oas.models import EndpointSpec

OTHER_VALUE = "<other>"


def _sorted_values(values: Iterable[Any]) -> Tuple[Any, ...]:
    unique: Dict[Tuple[str, str], Any] = {}
    for value in values:
        unique.setdefault(literal_sort_key(value), value)
    return tuple(unique[key] for key in sorted(unique))


def _adjacent(bound: Any) -> List[Any]:
    return [bound - 1, bound, bound + 1]


@dataclass(frozen=True)
class Domain:
    """Per path: presence (always absent/present) times a finite value set."""

    entries: Mapping[str, Tuple[Any, ...]]

    def covers(self, paths: Iterable[str]) -> None:
        for path in paths:
            if path not in self.entries:
                raise DomainCoverageError(path)

    def states(self, path: str) -> Tuple[Any, ...]:
        values = self.entries[path] or (OTHER_VALUE,)
        return (ABSENT,) + tuple(values)

    def points(self, paths: Sequence[str]) -> Iterator[Assignment]:
        """Every assignment of the product domain restricted to ``paths``."""
        self.covers(paths)
        ordered = sorted(set(paths))
        for combo in itertools.product(*(self.states(p) for p in ordered)):
            yield Assignment(dict(zip(ordered, combo)))

    def size(self, paths: Sequence[str]) -> int:
        total = 1
        for path in set(paths):
            total *= len(self.states(path))
        return total

    def merged(self, other: "Domain") -> "Domain":
        entries: Dict[str, Tuple[Any, ...]] = dict(self.entries)
        for path, values in other.entries.items():
            entries[path] = _sorted_values(tuple(entries.get(path, ())) + tuple(values))
        return Domain(entries)

    @classmethod
    def from_states(cls, states: Mapping[str, Sequence[Any]]) -> "Domain":
        """Domain whose values are exactly the listed present-states."""
        return cls({path: _sorted_values(values) for path, values in states.items()})


def build_domain(
    constraints: Iterable[Constraint],
    spec: Optional["EndpointSpec"] = None,
    extra_paths: Iterable[str] = (),
) -> Domain:
    """Derive a finite domain that distinguishes every atom in ``constraints``."""
    values: Dict[str, Set[Any]] = {}
    literals: Dict[str, Set[Any]] = {}
    linked: List[Tuple[str, str]] = []

    def add(path: str, *items: Any) -> None:
        values.setdefault(path, set()).update(items)

    for path in extra_paths:
        add(path)

    for constraint in constraints:
        for atom in iter_atoms(constraint.precondition):
            if isinstance(atom, Present):
                add(atom.path)
            elif isinstance(atom, Eq):
                literals.setdefault(atom.path, set()).add(atom.value)
                add(atom.path, atom.value)
                if is_number(atom.value):
                    add(atom.path, *_adjacent(atom.value))
            elif isinstance(atom, Cmp):
                add(atom.path, *_adjacent(atom.bound))
            elif isinstance(atom, Len):
                add(atom.path, *("x" * n for n in _adjacent(atom.bound) if n >= 0))
            elif isinstance(atom, InSet):
                literals.setdefault(atom.path, set()).update(atom.values)
                add(atom.path, *atom.values)
            elif isinstance(atom, CmpParams):
                add(atom.left, 0, 1)
                add(atom.right, 0, 1)
                linked.append((atom.left, atom.right))

    if spec is not None:
        for path in list(values):
            parameter = spec.flat_index.get(path)
            if parameter is not None and parameter.enum_values:
                add(path, *parameter.enum_values)

    # Both sides of a parameter comparison share their numeric samples.
    for left, right in linked:
        shared = {v for v in values[left] | values[right] if is_number(v)}
        add(left, *shared)
        add(right, *shared)

    # A value outside every literal keeps Eq/InSet atoms falsifiable while present.
    for path, found in literals.items():
        other = OTHER_VALUE
        while other in found:
            other += "_"
        add(path, other)

    return Domain({path: _sorted_values(items) for path, items in values.items()})


def _comparable_paths(*constraints: Constraint) -> List[str]:
    paths: Set[str] = set()
    for constraint in constraints:
        for atom in iter_atoms(constraint.precondition):
            if isinstance(atom, Unparsed):
                raise PartialConstraintError(
                    f"constraint '{constraint.render()}' contains unparsed text; review it manually"
                )
        paths |= referenced_paths(constraint.precondition)
    return sorted(paths)


def equivalent(c1: Constraint, c2: Constraint, domain: Domain) -> bool:
    """True iff both preconditions agree on every assignment of ``domain``."""
    paths = _comparable_paths(c1, c2)
    domain.covers(paths)
    for point in domain.points(paths):
        if evaluate(c1.precondition, point) != evaluate(c2.precondition, point):
            return False
    return True


def combine(
    first: Iterable[Constraint],
    second: Iterable[Constraint],
    domain: Optional[Domain] = None,
) -> List[Constraint]:
    """Union two constraint lists, dropping constraints equivalent to an earlier one."""
    first = list(first)
    second = list(second)
    if domain is None:
        domain = build_domain(first + second)

    result: List[Constraint] = []
    for candidate in first + second:
        duplicate = False
        for kept in result:
            if candidate.partial or kept.partial:
                duplicate = candidate.normalized() == kept.normalized()
            else:
                duplicate = equivalent(candidate, kept, domain)
            if duplicate:
                break
        if not duplicate:
            result.append(candidate)
    return result
