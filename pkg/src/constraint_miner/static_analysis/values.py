"""Abstract values tracked for variables while interpreting method bodies."""

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from ..constraints.formula import Formula


@dataclass(frozen=True)
class Unknown:
    """Anything the evaluator cannot resolve.

    ``type_name`` keeps the declared class when known, so request-model
    getters on the value can still be mapped by field name.
    """

    type_name: Optional[str] = None
    reason: str = field(default="", compare=False)


@dataclass(frozen=True)
class IntConst:
    value: Union[int, float]


@dataclass(frozen=True)
class StrConst:
    value: str


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class NullConst:
    pass


@dataclass(frozen=True)
class EnumConst:
    enum: str
    name: str


@dataclass(frozen=True)
class ParamRef:
    """A request parameter; ``path`` is empty for the request object itself.

    ``model`` is the request-model class of the value (the element class when
    ``collection`` is set).
    """

    path: str
    model: Optional[str] = None
    collection: bool = False

    @property
    def is_root(self) -> bool:
        return not self.path

    def element(self) -> "ParamRef":
        return ParamRef(self.path, self.model, False)


@dataclass(frozen=True)
class LengthOf:
    """``p.length()`` / ``p.size()`` of a parameter."""

    path: str


@dataclass(frozen=True)
class GuardValue:
    """A boolean variable holding a condition over parameters."""

    formula: Formula


Constant = Union[IntConst, StrConst, BoolConst, EnumConst]
CONSTANT_TYPES = (IntConst, StrConst, BoolConst, EnumConst)


@dataclass(frozen=True)
class CollectionOf:
    elements: Tuple[Constant, ...] = ()

    def __post_init__(self) -> None:
        for element in self.elements:
            if not isinstance(element, CONSTANT_TYPES):
                raise ValueError(f"collections only track constants, got {element!r}")

    def add(self, element: Constant) -> "CollectionOf":
        return CollectionOf(self.elements + (element,))

    def literals(self) -> Tuple:
        return tuple(literal_of(e) for e in self.elements)


AbstractValue = Union[
    Unknown, IntConst, StrConst, BoolConst, NullConst, EnumConst, ParamRef, LengthOf, GuardValue, CollectionOf
]


def is_constant(value: AbstractValue) -> bool:
    return isinstance(value, CONSTANT_TYPES)


def literal_of(value: Constant):
    """Atom literal for a constant; enum constants compare by name."""
    if isinstance(value, EnumConst):
        return value.name
    return value.value


def java_string(value: AbstractValue) -> Optional[str]:
    """String conversion used by ``+`` concatenation, None when unknown."""
    if isinstance(value, StrConst):
        return value.value
    if isinstance(value, BoolConst):
        return "true" if value.value else "false"
    if isinstance(value, IntConst):
        return str(value.value)
    if isinstance(value, EnumConst):
        return value.name
    if isinstance(value, NullConst):
        return "null"
    return None


def constant(value) -> AbstractValue:
    """Abstract value of a source literal."""
    if value is None:
        return NullConst()
    if isinstance(value, bool):
        return BoolConst(value)
    if isinstance(value, (int, float)):
        return IntConst(value)
    return StrConst(str(value))
