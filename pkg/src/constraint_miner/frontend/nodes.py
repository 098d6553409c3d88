"""AST of the analyzed source subset.

Every node carries the position of its first token. Positions do not take
part in equality, so re-parsing printed source yields an equal tree.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union


@dataclass(frozen=True)
class Span:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


NO_SPAN = Span(0, 0)


def _span():
    return field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class TypeRef:
    name: str
    args: Tuple["TypeRef", ...] = ()
    dims: int = 0

    @property
    def element(self) -> Optional["TypeRef"]:
        """Element type of ``List<T>``/``Set<T>``/arrays, else None."""
        if self.dims:
            return TypeRef(self.name, self.args, self.dims - 1)
        if self.name in ("List", "Set", "Collection", "ArrayList", "HashSet", "Iterable") and len(self.args) == 1:
            return self.args[0]
        return None

    def __str__(self) -> str:
        text = self.name
        if self.args:
            text += "<" + ", ".join(str(a) for a in self.args) + ">"
        return text + "[]" * self.dims


# --------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class Literal:
    value: Union[int, float, str, bool, None]
    span: Span = _span()


@dataclass(frozen=True)
class Name:
    id: str
    span: Span = _span()


@dataclass(frozen=True)
class This:
    span: Span = _span()


@dataclass(frozen=True)
class FieldAccess:
    target: "Expr"
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class Call:
    target: Optional["Expr"]
    name: str
    args: Tuple["Expr", ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class New:
    type: TypeRef
    args: Tuple["Expr", ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    span: Span = _span()


Expr = Union[Literal, Name, This, FieldAccess, Call, New, Binary, Unary]


# --------------------------------------------------------------------------
# Statements


@dataclass(frozen=True)
class Block:
    body: Tuple["Stmt", ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class LocalVar:
    type: TypeRef
    name: str
    init: Optional[Expr] = None
    span: Span = _span()


@dataclass(frozen=True)
class Assign:
    target: Expr
    value: Expr
    span: Span = _span()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: "Stmt"
    orelse: Optional["Stmt"] = None
    span: Span = _span()


@dataclass(frozen=True)
class SwitchCase:
    """``labels`` is empty for ``default``."""

    labels: Tuple[Expr, ...]
    body: Tuple["Stmt", ...] = ()
    span: Span = _span()

    @property
    def is_default(self) -> bool:
        return not self.labels


@dataclass(frozen=True)
class Switch:
    subject: Expr
    cases: Tuple[SwitchCase, ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class For:
    init: Optional["Stmt"]
    cond: Optional[Expr]
    update: Tuple["Stmt", ...]
    body: "Stmt"
    span: Span = _span()


@dataclass(frozen=True)
class ForEach:
    var_type: Optional[TypeRef]
    var: str
    iterable: Expr
    body: "Stmt"
    span: Span = _span()


@dataclass(frozen=True)
class Return:
    value: Optional[Expr] = None
    span: Span = _span()


@dataclass(frozen=True)
class Throw:
    value: Expr
    span: Span = _span()


@dataclass(frozen=True)
class Break:
    span: Span = _span()


@dataclass(frozen=True)
class Continue:
    span: Span = _span()


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr
    span: Span = _span()


Stmt = Union[Block, LocalVar, Assign, If, Switch, For, ForEach, Return, Throw, Break, Continue, ExprStmt]


# --------------------------------------------------------------------------
# Declarations


@dataclass(frozen=True)
class Param:
    type: TypeRef
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class FieldDecl:
    type: TypeRef
    name: str
    init: Optional[Expr] = None
    modifiers: Tuple[str, ...] = ()
    span: Span = _span()

    @property
    def is_static(self) -> bool:
        return "static" in self.modifiers


@dataclass(frozen=True)
class MethodDecl:
    name: str
    params: Tuple[Param, ...]
    return_type: TypeRef
    body: Block
    modifiers: Tuple[str, ...] = ()
    span: Span = _span()

    @property
    def returns_boolean(self) -> bool:
        return self.return_type.name in ("boolean", "Boolean") and not self.return_type.dims


@dataclass(frozen=True)
class ClassDecl:
    name: str
    fields: Tuple[FieldDecl, ...] = ()
    methods: Tuple[MethodDecl, ...] = ()
    superclass: Optional[TypeRef] = None
    modifiers: Tuple[str, ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class EnumDecl:
    name: str
    constants: Tuple[str, ...] = ()
    modifiers: Tuple[str, ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class CompilationUnit:
    filename: str = field(default="<source>", compare=False)
    package: Optional[str] = None
    imports: Tuple[str, ...] = ()
    classes: Tuple[ClassDecl, ...] = ()
    enums: Tuple[EnumDecl, ...] = ()
