"""Abstract evaluation of expressions against the variable stack."""

from typing import Dict, Optional, Protocol, Tuple

from ..constraints.atoms import compare, literal_equals
from ..frontend.nodes import (
    Binary,
    Call,
    Expr,
    FieldAccess,
    Literal,
    Name,
    New,
    This,
    TypeRef,
    Unary,
)
from ..frontend.printer import print_expr
from ..frontend.program import MethodRef, Program
from .callgraph import resolve_callee
from .stack import VariableStack, resolve_param_ref
from .values import (
    AbstractValue,
    BoolConst,
    CollectionOf,
    EnumConst,
    IntConst,
    LengthOf,
    NullConst,
    ParamRef,
    StrConst,
    Unknown,
    constant,
    is_constant,
    java_string,
    literal_of,
)

COLLECTION_FACTORIES = {("List", "of"), ("Set", "of"), ("Arrays", "asList"), ("Collections", "singletonList")}
COLLECTION_CLASSES = {"ArrayList", "HashSet", "LinkedList", "TreeSet", "LinkedHashSet"}
ARITHMETIC_OPS = ("+", "-", "*", "/", "%")


class AnalysisHooks(Protocol):
    """Services the evaluator needs from the walker driving it."""

    def call_value(self, callee: MethodRef, args: Tuple[AbstractValue, ...], call: Call) -> AbstractValue:
        ...

    def diagnose(self, kind: str, message: str, span=None, detail: str = "") -> None:
        ...


class NullHooks:
    def call_value(self, callee, args, call) -> AbstractValue:
        return Unknown(reason=f"call to {callee}")

    def diagnose(self, kind, message, span=None, detail="") -> None:
        pass


def _fold_arithmetic(op: str, left: AbstractValue, right: AbstractValue) -> AbstractValue:
    if op == "+" and (isinstance(left, StrConst) or isinstance(right, StrConst)):
        left_text, right_text = java_string(left), java_string(right)
        if left_text is None or right_text is None:
            return Unknown(reason="string concatenation with an unknown operand")
        return StrConst(left_text + right_text)
    if not (isinstance(left, IntConst) and isinstance(right, IntConst)):
        return Unknown(reason=f"arithmetic on non-constant operands ({op})")
    a, b = left.value, right.value
    if op == "+":
        return IntConst(a + b)
    if op == "-":
        return IntConst(a - b)
    if op == "*":
        return IntConst(a * b)
    if b == 0:
        return Unknown(reason="division by zero")
    both_int = isinstance(a, int) and isinstance(b, int)
    if op == "/":
        if both_int:
            quotient = abs(a) // abs(b)
            return IntConst(quotient if (a >= 0) == (b >= 0) else -quotient)
        return IntConst(a / b)
    # Java remainder keeps the dividend's sign
    if both_int:
        remainder = abs(a) % abs(b)
        return IntConst(remainder if a >= 0 else -remainder)
    return IntConst(a - b * int(a / b))


def fold_comparison(op: str, left: AbstractValue, right: AbstractValue) -> Optional[bool]:
    """Outcome of comparing two tracked values, None when undecidable."""
    if op in ("==", "!="):
        if isinstance(left, NullConst) or isinstance(right, NullConst):
            if isinstance(left, NullConst) and isinstance(right, NullConst):
                same = True
            elif is_constant(left) or is_constant(right) or isinstance(left, CollectionOf) or isinstance(right, CollectionOf):
                same = False
            else:
                return None
            return same if op == "==" else not same
        if is_constant(left) and is_constant(right):
            same = type(left) is type(right) and literal_equals(literal_of(left), literal_of(right))
            return same if op == "==" else not same
        return None
    if isinstance(left, IntConst) and isinstance(right, IntConst):
        return compare(left.value, op, right.value)
    return None


class Evaluator:
    """Evaluates expressions of one method body.

    ``guards`` is the guard path of the statement being evaluated; a
    variable last written on a path that does not cover it reads as
    Unknown.
    """

    def __init__(
        self,
        program: Program,
        stack: VariableStack,
        ref: MethodRef,
        types: Dict[str, TypeRef],
        hooks: Optional[AnalysisHooks] = None,
    ):
        self.program = program
        self.stack = stack
        self.ref = ref
        self.types = types
        self.hooks = hooks or NullHooks()
        self.guards: Tuple = ()
        self._static_fields: Dict[Tuple[str, str], AbstractValue] = {}

    @property
    def filename(self) -> str:
        return self.program.filename(self.ref.class_name)

    def source(self, span) -> str:
        return f"{self.filename}:{span}"

    # ------------------------------------------------------------------

    def eval(self, expr: Expr) -> AbstractValue:
        if isinstance(expr, Literal):
            return constant(expr.value)
        if isinstance(expr, Name):
            return self.name(expr)
        if isinstance(expr, This):
            return Unknown(type_name=self.ref.class_name, reason="this")
        if isinstance(expr, FieldAccess):
            return self.field_access(expr)
        if isinstance(expr, Call):
            return self.call(expr)
        if isinstance(expr, New):
            if expr.type.name in COLLECTION_CLASSES and not expr.args:
                return CollectionOf(())
            # new objects do not carry the parameters they were built from
            return Unknown(type_name=expr.type.name, reason=f"new {expr.type}")
        if isinstance(expr, Unary):
            operand = self.eval(expr.operand)
            if expr.op == "-" and isinstance(operand, IntConst):
                return IntConst(-operand.value)
            if expr.op == "!" and isinstance(operand, BoolConst):
                return BoolConst(not operand.value)
            return Unknown(reason=f"{expr.op} on a non-constant")
        if isinstance(expr, Binary):
            return self.binary(expr)
        return Unknown(reason=f"unsupported expression {type(expr).__name__}")

    def binary(self, expr: Binary) -> AbstractValue:
        op = expr.op
        if op in ("&&", "||"):
            left = self.eval(expr.left)
            right = self.eval(expr.right)
            values = [v.value if isinstance(v, BoolConst) else None for v in (left, right)]
            if op == "&&":
                if False in values:
                    return BoolConst(False)
                if values == [True, True]:
                    return BoolConst(True)
            else:
                if True in values:
                    return BoolConst(True)
                if values == [False, False]:
                    return BoolConst(False)
            return Unknown(reason=f"undecidable {op}")
        left = self.eval(expr.left)
        right = self.eval(expr.right)
        if op in ARITHMETIC_OPS:
            return _fold_arithmetic(op, left, right)
        outcome = fold_comparison(op, left, right)
        if outcome is None:
            return Unknown(reason=f"comparison {op} on untracked values")
        return BoolConst(outcome)

    # ------------------------------------------------------------------
    # names and fields

    def name(self, expr: Name) -> AbstractValue:
        binding = self.stack.lookup(expr.id)
        if binding is not None:
            if not binding.visible_under(self.guards):
                type_name = binding.type.name if binding.type else None
                return Unknown(type_name=type_name, reason=f"{expr.id} depends on the path taken")
            return binding.value
        value = self.class_field(self.ref.class_name, expr.id)
        if value is not None:
            return value
        owner = self.program.enum_constant(expr.id)
        if owner is not None:
            return EnumConst(owner, expr.id)
        return Unknown(reason=f"unresolved name {expr.id}")

    def class_field(self, class_name: str, name: str) -> Optional[AbstractValue]:
        declared = self.program.class_field(class_name, name)
        if declared is None:
            return None
        key = (class_name, name)
        if key not in self._static_fields:
            value: AbstractValue = Unknown(type_name=declared.type.name, reason=f"field {name}")
            if declared.init is not None and "final" in declared.modifiers:
                value = self.eval(declared.init)
            self._static_fields[key] = value
        return self._static_fields[key]

    def param_field(self, receiver: ParamRef, name: str) -> AbstractValue:
        """Child parameter ``name`` of a tracked request value."""
        path = self.program.child_path(receiver.path, name)
        type_ref = self.program.path_types.get(path)
        if type_ref is None:
            return Unknown(reason=f"{receiver.model or 'request'} has no field {name}")
        return self._param(path, type_ref)

    def _param(self, path: str, type_ref: TypeRef) -> ParamRef:
        model, collection = None, False
        if self.program.is_model(type_ref.name) and not type_ref.dims:
            model = type_ref.name
        elif type_ref.element is not None:
            collection = True
            if self.program.is_model(type_ref.element.name):
                model = type_ref.element.name
        self.stack.touch(path)
        return ParamRef(path, model, collection)

    def model_field(self, receiver: Unknown, name: str, span) -> AbstractValue:
        """Field of a request-model value that is not linked to a parameter."""
        resolution = resolve_param_ref(name, self.stack, self.program, receiver.type_name)
        if resolution is None:
            return Unknown(reason=f"no parameter named {name}")
        if resolution.ambiguous:
            self.hooks.diagnose(
                "ambiguous",
                f"'{name}' resolved to {resolution.path}",
                span,
                detail="candidates: " + ", ".join(resolution.candidates),
            )
        return self._param(resolution.path, self.program.path_types[resolution.path])

    def field_access(self, expr: FieldAccess) -> AbstractValue:
        target = expr.target
        if isinstance(target, Name) and target.id in self.program.enums and self.stack.lookup(target.id) is None:
            if expr.name in self.program.enums[target.id].constants:
                return EnumConst(target.id, expr.name)
            return Unknown(reason=f"{target.id} has no constant {expr.name}")
        if isinstance(target, This):
            value = self.class_field(self.ref.class_name, expr.name)
            return value if value is not None else Unknown(reason=f"no field {expr.name}")
        if isinstance(target, Name) and target.id in self.program.classes and self.stack.lookup(target.id) is None:
            value = self.class_field(target.id, expr.name)
            return value if value is not None else Unknown(reason=f"no field {target.id}.{expr.name}")
        receiver = self.eval(target)
        if isinstance(receiver, ParamRef) and not receiver.collection:
            return self.param_field(receiver, expr.name)
        if isinstance(receiver, Unknown) and self.program.is_model(receiver.type_name):
            return self.model_field(receiver, expr.name, expr.span)
        return Unknown(reason=f"field {expr.name} of an untracked value")

    # ------------------------------------------------------------------
    # calls

    def program_callee(self, call: Call) -> Optional[MethodRef]:
        return resolve_callee(self.program, self.ref, call, self.types)

    def args(self, call: Call) -> Tuple[AbstractValue, ...]:
        return tuple(self.eval(arg) for arg in call.args)

    def call(self, call: Call) -> AbstractValue:
        target = call.target
        if isinstance(target, Name) and (target.id, call.name) in COLLECTION_FACTORIES and self.stack.lookup(target.id) is None:
            values = self.args(call)
            if all(is_constant(v) for v in values):
                return CollectionOf(tuple(values))
            return Unknown(reason="collection of untracked values")

        callee = self.program_callee(call)
        if callee is not None:
            return self.hooks.call_value(callee, self.args(call), call)
        if target is None or isinstance(target, This):
            return Unknown(reason=f"external call {print_expr(call)}")

        receiver = self.eval(target)
        kind = self.program.common_methods.get(call.name)
        if isinstance(receiver, ParamRef):
            return self.param_method(receiver, call, kind)
        if isinstance(receiver, Unknown) and self.program.is_model(receiver.type_name):
            name = self.program.accessor_field(receiver.type_name, call.name)
            if name is not None:
                return self.model_field(receiver, name, call.span)
        if isinstance(receiver, StrConst):
            return self.string_method(receiver, call, kind)
        if isinstance(receiver, CollectionOf):
            return self.collection_method(receiver, call, kind)
        return Unknown(reason=f"call {call.name} on an untracked value")

    def param_method(self, receiver: ParamRef, call: Call, kind: Optional[str]) -> AbstractValue:
        if receiver.model is not None and not receiver.collection:
            name = self.program.accessor_field(receiver.model, call.name)
            if name is not None:
                return self.param_field(receiver, name)
        if kind == "len" and not call.args and not receiver.is_root:
            return LengthOf(receiver.path)
        if receiver.collection and receiver.model is not None and call.name == "get" and len(call.args) == 1:
            return receiver.element()
        return Unknown(reason=f"{call.name} on parameter {receiver.path or 'request'}")

    def string_method(self, receiver: StrConst, call: Call, kind: Optional[str]) -> AbstractValue:
        text = receiver.value
        args = self.args(call)
        if kind == "len" and not args:
            return IntConst(len(text))
        if kind == "empty" and not args:
            return BoolConst(not text)
        if kind == "eq" and len(args) == 1:
            outcome = fold_comparison("==", receiver, args[0])
            return BoolConst(outcome) if outcome is not None else Unknown(reason="equals on untracked value")
        if kind == "prefix" and len(args) == 1 and isinstance(args[0], StrConst):
            return BoolConst(text.startswith(args[0].value))
        if call.name == "toUpperCase" and not args:
            return StrConst(text.upper())
        if call.name == "toLowerCase" and not args:
            return StrConst(text.lower())
        if call.name == "trim" and not args:
            return StrConst(text.strip())
        return Unknown(reason=f"string method {call.name}")

    def collection_method(self, receiver: CollectionOf, call: Call, kind: Optional[str]) -> AbstractValue:
        args = self.args(call)
        if kind == "len" and not args:
            return IntConst(len(receiver.elements))
        if kind == "empty" and not args:
            return BoolConst(not receiver.elements)
        if kind == "in" and len(args) == 1 and is_constant(args[0]):
            return BoolConst(any(fold_comparison("==", e, args[0]) for e in receiver.elements))
        return Unknown(reason=f"collection method {call.name}")
