"""Translation of branch conditions into constraint formulas."""

from typing import Optional, Protocol, Tuple

from ..constraints.atoms import FLIPPED_OPS, Cmp, CmpParams, Eq, InSet, Len, Present, Unparsed, is_number
from ..constraints.formula import FALSE, TRUE, And, Formula, Leaf, Not, Or, normalize
from ..frontend.nodes import Binary, Call, Expr, Literal, Unary
from ..frontend.printer import print_expr
from ..frontend.program import MethodRef
from .evaluator import Evaluator, fold_comparison
from .values import (
    AbstractValue,
    BoolConst,
    CollectionOf,
    GuardValue,
    LengthOf,
    NullConst,
    ParamRef,
    is_constant,
    literal_of,
)

ORDERING_OPS = ("<", "<=", ">", ">=")


class SummaryHooks(Protocol):
    def boolean_summary(self, callee: MethodRef, args: Tuple[AbstractValue, ...], call: Call) -> Formula:
        ...


def _atom(atom) -> Formula:
    return Leaf(atom)


def _const(value: bool) -> Formula:
    return TRUE if value else FALSE


def _param(value: AbstractValue) -> Optional[ParamRef]:
    """A parameter usable in an atom (the request object itself is not)."""
    if isinstance(value, ParamRef) and not value.is_root:
        return value
    return None


class GuardParser:
    """Parses conditions of one method body; needs the evaluator of that body."""

    def __init__(self, evaluator: Evaluator, hooks: Optional[SummaryHooks] = None):
        self.evaluator = evaluator
        self.hooks = hooks

    @property
    def program(self):
        return self.evaluator.program

    def parse(self, expr: Expr) -> Formula:
        return normalize(self._parse(expr))

    def unparsed(self, expr: Expr) -> Formula:
        text = print_expr(expr)
        self.evaluator.hooks.diagnose("unparsed", text, expr.span)
        return _atom(Unparsed(text))

    def _parse(self, expr: Expr) -> Formula:
        if isinstance(expr, Binary):
            if expr.op == "&&":
                return And((self._parse(expr.left), self._parse(expr.right)))
            if expr.op == "||":
                return Or((self._parse(expr.left), self._parse(expr.right)))
            if expr.op in ("==", "!=") or expr.op in ORDERING_OPS:
                return self.comparison(expr)
        if isinstance(expr, Unary) and expr.op == "!":
            return Not(self._parse(expr.operand))
        if isinstance(expr, Literal) and isinstance(expr.value, bool):
            return _const(expr.value)
        if isinstance(expr, Call):
            parsed = self.call(expr)
            if parsed is not None:
                return parsed
        return self.value_formula(self.evaluator.eval(expr), expr)

    def value_formula(self, value: AbstractValue, expr: Expr) -> Formula:
        if isinstance(value, BoolConst):
            return _const(value.value)
        if isinstance(value, GuardValue):
            return value.formula
        param = _param(value)
        if param is not None and not param.collection and param.model is None:
            return _atom(Eq(param.path, True))
        return self.unparsed(expr)

    # ------------------------------------------------------------------

    def comparison(self, expr: Binary) -> Formula:
        op = expr.op
        left = self.evaluator.eval(expr.left)
        right = self.evaluator.eval(expr.right)
        folded = fold_comparison(op, left, right)
        if folded is not None:
            return _const(folded)
        if op in ("==", "!=") and (isinstance(left, NullConst) or isinstance(right, NullConst)):
            param = _param(right if isinstance(left, NullConst) else left)
            if param is None:
                return self.unparsed(expr)
            present = _atom(Present(param.path))
            return Not(present) if op == "==" else present
        formula = self.relate(left, op, right)
        if formula is None:
            formula = self.relate(right, FLIPPED_OPS[op], left)
        return formula if formula is not None else self.unparsed(expr)

    def relate(self, left: AbstractValue, op: str, right: AbstractValue) -> Optional[Formula]:
        """Atom for ``left op right`` with a parameter on the left, if one fits."""
        if isinstance(left, LengthOf):
            if is_constant(right):
                bound = literal_of(right)
                if isinstance(bound, int) and not isinstance(bound, bool) and bound >= 0:
                    return _atom(Len(left.path, op, bound))
            return None
        param = _param(left)
        if param is None:
            return None
        other = _param(right)
        if other is not None:
            return _atom(CmpParams(param.path, op, other.path))
        if not is_constant(right):
            return None
        literal = literal_of(right)
        if op == "==":
            return _atom(Eq(param.path, literal))
        if is_number(literal):
            return _atom(Cmp(param.path, op, literal))
        if op == "!=":
            return Not(_atom(Eq(param.path, literal)))
        return None

    # ------------------------------------------------------------------

    def call(self, expr: Call) -> Optional[Formula]:
        evaluator = self.evaluator
        callee = evaluator.program_callee(expr)
        if callee is not None:
            method = self.program.method(callee)
            if method is not None and method.returns_boolean and self.hooks is not None:
                return self.hooks.boolean_summary(callee, evaluator.args(expr), expr)
            return None
        kind = self.program.common_methods.get(expr.name)
        if expr.target is None or kind is None:
            return None
        receiver = evaluator.eval(expr.target)
        if kind == "empty" and not expr.args:
            param = _param(receiver)
            if param is not None:
                return _atom(Len(param.path, "==", 0))
            return None
        if kind == "eq" and len(expr.args) == 1:
            argument = evaluator.eval(expr.args[0])
            folded = fold_comparison("==", receiver, argument)
            if folded is not None:
                return _const(folded)
            if isinstance(argument, NullConst):
                return FALSE
            return self.relate(receiver, "==", argument) or self.relate(argument, "==", receiver)
        if kind == "in" and len(expr.args) == 1 and isinstance(receiver, CollectionOf):
            param = _param(evaluator.eval(expr.args[0]))
            if param is None:
                return None
            if not receiver.elements:
                return FALSE
            return _atom(InSet(param.path, frozenset(receiver.literals())))
        return None

    def case_formula(self, subject: AbstractValue, subject_expr: Expr, label: Expr) -> Formula:
        """Condition under which a switch over ``subject`` selects ``label``."""
        value = self.evaluator.eval(label)
        folded = fold_comparison("==", subject, value)
        if folded is not None:
            return _const(folded)
        param = _param(subject)
        if param is not None and is_constant(value):
            return _atom(Eq(param.path, literal_of(value)))
        return self.unparsed(Binary("==", subject_expr, label, subject_expr.span))


def parse_guard(expr: Expr, evaluator: Evaluator, hooks: Optional[SummaryHooks] = None) -> Formula:
    return GuardParser(evaluator, hooks).parse(expr)
