"""Source printer for the AST; ``print_expr`` also yields Unparsed atom text."""

import json
from typing import List, Optional

from .nodes import (
    Assign,
    Binary,
    Block,
    Break,
    Call,
    ClassDecl,
    CompilationUnit,
    Continue,
    EnumDecl,
    Expr,
    ExprStmt,
    FieldAccess,
    FieldDecl,
    For,
    ForEach,
    If,
    Literal,
    LocalVar,
    MethodDecl,
    Name,
    New,
    Return,
    Stmt,
    Switch,
    This,
    Throw,
    Unary,
)

_PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "==": 3,
    "!=": 3,
    "<": 4,
    "<=": 4,
    ">": 4,
    ">=": 4,
    "+": 5,
    "-": 5,
    "*": 6,
    "/": 6,
    "%": 6,
}
_UNARY_PRECEDENCE = 7
_ATOM_PRECEDENCE = 8

INDENT = "    "


def _precedence(expr: Expr) -> int:
    if isinstance(expr, Binary):
        return _PRECEDENCE[expr.op]
    if isinstance(expr, Unary):
        return _UNARY_PRECEDENCE
    return _ATOM_PRECEDENCE


def _literal(value) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    return repr(value)


def print_expr(expr: Expr) -> str:
    if isinstance(expr, Literal):
        return _literal(expr.value)
    if isinstance(expr, Name):
        return expr.id
    if isinstance(expr, This):
        return "this"
    if isinstance(expr, FieldAccess):
        return f"{_operand(expr.target, _ATOM_PRECEDENCE)}.{expr.name}"
    if isinstance(expr, Call):
        args = ", ".join(print_expr(a) for a in expr.args)
        if expr.target is None:
            return f"{expr.name}({args})"
        return f"{_operand(expr.target, _ATOM_PRECEDENCE)}.{expr.name}({args})"
    if isinstance(expr, New):
        args = ", ".join(print_expr(a) for a in expr.args)
        type_text = str(expr.type)
        if expr.type.name in ("ArrayList", "HashSet", "HashMap", "LinkedList") and not expr.type.args:
            type_text += "<>"
        return f"new {type_text}({args})"
    if isinstance(expr, Unary):
        return f"{expr.op}{_operand(expr.operand, _UNARY_PRECEDENCE)}"
    if isinstance(expr, Binary):
        own = _PRECEDENCE[expr.op]
        left = _operand(expr.left, own)
        right = _operand(expr.right, own + 1)
        return f"{left} {expr.op} {right}"
    raise TypeError(f"cannot print {type(expr).__name__}")


def _operand(expr: Expr, minimum: int) -> str:
    text = print_expr(expr)
    if _precedence(expr) < minimum:
        return f"({text})"
    return text


def _simple(stmt: Stmt) -> str:
    """Statement text without the trailing semicolon (for ``for`` headers)."""
    if isinstance(stmt, LocalVar):
        init = f" = {print_expr(stmt.init)}" if stmt.init is not None else ""
        return f"{stmt.type} {stmt.name}{init}"
    if isinstance(stmt, Assign):
        return f"{print_expr(stmt.target)} = {print_expr(stmt.value)}"
    if isinstance(stmt, ExprStmt):
        return print_expr(stmt.expr)
    raise TypeError(f"{type(stmt).__name__} cannot appear in a for header")


def print_stmt(stmt: Stmt, level: int = 0) -> List[str]:
    pad = INDENT * level
    if isinstance(stmt, Block):
        lines = [pad + "{"]
        for inner in stmt.body:
            lines.extend(print_stmt(inner, level + 1))
        return lines + [pad + "}"]
    if isinstance(stmt, (LocalVar, Assign, ExprStmt)):
        return [f"{pad}{_simple(stmt)};"]
    if isinstance(stmt, If):
        lines = [f"{pad}if ({print_expr(stmt.cond)})"] + _body(stmt.then, level)
        if stmt.orelse is not None:
            lines += [f"{pad}else"] + _body(stmt.orelse, level)
        return lines
    if isinstance(stmt, Switch):
        lines = [f"{pad}switch ({print_expr(stmt.subject)}) {{"]
        for case in stmt.cases:
            if case.is_default:
                lines.append(f"{pad}{INDENT}default:")
            else:
                labels = ", ".join(print_expr(label) for label in case.labels)
                lines.append(f"{pad}{INDENT}case {labels}:")
            for inner in case.body:
                lines.extend(print_stmt(inner, level + 2))
        return lines + [pad + "}"]
    if isinstance(stmt, For):
        init = _simple(stmt.init) if stmt.init is not None else ""
        cond = print_expr(stmt.cond) if stmt.cond is not None else ""
        update = ", ".join(_simple(u) for u in stmt.update)
        return [f"{pad}for ({init}; {cond}; {update})"] + _body(stmt.body, level)
    if isinstance(stmt, ForEach):
        var = f"{stmt.var_type} {stmt.var}" if stmt.var_type is not None else stmt.var
        return [f"{pad}for ({var} : {print_expr(stmt.iterable)})"] + _body(stmt.body, level)
    if isinstance(stmt, Return):
        value = f" {print_expr(stmt.value)}" if stmt.value is not None else ""
        return [f"{pad}return{value};"]
    if isinstance(stmt, Throw):
        return [f"{pad}throw {print_expr(stmt.value)};"]
    if isinstance(stmt, Break):
        return [f"{pad}break;"]
    if isinstance(stmt, Continue):
        return [f"{pad}continue;"]
    raise TypeError(f"cannot print {type(stmt).__name__}")


def _body(stmt: Stmt, level: int) -> List[str]:
    if isinstance(stmt, Block):
        return print_stmt(stmt, level)
    return print_stmt(stmt, level + 1)


def _modifiers(modifiers) -> str:
    return "".join(f"{m} " for m in modifiers)


def _print_field(decl: FieldDecl, level: int) -> str:
    init = f" = {print_expr(decl.init)}" if decl.init is not None else ""
    return f"{INDENT * level}{_modifiers(decl.modifiers)}{decl.type} {decl.name}{init};"


def _print_method(method: MethodDecl, owner: Optional[str], level: int) -> List[str]:
    params = ", ".join(f"{p.type} {p.name}" for p in method.params)
    pad = INDENT * level
    if owner is not None and method.name == owner and method.return_type.name == "void":
        head = f"{pad}{_modifiers(method.modifiers)}{method.name}({params})"
    else:
        head = f"{pad}{_modifiers(method.modifiers)}{method.return_type} {method.name}({params})"
    return [head] + print_stmt(method.body, level)


def print_class(decl: ClassDecl, level: int = 0) -> List[str]:
    pad = INDENT * level
    extends = f" extends {decl.superclass}" if decl.superclass is not None else ""
    lines = [f"{pad}{_modifiers(decl.modifiers)}class {decl.name}{extends} {{"]
    lines.extend(_print_field(f, level + 1) for f in decl.fields)
    for method in decl.methods:
        lines.extend(_print_method(method, decl.name, level + 1))
    return lines + [pad + "}"]


def print_enum(decl: EnumDecl, level: int = 0) -> List[str]:
    pad = INDENT * level
    return [f"{pad}{_modifiers(decl.modifiers)}enum {decl.name} {{ {', '.join(decl.constants)} }}"]


def print_unit(unit: CompilationUnit) -> str:
    lines: List[str] = []
    if unit.package:
        lines.append(f"package {unit.package};")
    lines.extend(f"import {name};" for name in unit.imports)
    for decl in unit.enums:
        lines.extend(print_enum(decl))
    for decl in unit.classes:
        lines.extend(print_class(decl))
    return "\n".join(lines) + "\n"
