"""Lexer, parser, printer and program model of the analyzed source subset."""

from .lexer import Token, tokenize
from .nodes import CompilationUnit, MethodDecl, Span, TypeRef
from .parser import parse_expression, parse_file, parse_unit
from .printer import print_expr, print_stmt, print_unit
from .program import ClassInfo, MethodRef, Program, load_program, resolve_program, source_files

__all__ = [
    "Token",
    "tokenize",
    "CompilationUnit",
    "MethodDecl",
    "Span",
    "TypeRef",
    "parse_expression",
    "parse_file",
    "parse_unit",
    "print_expr",
    "print_stmt",
    "print_unit",
    "ClassInfo",
    "MethodRef",
    "Program",
    "load_program",
    "resolve_program",
    "source_files",
]
