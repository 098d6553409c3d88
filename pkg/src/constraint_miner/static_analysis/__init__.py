"""Constraint extraction from the server-side source of an endpoint."""

from .callgraph import CallGraph, build_call_graph, resolve_callee
from .cfg import Cfg, GuardRef, build_cfg
from .diagnostics import DIAGNOSTIC_KINDS, AnalysisDiagnostic, DiagnosticLog, read_diagnostics, write_diagnostics
from .evaluator import Evaluator
from .extractor import (
    ConstraintExtractor,
    EndpointAnalysis,
    analyze_endpoint,
    analyze_program,
    extract_constraints,
)
from .guards import GuardParser, parse_guard
from .stack import Resolution, VariableStack, resolve_param_ref
from .values import (
    BoolConst,
    CollectionOf,
    EnumConst,
    GuardValue,
    IntConst,
    LengthOf,
    NullConst,
    ParamRef,
    StrConst,
    Unknown,
)

__all__ = [
    "CallGraph",
    "build_call_graph",
    "resolve_callee",
    "Cfg",
    "GuardRef",
    "build_cfg",
    "DIAGNOSTIC_KINDS",
    "AnalysisDiagnostic",
    "DiagnosticLog",
    "read_diagnostics",
    "write_diagnostics",
    "Evaluator",
    "ConstraintExtractor",
    "EndpointAnalysis",
    "analyze_endpoint",
    "analyze_program",
    "extract_constraints",
    "GuardParser",
    "parse_guard",
    "Resolution",
    "VariableStack",
    "resolve_param_ref",
    "BoolConst",
    "CollectionOf",
    "EnumConst",
    "GuardValue",
    "IntConst",
    "LengthOf",
    "NullConst",
    "ParamRef",
    "StrConst",
    "Unknown",
]
