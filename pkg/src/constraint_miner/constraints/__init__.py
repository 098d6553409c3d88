"""Constraint algebra shared by the documentation, code and evaluation pipelines."""

from .atoms import Atom, Cmp, CmpParams, Eq, InSet, Len, Present, Unparsed
from .constraint import (
    Constraint,
    Origin,
    absent,
    all_or_none,
    any_of,
    decompose,
    decompose_all,
    dedupe,
    exactly_one,
    present,
    requires,
)
from .domain import Domain, build_domain, combine, equivalent
from .dsl import dump_dsl, load_dsl_file, parse_dsl, pretty_print
from .formula import (
    ABSENT,
    FALSE,
    TRUE,
    And,
    Assignment,
    Formula,
    Leaf,
    Not,
    Or,
    evaluate,
    normalize,
    render,
    render_term,
)

__all__ = [
    "Atom",
    "Cmp",
    "CmpParams",
    "Eq",
    "InSet",
    "Len",
    "Present",
    "Unparsed",
    "Constraint",
    "Origin",
    "absent",
    "all_or_none",
    "any_of",
    "decompose",
    "decompose_all",
    "dedupe",
    "exactly_one",
    "present",
    "requires",
    "Domain",
    "build_domain",
    "combine",
    "equivalent",
    "dump_dsl",
    "load_dsl_file",
    "parse_dsl",
    "pretty_print",
    "ABSENT",
    "FALSE",
    "TRUE",
    "And",
    "Assignment",
    "Formula",
    "Leaf",
    "Not",
    "Or",
    "evaluate",
    "normalize",
    "render",
    "render_term",
]
