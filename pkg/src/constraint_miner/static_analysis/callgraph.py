"""Static call graph rooted at a controller method."""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx

from ..frontend.nodes import (
    Assign,
    Binary,
    Block,
    Call,
    Expr,
    ExprStmt,
    FieldAccess,
    For,
    ForEach,
    If,
    LocalVar,
    MethodDecl,
    Name,
    New,
    Return,
    Span,
    Stmt,
    Switch,
    This,
    Throw,
    TypeRef,
    Unary,
)
from ..frontend.printer import print_expr
from ..frontend.program import MethodRef, Program
from ..utils.logger import get_logger

logger = get_logger(__name__)

EXTERNAL_PREFIX = "external:"


# --------------------------------------------------------------------------
# AST walking


def iter_statements(stmt: Stmt) -> Iterator[Stmt]:
    yield stmt
    if isinstance(stmt, Block):
        for inner in stmt.body:
            yield from iter_statements(inner)
    elif isinstance(stmt, If):
        yield from iter_statements(stmt.then)
        if stmt.orelse is not None:
            yield from iter_statements(stmt.orelse)
    elif isinstance(stmt, Switch):
        for case in stmt.cases:
            for inner in case.body:
                yield from iter_statements(inner)
    elif isinstance(stmt, For):
        if stmt.init is not None:
            yield from iter_statements(stmt.init)
        for update in stmt.update:
            yield from iter_statements(update)
        yield from iter_statements(stmt.body)
    elif isinstance(stmt, ForEach):
        yield from iter_statements(stmt.body)


def statement_expressions(stmt: Stmt) -> List[Expr]:
    if isinstance(stmt, LocalVar):
        return [stmt.init] if stmt.init is not None else []
    if isinstance(stmt, Assign):
        return [stmt.target, stmt.value]
    if isinstance(stmt, If):
        return [stmt.cond]
    if isinstance(stmt, Switch):
        return [stmt.subject] + [label for case in stmt.cases for label in case.labels]
    if isinstance(stmt, For):
        return [stmt.cond] if stmt.cond is not None else []
    if isinstance(stmt, ForEach):
        return [stmt.iterable]
    if isinstance(stmt, (Return, Throw)):
        return [stmt.value] if stmt.value is not None else []
    if isinstance(stmt, ExprStmt):
        return [stmt.expr]
    return []


def iter_calls(expr: Expr) -> Iterator[Call]:
    if isinstance(expr, Call):
        if expr.target is not None:
            yield from iter_calls(expr.target)
        for arg in expr.args:
            yield from iter_calls(arg)
        yield expr
    elif isinstance(expr, FieldAccess):
        yield from iter_calls(expr.target)
    elif isinstance(expr, New):
        for arg in expr.args:
            yield from iter_calls(arg)
    elif isinstance(expr, Binary):
        yield from iter_calls(expr.left)
        yield from iter_calls(expr.right)
    elif isinstance(expr, Unary):
        yield from iter_calls(expr.operand)


def method_calls(method: MethodDecl) -> Iterator[Call]:
    for stmt in iter_statements(method.body):
        for expr in statement_expressions(stmt):
            yield from iter_calls(expr)


# --------------------------------------------------------------------------
# Callee resolution


def declared_types(program: Program, ref: MethodRef) -> Dict[str, TypeRef]:
    """Declared type of every field, parameter and local visible in ``ref``."""
    types: Dict[str, TypeRef] = {}
    info = program.classes.get(ref.class_name)
    if info is None:
        return types
    for name, declared in info.fields.items():
        types[name] = declared.type
    method = info.methods[ref.method_name]
    for param in method.params:
        types[param.name] = param.type
    for stmt in iter_statements(method.body):
        if isinstance(stmt, LocalVar):
            types[stmt.name] = stmt.type
        elif isinstance(stmt, ForEach) and stmt.var_type is not None:
            types[stmt.var] = stmt.var_type
    return types


def _find_method(program: Program, class_name: str, method_name: str) -> Optional[MethodRef]:
    seen = set()
    info = program.classes.get(class_name)
    while info is not None and info.name not in seen:
        seen.add(info.name)
        if method_name in info.methods:
            return MethodRef(info.name, method_name)
        superclass = info.decl.superclass
        info = program.classes.get(superclass.name) if superclass else None
    return None


def receiver_class(program: Program, ref: MethodRef, target: Optional[Expr], types: Dict[str, TypeRef]) -> Optional[str]:
    """Program class a call receiver belongs to, when it can be told statically."""
    if target is None or isinstance(target, This):
        return ref.class_name
    if isinstance(target, Name):
        if target.id in types:
            return types[target.id].name
        if target.id in program.classes:
            return target.id
        return None
    if isinstance(target, FieldAccess) and isinstance(target.target, This):
        declared = program.class_field(ref.class_name, target.name)
        return declared.type.name if declared else None
    return None


def resolve_callee(program: Program, ref: MethodRef, call: Call, types: Dict[str, TypeRef]) -> Optional[MethodRef]:
    """Program method a call invokes; None for library calls and request-model getters."""
    class_name = receiver_class(program, ref, call.target, types)
    if class_name is None or class_name not in program.classes:
        return None
    if program.is_model(class_name) and program.accessor_field(class_name, call.name):
        return None
    return _find_method(program, class_name, call.name)


def is_external(program: Program, ref: MethodRef, call: Call, types: Dict[str, TypeRef]) -> bool:
    """Unqualified calls that no program class defines."""
    if call.target is not None and not isinstance(call.target, This):
        return False
    return resolve_callee(program, ref, call, types) is None


# --------------------------------------------------------------------------
# Graph


@dataclass(frozen=True)
class CallSite:
    caller: MethodRef
    callee: str
    span: Span
    args: Tuple[str, ...] = ()

    def source(self, program: Program) -> str:
        return f"{program.filename(self.caller.class_name)}:{self.span}"

    def to_dict(self) -> dict:
        return {"caller": str(self.caller), "callee": self.callee, "at": str(self.span), "args": list(self.args)}


@dataclass
class CallGraph:
    """Depth-first expansion from ``root``; nodes are ``Class.method`` or ``external:name``."""

    root: MethodRef
    max_depth: int
    graph: nx.DiGraph = field(default_factory=nx.DiGraph)
    truncated: List[CallSite] = field(default_factory=list)
    recursive: List[CallSite] = field(default_factory=list)
    external: List[CallSite] = field(default_factory=list)

    def depth(self, ref: MethodRef) -> Optional[int]:
        data = self.graph.nodes.get(str(ref))
        return data["depth"] if data else None

    def callees(self, ref: MethodRef) -> List[str]:
        return sorted(self.graph.successors(str(ref))) if str(ref) in self.graph else []

    def methods(self) -> List[str]:
        return sorted(n for n in self.graph.nodes if not n.startswith(EXTERNAL_PREFIX))

    def to_dict(self) -> dict:
        return {
            "root": str(self.root),
            "maxDepth": self.max_depth,
            "nodes": sorted(self.graph.nodes),
            "edges": [
                {"caller": a, "callee": b, "kind": data["kind"], "sites": [s.to_dict() for s in data["sites"]]}
                for a, b, data in sorted(self.graph.edges(data=True), key=lambda e: (e[0], e[1]))
            ],
            "truncated": [s.to_dict() for s in self.truncated],
        }


def _add_edge(graph: nx.DiGraph, caller: str, callee: str, kind: str, site: CallSite) -> None:
    if graph.has_edge(caller, callee):
        graph[caller][callee]["sites"].append(site)
    else:
        graph.add_edge(caller, callee, kind=kind, sites=[site])


def build_call_graph(program: Program, root: MethodRef, max_depth: Optional[int] = None) -> CallGraph:
    """Expand calls depth first from ``root`` up to ``max_depth`` levels.

    A call back into a method on the current path becomes a ``recursive``
    edge and is not expanded. Calls one level past ``max_depth`` are listed
    as truncated and add no node.
    """
    limit = max_depth if max_depth is not None else program.max_depth
    result = CallGraph(root=root, max_depth=limit)
    graph = result.graph
    graph.add_node(str(root), depth=0, external=False)
    expanded: Dict[MethodRef, int] = {}

    def expand(ref: MethodRef, depth: int, path: Tuple[MethodRef, ...]) -> None:
        if ref in expanded and expanded[ref] <= depth:
            return
        expanded[ref] = depth
        method = program.method(ref)
        types = declared_types(program, ref)
        for call in method_calls(method):
            args = tuple(print_expr(a) for a in call.args)
            callee = resolve_callee(program, ref, call, types)
            if callee is None:
                if is_external(program, ref, call, types):
                    node = EXTERNAL_PREFIX + call.name
                    site = CallSite(ref, node, call.span, args)
                    graph.add_node(node, depth=depth + 1, external=True)
                    _add_edge(graph, str(ref), node, "external", site)
                    result.external.append(site)
                continue
            site = CallSite(ref, str(callee), call.span, args)
            if callee in path:
                _add_edge(graph, str(ref), str(callee), "recursive", site)
                result.recursive.append(site)
                continue
            if depth + 1 > limit:
                result.truncated.append(site)
                continue
            if str(callee) in graph:
                graph.nodes[str(callee)]["depth"] = min(graph.nodes[str(callee)]["depth"], depth + 1)
            else:
                graph.add_node(str(callee), depth=depth + 1, external=False)
            _add_edge(graph, str(ref), str(callee), "call", site)
            expand(callee, depth + 1, path + (callee,))

    expand(root, 0, (root,))
    logger.debug(
        f"Call graph from {root}: {graph.number_of_nodes()} nodes, "
        f"{len(result.truncated)} truncated, {len(result.recursive)} recursive"
    )
    return result
