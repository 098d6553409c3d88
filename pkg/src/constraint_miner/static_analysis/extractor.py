"""Constraint extraction: walks controller CFGs and records invalid states.

The walk is partially path-sensitive. Each statement is guarded by the
conditions of the branches it is syntactically nested in; conditions do not
flow past their branch. A variable keeps its most recent write, but reads
from a statement the write does not dominate come back Unknown.
"""

from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..config.files import AnalysisConfig
from ..constraints.atoms import Present, Unparsed
from ..constraints.constraint import Constraint, Origin, dedupe
from ..constraints.dsl import dump_dsl
from ..constraints.formula import FALSE, TRUE, Formula, Leaf, conjoin, disjoin, is_false, is_true, negate
from ..frontend.nodes import Assign, Call, ExprStmt, For, LocalVar, Name, Param, Return, Stmt, Switch, Throw, TypeRef
from ..frontend.printer import print_expr
from ..frontend.program import MethodRef, Program, load_program
from ..utils.logger import get_logger
from .callgraph import CallGraph, build_call_graph, declared_types
from .cfg import BODY_LABEL, FALSE_LABEL, TRUE_LABEL, Cfg, GuardRef, build_cfg
from .diagnostics import AnalysisDiagnostic, DiagnosticLog, write_diagnostics
from .evaluator import Evaluator
from .guards import GuardParser
from .stack import VariableStack
from .values import AbstractValue, BoolConst, CollectionOf, GuardValue, ParamRef, Unknown, is_constant

logger = get_logger(__name__)

EMIT, SUMMARY = "emit", "summary"
BOOLEAN_TYPES = ("boolean", "Boolean")


def _short(filename: str) -> str:
    return Path(filename).name


@dataclass
class ReturnPath:
    condition: Formula
    value: Optional[AbstractValue] = None
    formula: Optional[Formula] = None


class _MethodWalk:
    """One pass over a method body in a given calling context."""

    def __init__(self, extractor: "ConstraintExtractor", ref: MethodRef, prefix: Formula, mode: str):
        self.extractor = extractor
        self.program = extractor.program
        self.ref = ref
        self.method = self.program.method(ref)
        self.cfg: Cfg = extractor.cfg(ref)
        self.prefix = prefix
        self.mode = mode
        self.evaluator = Evaluator(self.program, extractor.stack, ref, extractor.types(ref), hooks=extractor)
        self.parser = GuardParser(self.evaluator, hooks=extractor)
        self.branches: Dict[int, Dict[str, Formula]] = {}
        self.returns: List[ReturnPath] = []
        self.precondition: Formula = prefix

    @property
    def filename(self) -> str:
        return _short(self.program.filename(self.ref.class_name))

    @property
    def stack(self) -> VariableStack:
        return self.extractor.stack

    # ------------------------------------------------------------------
    # conditions

    def guard_formula(self, guard: GuardRef) -> Formula:
        table = self.branches.get(guard.branch)
        if table is None:
            return FALSE
        if guard.case_indices:
            return disjoin(*(table.get(index, FALSE) for index in guard.case_indices))
        return table.get(guard.label, FALSE)

    def local_condition(self, node: int) -> Formula:
        parts = [self.guard_formula(g) for g in self.cfg.guards(node)]
        for exit_node, taken in self.cfg.early_exits(node, skip_true_returns=self.mode == SUMMARY):
            parts.append(negate(conjoin(*(self.guard_formula(g) for g in taken))))
            exit_stmt = self.cfg.data(exit_node)["stmt"]
            self.extractor.diagnose(
                "fall-through",
                f"assumes the {self.cfg.kind(exit_node)} at {exit_stmt.span} was not taken",
                self.cfg.data(node)["stmt"].span,
            )
        return conjoin(*parts)

    # ------------------------------------------------------------------

    def run(self, args: Tuple[AbstractValue, ...]) -> List[ReturnPath]:
        for param, value in zip(self.method.params, args):
            self.stack.declare(param.name, value, param.type)
        for node in self.cfg.statement_nodes():
            self.visit(node)
        return self.returns

    def visit(self, node: int) -> None:
        data = self.cfg.data(node)
        stmt: Stmt = data["stmt"]
        guards = data["guards"]
        self.stack.sync(data["scope"])
        self.evaluator.guards = guards
        if any(is_false(self.guard_formula(g)) for g in guards):
            return
        local = self.local_condition(node)
        if is_false(local):
            return
        self.precondition = conjoin(self.prefix, local)
        kind = data["kind"]
        if kind == "branch":
            self.branch(node, stmt)
        elif kind == "switch":
            self.switch(node, stmt)
        elif kind == "loop":
            self.loop(node, stmt, guards)
        elif isinstance(stmt, LocalVar):
            self.stack.declare(stmt.name, self.value(stmt.init, stmt.type), stmt.type, guards)
        elif isinstance(stmt, Assign):
            self.assign(stmt, guards)
        elif isinstance(stmt, ExprStmt):
            self.expression_statement(stmt, guards)
        elif isinstance(stmt, Throw):
            self.invalid_state(stmt)
        elif isinstance(stmt, Return):
            self.record_return(stmt, local)

    def branch(self, node: int, stmt) -> None:
        formula = self.parser.parse(stmt.cond)
        self.branches[node] = {TRUE_LABEL: formula, FALSE_LABEL: negate(formula)}
        if is_true(formula) or is_false(formula):
            outcome = "true" if is_true(formula) else "false"
            self.extractor.diagnose(
                "dead-branch", f"condition {print_expr(stmt.cond)} is always {outcome}", stmt.cond.span
            )

    def switch(self, node: int, stmt: Switch) -> None:
        subject = self.evaluator.eval(stmt.subject)
        table: Dict[str, Formula] = {}
        matched: List[Formula] = []
        for index, case in enumerate(stmt.cases):
            if case.is_default:
                continue
            formula = disjoin(*(self.parser.case_formula(subject, stmt.subject, label) for label in case.labels))
            table[str(index)] = formula
            matched.append(formula)
        table["default"] = negate(disjoin(*matched))
        self.branches[node] = table

    def loop(self, node: int, stmt, guards) -> None:
        if isinstance(stmt, For):
            body = self.parser.parse(stmt.cond) if stmt.cond is not None else TRUE
            self.branches[node] = {BODY_LABEL: body}
            return
        iterable = self.evaluator.eval(stmt.iterable)
        type_name = stmt.var_type.name if stmt.var_type is not None else None
        if isinstance(iterable, ParamRef) and iterable.collection and not iterable.is_root:
            body: Formula = Leaf(Present(iterable.path))
            element: AbstractValue = (
                iterable.element()
                if iterable.model is not None
                else Unknown(type_name=type_name, reason=f"element of {iterable.path}")
            )
        elif isinstance(iterable, CollectionOf):
            body = TRUE if iterable.elements else FALSE
            element = Unknown(type_name=type_name, reason="element of a constant collection")
        else:
            body = negate(self.parser.unparsed(Call(stmt.iterable, "isEmpty", (), stmt.iterable.span)))
            element = Unknown(type_name=type_name, reason=f"element of {print_expr(stmt.iterable)}")
        self.branches[node] = {BODY_LABEL: body}
        self.stack.declare(stmt.var, element, stmt.var_type, guards)

    # ------------------------------------------------------------------
    # statements

    def value(self, expr, type_ref: Optional[TypeRef]) -> AbstractValue:
        if expr is None:
            return Unknown(type_name=type_ref.name if type_ref else None, reason="uninitialized")
        if type_ref is not None and type_ref.name in BOOLEAN_TYPES and not type_ref.dims:
            formula = self.parser.parse(expr)
            if is_true(formula) or is_false(formula):
                return BoolConst(is_true(formula))
            return GuardValue(formula)
        value = self.evaluator.eval(expr)
        if isinstance(value, Unknown) and value.type_name is None and type_ref is not None:
            return Unknown(type_name=type_ref.name, reason=value.reason)
        return value

    def assign(self, stmt: Assign, guards) -> None:
        if not isinstance(stmt.target, Name):
            self.evaluator.eval(stmt.value)
            return
        binding = self.stack.lookup(stmt.target.id)
        if binding is None:
            self.evaluator.eval(stmt.value)
            return
        self.stack.assign(stmt.target.id, self.value(stmt.value, binding.type), guards)

    def expression_statement(self, stmt: ExprStmt, guards) -> None:
        expr = stmt.expr
        if isinstance(expr, Call):
            if self.extractor.is_invalid_state_call(expr):
                self.invalid_state(stmt)
                return
            if expr.name == "add" and isinstance(expr.target, Name) and len(expr.args) == 1:
                current = self.evaluator.eval(expr.target)
                if isinstance(current, CollectionOf):
                    element = self.evaluator.eval(expr.args[0])
                    updated: AbstractValue = (
                        current.add(element)
                        if is_constant(element)
                        else Unknown(reason=f"{expr.target.id} holds untracked values")
                    )
                    self.stack.assign(expr.target.id, updated, guards)
                    return
        self.evaluator.eval(expr)

    def invalid_state(self, stmt: Stmt) -> None:
        if self.mode == SUMMARY:
            return
        precondition = self.precondition
        if is_true(precondition):
            logger.debug(f"{self.filename}:{stmt.span}: unconditional invalid state skipped")
            return
        self.extractor.emit(
            Constraint(precondition, origin=Origin.CODE, source_ref=f"{self.filename}:{stmt.span.line}")
        )

    def record_return(self, stmt: Return, local: Formula) -> None:
        if stmt.value is None:
            self.returns.append(ReturnPath(local))
        elif self.mode == SUMMARY and self.method.returns_boolean:
            self.returns.append(ReturnPath(local, formula=self.parser.parse(stmt.value)))
        else:
            self.returns.append(ReturnPath(local, value=self.value(stmt.value, self.method.return_type)))


class ConstraintExtractor:
    """Extracts the invalid-state constraints reachable from one controller method."""

    def __init__(self, program: Program, root: MethodRef, max_depth: Optional[int] = None, log: Optional[DiagnosticLog] = None):
        self.program = program
        self.root = root
        self.max_depth = max_depth if max_depth is not None else program.max_depth
        self.stack = VariableStack()
        self.log = log if log is not None else DiagnosticLog()
        self.constraints: List[Constraint] = []
        self.call_graph: Optional[CallGraph] = None
        self._walks: List[_MethodWalk] = []
        self._cfgs: Dict[MethodRef, Cfg] = {}
        self._types: Dict[MethodRef, Dict[str, TypeRef]] = {}

    def cfg(self, ref: MethodRef) -> Cfg:
        if ref not in self._cfgs:
            self._cfgs[ref] = build_cfg(self.program.method(ref))
        return self._cfgs[ref]

    def types(self, ref: MethodRef) -> Dict[str, TypeRef]:
        if ref not in self._types:
            self._types[ref] = declared_types(self.program, ref)
        return self._types[ref]

    @property
    def _call_stack(self) -> List[MethodRef]:
        return [walk.ref for walk in self._walks]

    # hooks used by the evaluator and guard parser

    def diagnose(self, kind: str, message: str, span=None, detail: str = "") -> None:
        source = ""
        if span is not None and self._walks:
            source = f"{self._walks[-1].filename}:{span}"
        self.log.add(kind, message, source, detail)

    def _may_enter(self, callee: MethodRef, call: Call) -> bool:
        if callee in self._call_stack:
            self.diagnose("recursive", f"recursive call to {callee} not followed", call.span)
            return False
        if len(self._walks) > self.max_depth:
            self.diagnose("truncated", f"call to {callee} exceeds depth {self.max_depth}", call.span)
            return False
        return True

    def call_value(self, callee: MethodRef, args: Tuple[AbstractValue, ...], call: Call) -> AbstractValue:
        method = self.program.method(callee)
        unknown = Unknown(type_name=method.return_type.name, reason=f"result of {callee}")
        if not self._may_enter(callee, call):
            return unknown
        current = self._walks[-1]
        mode = SUMMARY if current.mode == SUMMARY else EMIT
        returns = self.walk(callee, args, current.precondition, mode)
        values = {r.value for r in returns if r.value is not None}
        if len(values) == 1:
            return values.pop()
        return unknown

    def boolean_summary(self, callee: MethodRef, args: Tuple[AbstractValue, ...], call: Call) -> Formula:
        """Disjunction of the path conditions under which ``callee`` returns true."""
        if not self._may_enter(callee, call):
            return Leaf(Unparsed(f"{callee.method_name}(...)"))
        returns = self.walk(callee, args, TRUE, SUMMARY)
        return disjoin(*(conjoin(r.condition, r.formula) for r in returns if r.formula is not None))

    # ------------------------------------------------------------------

    def is_invalid_state_call(self, call: Call) -> bool:
        return any(fnmatchcase(call.name, pattern) for pattern in self.program.invalid_state_patterns)

    def emit(self, constraint: Constraint) -> None:
        logger.debug(f"{constraint.source_ref}: {constraint.render()}")
        self.constraints.append(constraint)

    def walk(self, ref: MethodRef, args: Tuple[AbstractValue, ...], prefix: Formula, mode: str) -> List[ReturnPath]:
        walk = _MethodWalk(self, ref, prefix, mode)
        self._walks.append(walk)
        self.stack.push_frame()
        try:
            return walk.run(args)
        finally:
            self.stack.pop_frame()
            self._walks.pop()

    def controller_argument(self, param: Param) -> AbstractValue:
        type_name = param.type.name
        if type_name == self.program.root_model:
            return ParamRef("", type_name)
        prefixes = self.program.model_prefixes.get(type_name, [])
        if len(prefixes) == 1:
            return ParamRef(prefixes[0], type_name)
        return Unknown(type_name=type_name, reason=f"controller parameter {param.name}")

    def _graph_diagnostics(self, graph: CallGraph) -> None:
        for site in graph.truncated:
            self.log.add("truncated", f"call to {site.callee} exceeds depth {self.max_depth}", self._site(site))
        for site in graph.recursive:
            self.log.add("recursive", f"recursive call to {site.callee} not followed", self._site(site))
        for site in graph.external:
            name = site.callee.split(":", 1)[1]
            self.log.add("external", f"{name}(...) is not defined in the program", self._site(site))

    def _site(self, site) -> str:
        return f"{_short(self.program.filename(site.caller.class_name))}:{site.span}"

    def extract(self) -> List[Constraint]:
        self.call_graph = build_call_graph(self.program, self.root, self.max_depth)
        self._graph_diagnostics(self.call_graph)
        method = self.program.method(self.root)
        args = tuple(self.controller_argument(p) for p in method.params)
        self.walk(self.root, args, TRUE, EMIT)
        result = dedupe(self.constraints)
        logger.info(f"Extracted {len(result)} constraints from {self.root}")
        return result


def extract_constraints(
    program: Program, root: MethodRef, max_depth: Optional[int] = None, log: Optional[DiagnosticLog] = None
) -> List[Constraint]:
    return ConstraintExtractor(program, root, max_depth, log).extract()


@dataclass
class EndpointAnalysis:
    endpoint: str
    constraints: List[Constraint] = field(default_factory=list)
    diagnostics: List[AnalysisDiagnostic] = field(default_factory=list)
    call_graphs: Dict[str, CallGraph] = field(default_factory=dict)

    @property
    def partial(self) -> List[Constraint]:
        return [c for c in self.constraints if c.partial]

    def write(self, out_dir: Path, stem: str = "code") -> Tuple[Path, Path]:
        """Write ``<stem>.gt`` and ``<stem>.diagnostics.json`` into ``out_dir``."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        constraints_path = out_dir / f"{stem}.gt"
        constraints_path.write_text(
            dump_dsl(self.constraints, header=f"constraints extracted from the source of {self.endpoint}"),
            encoding="utf-8",
        )
        diagnostics_path = write_diagnostics(self.diagnostics, out_dir / f"{stem}.diagnostics.json")
        return constraints_path, diagnostics_path


def analyze_program(program: Program, endpoint: Optional[str] = None, max_depth: Optional[int] = None) -> EndpointAnalysis:
    """Run the extraction for every controller of ``program``."""
    log = DiagnosticLog()
    constraints: List[Constraint] = []
    graphs: Dict[str, CallGraph] = {}
    for root in program.controllers:
        extractor = ConstraintExtractor(program, root, max_depth, log)
        constraints.extend(extractor.extract())
        graphs[str(root)] = extractor.call_graph
    label = endpoint or ", ".join(str(c) for c in program.controllers)
    analysis = EndpointAnalysis(label, dedupe(constraints), log.items(), graphs)
    logger.info(
        f"Analyzed {label}: {len(analysis.constraints)} constraints "
        f"({len(analysis.partial)} need review), {len(analysis.diagnostics)} diagnostics"
    )
    return analysis


def analyze_endpoint(config: AnalysisConfig, source: Path, max_depth: Optional[int] = None) -> EndpointAnalysis:
    """Parse ``source``, resolve it against ``config`` and extract constraints."""
    program = load_program(source, config)
    return analyze_program(program, config.endpoint, max_depth if max_depth is not None else config.max_depth)
