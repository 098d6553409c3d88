"""Per-method control-flow graphs.

Nodes are integers: the entry, exit and invalid sinks first, then one node
per statement in source order. Loop bodies are entered once and never
looped back, so every graph is acyclic.
"""

import itertools
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import networkx as nx

from ..frontend.nodes import (
    Block,
    Break,
    Continue,
    For,
    ForEach,
    If,
    Literal,
    MethodDecl,
    Return,
    Stmt,
    Switch,
    Throw,
)

ENTRY, EXIT, INVALID = 0, 1, 2
SINKS = (ENTRY, EXIT, INVALID)

TRUE_LABEL, FALSE_LABEL, BODY_LABEL, SKIP_LABEL, NEXT_LABEL = "true", "false", "body", "skip", "next"
DEFAULT_LABEL = "default"


@dataclass(frozen=True)
class GuardRef:
    """One enclosing branch of a statement.

    ``label`` is ``true``/``false`` for ``if``, ``body`` for loops and
    ``case:<i>[,<j>...]`` for switch bodies (several indices when earlier
    cases fall through; ``default`` stands for the default case).
    """

    branch: int
    label: str

    @property
    def case_indices(self) -> Tuple[str, ...]:
        return tuple(self.label[len("case:"):].split(",")) if self.label.startswith("case:") else ()


def case_label(index: int) -> str:
    return f"case:{index}"


@dataclass
class _Context:
    loop: Optional[int] = None
    breaks: Optional[List[Tuple[int, str]]] = None
    continues: Optional[List[Tuple[int, str]]] = None
    breaks_loop: bool = False


Dangling = List[Tuple[int, str]]


class _Builder:
    def __init__(self):
        self.graph = nx.DiGraph()
        for node, kind in ((ENTRY, "entry"), (EXIT, "exit"), (INVALID, "invalid")):
            self.graph.add_node(node, kind=kind, stmt=None, guards=(), scope=(), loop=None)
        self._ids = itertools.count(len(SINKS))
        self._scopes = itertools.count(1)

    def add(self, stmt: Stmt, kind: str, guards, scope, ctx: _Context) -> int:
        node = next(self._ids)
        self.graph.add_node(node, kind=kind, stmt=stmt, guards=tuple(guards), scope=tuple(scope), loop=ctx.loop)
        return node

    def connect(self, preds: Dangling, node: int) -> None:
        for pred, label in preds:
            if self.graph.has_edge(pred, node):
                self.graph[pred][node]["labels"].add(label)
            else:
                self.graph.add_edge(pred, node, labels={label})

    def sequence(self, stmts, preds: Dangling, guards, scope, ctx: _Context) -> Dangling:
        for stmt in stmts:
            preds = self.statement(stmt, preds, guards, scope, ctx)
        return preds

    def nested(self, stmt: Stmt, preds: Dangling, guards, scope, ctx: _Context) -> Dangling:
        return self.statement(stmt, preds, guards, scope + (next(self._scopes),), ctx)

    def statement(self, stmt: Stmt, preds: Dangling, guards, scope, ctx: _Context) -> Dangling:
        if isinstance(stmt, Block):
            return self.sequence(stmt.body, preds, guards, scope + (next(self._scopes),), ctx)
        if isinstance(stmt, If):
            node = self.add(stmt, "branch", guards, scope, ctx)
            self.connect(preds, node)
            exits = self.nested(stmt.then, [(node, TRUE_LABEL)], guards + (GuardRef(node, TRUE_LABEL),), scope, ctx)
            if stmt.orelse is not None:
                exits += self.nested(
                    stmt.orelse, [(node, FALSE_LABEL)], guards + (GuardRef(node, FALSE_LABEL),), scope, ctx
                )
            else:
                exits.append((node, FALSE_LABEL))
            return exits
        if isinstance(stmt, Switch):
            return self.switch(stmt, preds, guards, scope, ctx)
        if isinstance(stmt, (For, ForEach)):
            return self.loop(stmt, preds, guards, scope, ctx)

        kind = {Return: "return", Throw: "throw", Break: "break", Continue: "continue"}.get(type(stmt), "stmt")
        node = self.add(stmt, kind, guards, scope, ctx)
        self.connect(preds, node)
        if isinstance(stmt, Return):
            self.graph.add_edge(node, EXIT, labels={NEXT_LABEL})
            return []
        if isinstance(stmt, Throw):
            self.graph.add_edge(node, INVALID, labels={NEXT_LABEL})
            return []
        if isinstance(stmt, Break) and ctx.breaks is not None:
            self.graph.nodes[node]["leaves_loop"] = ctx.breaks_loop
            ctx.breaks.append((node, NEXT_LABEL))
            return []
        if isinstance(stmt, Continue) and ctx.continues is not None:
            ctx.continues.append((node, NEXT_LABEL))
            return []
        return [(node, NEXT_LABEL)]

    def switch(self, stmt: Switch, preds: Dangling, guards, scope, ctx: _Context) -> Dangling:
        node = self.add(stmt, "switch", guards, scope, ctx)
        self.connect(preds, node)
        inner = _Context(loop=ctx.loop, breaks=[], continues=ctx.continues)
        falling: Dangling = []
        falling_cases: List[str] = []
        has_default = False
        for index, case in enumerate(stmt.cases):
            edge = DEFAULT_LABEL if case.is_default else case_label(index)
            has_default = has_default or case.is_default
            members = falling_cases + [DEFAULT_LABEL if case.is_default else str(index)]
            guard = GuardRef(node, "case:" + ",".join(members))
            body_scope = scope + (next(self._scopes),)
            exits = self.sequence(case.body, [(node, edge)] + falling, guards + (guard,), body_scope, inner)
            falling = exits
            falling_cases = members if exits else []
        exits = falling + inner.breaks
        if not has_default:
            exits.append((node, DEFAULT_LABEL))
        return exits

    def loop(self, stmt, preds: Dangling, guards, scope, ctx: _Context) -> Dangling:
        loop_scope = scope + (next(self._scopes),)
        if isinstance(stmt, For) and stmt.init is not None:
            preds = self.statement(stmt.init, preds, guards, loop_scope, ctx)
        node = self.add(stmt, "loop", guards, loop_scope, ctx)
        self.connect(preds, node)
        inner = _Context(loop=node, breaks=[], continues=[], breaks_loop=True)
        # update statements of classic for loops are not visited: the body runs once
        exits = self.nested(stmt.body, [(node, BODY_LABEL)], guards + (GuardRef(node, BODY_LABEL),), loop_scope, inner)
        return exits + inner.breaks + inner.continues + [(node, SKIP_LABEL)]


@dataclass
class Cfg:
    method: MethodDecl
    graph: nx.DiGraph
    _order: List[int] = field(default_factory=list, repr=False)

    def data(self, node: int) -> dict:
        return self.graph.nodes[node]

    def kind(self, node: int) -> str:
        return self.graph.nodes[node]["kind"]

    def guards(self, node: int) -> Tuple[GuardRef, ...]:
        return self.graph.nodes[node]["guards"]

    def statement_nodes(self) -> Iterator[int]:
        """Statement nodes so that every node follows its predecessors, ties in source order."""
        if not self._order:
            self._order = [n for n in nx.lexicographical_topological_sort(self.graph) if n not in SINKS]
        return iter(self._order)

    def out_labels(self, node: int) -> List[str]:
        labels: List[str] = []
        for _, _, data in self.graph.out_edges(node, data=True):
            labels.extend(data["labels"])
        return sorted(labels)

    def exit_nodes(self) -> List[int]:
        """Statements that leave the method or loop body early."""
        exits = []
        for node in self.statement_nodes():
            kind = self.kind(node)
            if (
                kind == "return"
                or (kind == "continue" and self.data(node)["loop"] is not None)
                or (kind == "break" and self.data(node).get("leaves_loop", False))
            ):
                exits.append(node)
        return exits

    def early_exits(self, node: int, skip_true_returns: bool = False) -> List[Tuple[int, Tuple[GuardRef, ...]]]:
        """Conditional exits that must not have been taken for ``node`` to run.

        Each entry is the exit node and the branch conditions under which it
        is taken beyond those it shares with ``node``.
        """
        own = self.guards(node)
        found = []
        for exit_node in self.exit_nodes():
            if exit_node == node:
                continue
            theirs = self.guards(exit_node)
            common = 0
            while common < min(len(own), len(theirs)) and own[common] == theirs[common]:
                common += 1
            if common == len(theirs):
                continue
            if common < len(own) and own[common].branch == theirs[common].branch:
                continue  # exclusive branches
            data = self.data(exit_node)
            if data["kind"] in ("break", "continue") and GuardRef(data["loop"], BODY_LABEL) not in own:
                continue
            if skip_true_returns and _returns_true(data["stmt"]):
                continue
            branch = theirs[common].branch
            if branch != node and nx.has_path(self.graph, branch, node):
                found.append((exit_node, theirs[common:]))
        return found


def _returns_true(stmt: Stmt) -> bool:
    return isinstance(stmt, Return) and isinstance(stmt.value, Literal) and stmt.value.value is True


def build_cfg(method: MethodDecl) -> Cfg:
    builder = _Builder()
    exits = builder.statement(method.body, [(ENTRY, NEXT_LABEL)], (), (), _Context())
    builder.connect(exits, EXIT)
    graph = builder.graph
    reachable = nx.descendants(graph, ENTRY) | {ENTRY}
    graph.remove_nodes_from([n for n in list(graph.nodes) if n not in reachable and n not in SINKS])
    return Cfg(method, graph)
