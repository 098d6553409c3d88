"""Derive probe request bodies from the base request."""

import copy
from typing import Any, Dict, List, Mapping

from ..constraints.formula import ABSENT
from ..exceptions import PathConflictError


def _containers(node: Any) -> List[Dict[str, Any]]:
    """Objects a path segment applies to; arrays apply it to each object element."""
    if isinstance(node, dict):
        return [node]
    if isinstance(node, list):
        return [item for item in node if isinstance(item, dict)]
    return []


def remove_path(body: Dict[str, Any], path: str) -> None:
    """Delete ``path`` and prune the ancestors its removal leaves empty."""
    segments = path.split(".")

    def visit(node: Any, depth: int) -> bool:
        removed = False
        for container in _containers(node):
            key = segments[depth]
            if key not in container:
                continue
            if depth == len(segments) - 1:
                del container[key]
                removed = True
                continue
            child = container[key]
            if not visit(child, depth + 1):
                continue
            removed = True
            if isinstance(child, list):
                child[:] = [item for item in child if item != {}]
            if child in ({}, []):
                del container[key]
        return removed

    visit(body, 0)


def set_path(body: Dict[str, Any], path: str, value: Any) -> None:
    """Set ``path`` to ``value``, creating intermediate objects."""
    segments = path.split(".")

    def visit(node: Any, depth: int) -> None:
        containers = _containers(node)
        if not containers:
            raise PathConflictError(
                f"cannot set '{path}': '{'.'.join(segments[:depth])}' is not an object"
            )
        for container in containers:
            key = segments[depth]
            if depth == len(segments) - 1:
                container[key] = copy.deepcopy(value)
                continue
            child = container.get(key)
            if child is None:
                child = container[key] = {}
            elif isinstance(child, list) and not child:
                child.append({})
            visit(child, depth + 1)

    visit(body, 0)


def build_request(base: Mapping[str, Any], assignment: Mapping[str, Any]) -> Dict[str, Any]:
    """Base request with each assigned path removed (ABSENT) or set to its value.

    Paths are applied shallow first, so a nested value can be set inside a
    parent that the same row assigns.
    """
    body = copy.deepcopy(dict(base))
    for path in sorted(assignment, key=lambda p: (p.count("."), p)):
        value = assignment[path]
        if value is ABSENT:
            remove_path(body, path)
        else:
            set_path(body, path, value)
    return body
