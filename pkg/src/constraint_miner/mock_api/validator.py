"""Decide the status a mock endpoint answers for a request body."""

import json
from typing import Any, Dict, Union

from ..constraints.formula import ABSENT, Assignment, evaluate
from ..oas.models import EndpointSpec
from .scenario import Scenario

OK_STATUS = 200
MALFORMED_STATUS = 400


def _lookup(body: Any, segments) -> Any:
    node = body
    for segment in segments:
        if isinstance(node, list):
            # the first element stands for every element
            if not node:
                return ABSENT
            node = node[0]
        if not isinstance(node, dict) or segment not in node:
            return ABSENT
        node = node[segment]
    return ABSENT if node is None else node


def body_point(spec: EndpointSpec, body: Dict[str, Any]) -> Assignment:
    """Domain point of ``body``: each spec path maps to its value or ABSENT."""
    return Assignment({path: _lookup(body, path.split(".")) for path in spec.flat_index})


def validate_request(scenario: Scenario, body: Any) -> int:
    """``failure_status`` when the body is ill-typed or triggers a constraint, else 200."""
    if not scenario.validator.is_valid(body):
        return scenario.failure_status
    point = body_point(scenario.spec, body)
    for constraint in scenario.constraints:
        if evaluate(constraint.precondition, point):
            return scenario.failure_status
    return OK_STATUS


def validate_raw(scenario: Scenario, raw: Union[bytes, str]) -> int:
    """Like ``validate_request`` for an undecoded body; malformed JSON yields 400."""
    try:
        body = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError):
        return MALFORMED_STATUS
    return validate_request(scenario, body)
