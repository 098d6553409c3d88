"""Mock API scenarios: an endpoint spec plus the constraints it enforces."""

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, List, Optional

from jsonschema import Draft7Validator

from ..config.files import ScenarioConfig, load_json_config
from ..config.settings import settings
from ..constraints.constraint import Constraint
from ..constraints.dsl import load_dsl_file
from ..constraints.formula import iter_atoms
from ..exceptions import ScenarioError, UnknownPathError
from ..oas.loader import load_spec_file
from ..oas.models import EndpointSpec, ParameterSpec
from ..utils.logger import get_logger

logger = get_logger(__name__)

_JSON_TYPES = {
    "string": "string",
    "integer": "integer",
    "number": "number",
    "boolean": "boolean",
    "object": "object",
    "array": "array",
}


def _type_schema(parameter: ParameterSpec) -> Dict[str, Any]:
    schema: Dict[str, Any] = {"type": _JSON_TYPES[parameter.data_type]}
    if parameter.data_type == "object":
        schema["properties"] = {child.name: _type_schema(child) for child in parameter.children}
    elif parameter.data_type == "array":
        item_type = parameter.item_type or "string"
        items: Dict[str, Any] = {"type": _JSON_TYPES[item_type]}
        if item_type == "object":
            items["properties"] = {child.name: _type_schema(child) for child in parameter.children}
        schema["items"] = items
    return schema


def request_schema(spec: EndpointSpec) -> Dict[str, Any]:
    """JSON Schema checking value types only; presence is left to the constraints."""
    return {
        "type": "object",
        "properties": {parameter.name: _type_schema(parameter) for parameter in spec.parameters},
    }


@dataclass
class Scenario:
    endpoint_path: str
    spec: EndpointSpec
    constraints: List[Constraint] = field(default_factory=list)
    failure_status: int = 422

    def __post_init__(self) -> None:
        if not 400 <= self.failure_status <= 599:
            raise ScenarioError(f"failure status must be a 4xx or 5xx code, got {self.failure_status}")
        for constraint in self.constraints:
            if constraint.partial:
                raise ScenarioError(f"scenario constraints cannot contain unparsed atoms: {constraint.render()}")
            unknown = [
                path
                for atom in iter_atoms(constraint.precondition)
                for path in atom.paths()
                if path not in self.spec.flat_index
            ]
            if unknown:
                raise ScenarioError(f"constraint '{constraint.render()}' references unknown paths {unknown}")

    @cached_property
    def validator(self) -> Draft7Validator:
        return Draft7Validator(request_schema(self.spec))

    def describe(self) -> Dict[str, Any]:
        return {
            "endpoint": self.endpoint_path,
            "parameters": len(self.spec.flat_index),
            "constraints": [c.render() for c in self.constraints],
            "failureStatus": self.failure_status,
        }


def load_scenario(path: Path, failure_status: Optional[int] = None) -> Scenario:
    """Read a scenario JSON file referencing a spec and a constraint file."""
    config = load_json_config(Path(path), ScenarioConfig)
    spec = load_spec_file(config.spec)
    try:
        constraints = load_dsl_file(config.constraints, catalog=spec.paths())
    except UnknownPathError as e:
        raise ScenarioError(str(e)) from e
    scenario = Scenario(
        endpoint_path=config.endpoint_path or spec.endpoint_path,
        spec=spec,
        constraints=constraints,
        failure_status=failure_status or config.failure_status or settings.failure_status,
    )
    logger.info(f"Loaded scenario for {scenario.endpoint_path} with {len(constraints)} constraints")
    return scenario
