"""Load the supported OpenAPI subset into an EndpointSpec."""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..exceptions import DuplicateParameterError, SpecLoadError, UnsupportedTypeError
from ..utils.logger import get_logger
from .models import DATA_TYPES, SCALAR_TYPES, EndpointSpec, ParameterSpec

logger = get_logger(__name__)

SPEC_SUFFIX = ".oas.json"
HTTP_METHODS = ("post", "put", "patch", "get", "delete")


def _reject_duplicates(pairs: List[Tuple[str, Any]]) -> Dict[str, Any]:
    result: Dict[str, Any] = {}
    for key, value in pairs:
        if key in result:
            raise DuplicateParameterError(f"duplicate key '{key}'")
        result[key] = value
    return result


def _schema_type(schema: Dict[str, Any], where: str) -> str:
    data_type = schema.get("type")
    if data_type is None:
        if "properties" in schema:
            return "object"
        if "items" in schema:
            return "array"
        raise UnsupportedTypeError(f"{where}: missing 'type'")
    if data_type not in DATA_TYPES:
        raise UnsupportedTypeError(f"{where}: unsupported type '{data_type}'")
    return data_type


def _parse_properties(schema: Dict[str, Any], parent: Optional[str]) -> List[ParameterSpec]:
    properties = schema.get("properties") or {}
    if not isinstance(properties, dict):
        raise SpecLoadError(f"{parent or '<root>'}: 'properties' must be an object")
    required = set(schema.get("required") or [])
    unknown = required - set(properties)
    if unknown:
        logger.warning(f"{parent or '<root>'}: required names without a property: {sorted(unknown)}")
    return [
        _parse_parameter(name, sub, parent, name in required)
        for name, sub in properties.items()
    ]


def _parse_parameter(name: str, schema: Dict[str, Any], parent: Optional[str], required: bool) -> ParameterSpec:
    path = f"{parent}.{name}" if parent else name
    if not isinstance(schema, dict):
        raise SpecLoadError(f"{path}: schema must be an object")
    data_type = _schema_type(schema, path)

    enum_values = list(schema.get("enum") or [])
    if enum_values and data_type not in ("string", "number", "integer"):
        raise SpecLoadError(f"{path}: enum is only supported on string and numeric parameters")

    parameter = ParameterSpec(
        name=name,
        path=path,
        data_type=data_type,
        required=required,
        enum_values=enum_values,
        description=schema.get("description") or "",
    )

    if data_type == "object":
        parameter.children = _parse_properties(schema, path)
    elif data_type == "array":
        items = schema.get("items") or {"type": "string"}
        item_type = _schema_type(items, f"{path}[]")
        if item_type == "array":
            raise UnsupportedTypeError(f"{path}: nested arrays are not supported")
        parameter.item_type = item_type
        if item_type == "object":
            parameter.children = _parse_properties(items, path)
        elif items.get("enum"):
            if item_type not in ("string", "number", "integer"):
                raise SpecLoadError(f"{path}: enum is only supported on string and numeric items")
            parameter.item_enum_values = list(items["enum"])
    return parameter


def _request_schema(document: Dict[str, Any]) -> Tuple[Dict[str, Any], Optional[str], Optional[str]]:
    """Find the request body schema, endpoint path and verb inside ``document``."""
    if "paths" not in document:
        return document, document.get("x-endpoint"), document.get("x-method")

    for endpoint_path, item in (document.get("paths") or {}).items():
        for method in HTTP_METHODS:
            operation = item.get(method)
            if not operation:
                continue
            content = (operation.get("requestBody") or {}).get("content") or {}
            schema = (content.get("application/json") or {}).get("schema")
            if schema is None:
                raise SpecLoadError(f"{method.upper()} {endpoint_path}: no application/json request schema")
            return schema, endpoint_path, method.upper()
    raise SpecLoadError("document has no operation with a request body")


def _index(parameters: List[ParameterSpec]) -> Dict[str, ParameterSpec]:
    flat_index: Dict[str, ParameterSpec] = {}
    for root in parameters:
        for parameter in root.walk():
            if parameter.path in flat_index:
                raise DuplicateParameterError(f"parameter path '{parameter.path}' defined twice")
            flat_index[parameter.path] = parameter
    return flat_index


def load_spec(document: str, endpoint_path: Optional[str] = None) -> EndpointSpec:
    """Parse a JSON document into an EndpointSpec."""
    try:
        raw = json.loads(document, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as e:
        raise SpecLoadError(f"invalid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise SpecLoadError("specification must be a JSON object")

    schema, found_path, method = _request_schema(raw)
    if _schema_type(schema, "<root>") != "object":
        raise UnsupportedTypeError("the request body must be an object schema")

    parameters = _parse_properties(schema, None)
    spec = EndpointSpec(
        endpoint_path=found_path or endpoint_path or "/",
        method=(method or "POST").upper(),
        parameters=parameters,
        flat_index=_index(parameters),
    )
    logger.info(
        f"Loaded {spec.method} {spec.endpoint_path}: "
        f"{len(spec.parameters)} top-level parameters, {len(spec.flat_index)} in total"
    )
    return spec


def load_spec_file(path: Path) -> EndpointSpec:
    path = Path(path)
    if not path.exists():
        raise SpecLoadError(f"specification file not found: {path}")
    name = path.name
    stem = name[: -len(SPEC_SUFFIX)] if name.endswith(SPEC_SUFFIX) else path.stem
    return load_spec(path.read_text(encoding="utf-8"), endpoint_path=f"/{stem}")
