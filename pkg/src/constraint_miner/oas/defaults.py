"""Default parameter values and the always-succeeding base request."""

import copy
from typing import Any, Dict, Iterable, Mapping, Optional, Set

from ..exceptions import UnknownExtraPathError
from .models import EndpointSpec, ParameterSpec

_SCALAR_DEFAULTS = {
    "string": "str",
    "integer": 0,
    "number": 0.0,
    "boolean": True,
}


def _scalar_default(data_type: str, enum_values) -> Any:
    if enum_values:
        return enum_values[0]
    return _SCALAR_DEFAULTS[data_type]


def default_value(parameter: ParameterSpec, overrides: Optional[Mapping[str, Any]] = None) -> Any:
    """Value used for ``parameter`` when a request must contain it."""
    overrides = overrides or {}
    if parameter.path in overrides:
        return copy.deepcopy(overrides[parameter.path])

    if parameter.data_type == "object":
        return {child.name: default_value(child, overrides) for child in parameter.children}
    if parameter.data_type == "array":
        if parameter.item_type == "object":
            element: Any = {child.name: default_value(child, overrides) for child in parameter.children}
        else:
            element = _scalar_default(parameter.item_type or "string", parameter.item_enum_values)
        return [element]
    return _scalar_default(parameter.data_type, parameter.enum_values)


def included_paths(spec: EndpointSpec, extra_paths: Iterable[str] = ()) -> Set[str]:
    """Paths that carry a value in the base request.

    Extra paths and their ancestors are included, and every included
    container brings its required children along.
    """
    extra = list(extra_paths)
    unknown = [path for path in extra if path not in spec.flat_index]
    if unknown:
        raise UnknownExtraPathError(f"paths not defined by the specification: {unknown}")

    included: Set[str] = set()

    def include(parameter: ParameterSpec) -> None:
        if parameter.path in included:
            return
        included.add(parameter.path)
        for child in parameter.children:
            if child.required:
                include(child)

    for root in spec.parameters:
        if root.required:
            include(root)

    for path in extra:
        chain = [spec.flat_index[path]]
        while chain[-1].parent_path:
            chain.append(spec.flat_index[chain[-1].parent_path])
        for parameter in reversed(chain):
            include(parameter)
    return included


def _build(parameter: ParameterSpec, included: Set[str], overrides: Mapping[str, Any]) -> Any:
    if parameter.path in overrides or not parameter.is_container:
        return default_value(parameter, overrides)
    body = {
        child.name: _build(child, included, overrides)
        for child in parameter.children
        if child.path in included
    }
    return [body] if parameter.data_type == "array" else body


def build_base_request(
    spec: EndpointSpec,
    overrides: Optional[Mapping[str, Any]] = None,
    extra_paths: Iterable[str] = (),
) -> Dict[str, Any]:
    """Request body with every required parameter plus ``extra_paths``.

    Overridden paths are sent as well, so an override always reaches the body.
    """
    overrides = overrides or {}
    extra = list(extra_paths)
    included = included_paths(spec, extra + [path for path in overrides if path not in extra])
    return {
        parameter.name: _build(parameter, included, overrides)
        for parameter in spec.parameters
        if parameter.path in included
    }
