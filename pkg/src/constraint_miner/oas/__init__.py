"""OpenAPI ingestion: parameter trees, default values and base requests."""

from .defaults import build_base_request, default_value, included_paths
from .loader import load_spec, load_spec_file
from .models import EndpointSpec, ParameterSpec

__all__ = [
    "EndpointSpec",
    "ParameterSpec",
    "build_base_request",
    "default_value",
    "included_paths",
    "load_spec",
    "load_spec_file",
]
