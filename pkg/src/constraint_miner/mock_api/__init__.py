"""Mock API used as a deterministic probing target."""

from .scenario import Scenario, load_scenario, request_schema
from .server import BackgroundServer, create_app, run_server, serve
from .validator import body_point, validate_raw, validate_request

__all__ = [
    "Scenario",
    "load_scenario",
    "request_schema",
    "BackgroundServer",
    "create_app",
    "run_server",
    "serve",
    "body_point",
    "validate_raw",
    "validate_request",
]
