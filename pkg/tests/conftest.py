"""Shared fixtures for the constraint miner tests."""

import json
import socket
from pathlib import Path
from typing import Callable, Dict

import pytest

from constraint_miner.config.files import AnalysisConfig
from constraint_miner.frontend.parser import parse_unit
from constraint_miner.frontend.program import Program, resolve_program
from constraint_miner.oas.loader import load_spec
from constraint_miner.oas.models import EndpointSpec

ROOT = Path(__file__).resolve().parent.parent
BENCHMARK_DIR = ROOT / "benchmark"

PAYMENT_SCHEMA = {
    "x-endpoint": "/payments",
    "type": "object",
    "required": ["merchantAccount", "amount"],
    "properties": {
        "merchantAccount": {"type": "string", "description": "Account that processes the payment."},
        "amount": {
            "type": "object",
            "required": ["value", "currency"],
            "properties": {
                "value": {"type": "integer"},
                "currency": {"type": "string", "enum": ["EUR", "USD"]},
            },
        },
        "card": {
            "type": "object",
            "description": "Card details; do not send together with bankAccount.",
            "properties": {"number": {"type": "string"}, "cvc": {"type": "string"}},
        },
        "bankAccount": {
            "type": "object",
            "description": "Bank details; do not send together with card.",
            "properties": {"iban": {"type": "string"}},
        },
        "shopperReference": {"type": "string", "description": "Your shopper identifier."},
    },
}


@pytest.fixture
def benchmark_dir() -> Path:
    return BENCHMARK_DIR


@pytest.fixture
def payment_spec() -> EndpointSpec:
    return load_spec(json.dumps(PAYMENT_SCHEMA))


@pytest.fixture
def write_file(tmp_path: Path) -> Callable[[str, str], Path]:
    """Write ``text`` to ``tmp_path / name`` and return the path."""

    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def build_program() -> Callable[..., Program]:
    """Resolve in-memory sources against an analysis config."""

    def _build(sources: Dict[str, str], **config) -> Program:
        units = [parse_unit(text, filename=name) for name, text in sources.items()]
        return resolve_program(units, AnalysisConfig.model_validate(config))

    return _build


@pytest.fixture
def free_port() -> int:
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]
