"""Tests for the mock API scenarios, validator and service."""

import asyncio
import json
import random

import pytest
from fastapi.testclient import TestClient

from constraint_miner.constraints import ABSENT, Assignment, evaluate, parse_dsl
from constraint_miner.exceptions import ConfigError, ScenarioError
from constraint_miner.mock_api import (
    BackgroundServer,
    Scenario,
    body_point,
    create_app,
    load_scenario,
    validate_raw,
    validate_request,
)
from constraint_miner.probing import HttpProbeClient, ResultKind


@pytest.fixture
def scenario(payment_spec):
    constraints = parse_dsl(
        "any-of(card, bankAccount)\n"
        "requires(card, card.cvc)\n"
        "amount.value < 0 -> invalid\n"
    )
    return Scenario(endpoint_path="/payments", spec=payment_spec, constraints=constraints)


BASE = {"merchantAccount": "Test", "amount": {"value": 100, "currency": "EUR"}, "card": {"cvc": "737"}}


class TestValidator:
    def test_valid_body(self, scenario):
        assert validate_request(scenario, BASE) == 200

    def test_constraint_violation(self, scenario):
        assert validate_request(scenario, {**BASE, "card": {"number": "4111"}}) == 422
        assert validate_request(scenario, {"amount": {"value": -1}, "bankAccount": {}}) == 422

    def test_wrong_type_fails(self, scenario):
        assert validate_request(scenario, {**BASE, "amount": {"value": "100"}}) == 422

    def test_null_counts_as_absent(self, scenario):
        point = body_point(scenario.spec, {"card": None, "amount": {"value": 5}})
        assert not point.is_present("card")
        assert point.lookup("amount.value") == 5

    def test_malformed_json(self, scenario):
        assert validate_raw(scenario, b"{oops") == 400
        assert validate_raw(scenario, json.dumps(BASE)) == 200


class TestScenario:
    def test_failure_status_range(self, payment_spec):
        with pytest.raises(ScenarioError):
            Scenario(endpoint_path="/payments", spec=payment_spec, failure_status=200)

    def test_unknown_path(self, payment_spec):
        with pytest.raises(ScenarioError):
            Scenario(endpoint_path="/payments", spec=payment_spec, constraints=parse_dsl("requires(card, card.expiry)"))

    def test_partial_constraint(self, payment_spec):
        with pytest.raises(ScenarioError):
            Scenario(endpoint_path="/payments", spec=payment_spec, constraints=parse_dsl('unparsed("x()") -> invalid'))

    def test_load_from_files(self, benchmark_dir):
        loaded = load_scenario(benchmark_dir / "probing" / "scenario.json")
        assert loaded.endpoint_path == "/payments"
        assert loaded.failure_status == 422
        assert len(loaded.constraints) == 2

    def test_status_override(self, benchmark_dir):
        loaded = load_scenario(benchmark_dir / "probing" / "scenario.json", failure_status=400)
        assert loaded.failure_status == 400

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_scenario(tmp_path / "scenario.json")

    def test_constraints_outside_catalog(self, write_file, benchmark_dir):
        spec = benchmark_dir / "probing" / "payments.oas.json"
        write_file("bad.gt", "requires(card, cvc)\n")
        path = write_file("scenario.json", json.dumps({"spec": str(spec), "constraints": "bad.gt"}))
        with pytest.raises(ScenarioError):
            load_scenario(path)


class TestService:
    def test_health(self, scenario):
        client = TestClient(create_app(scenario))
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json()["status"] == "healthy"
        assert response.json()["endpoint"] == "/payments"

    def test_endpoint_statuses(self, scenario):
        client = TestClient(create_app(scenario))
        assert client.post("/payments", json=BASE).status_code == 200
        rejected = client.post("/payments", json={"merchantAccount": "Test"})
        assert rejected.status_code == 422
        assert rejected.json() == {"status": "rejected"}
        malformed = client.post("/payments", content=b"{", headers={"Content-Type": "application/json"})
        assert malformed.status_code == 400

    def test_background_server_with_http_client(self, scenario, free_port):
        async def probe(url):
            async with HttpProbeClient(url) as client:
                return await client.send(BASE), await client.send({})

        with BackgroundServer(scenario, port=free_port) as server:
            accepted, rejected = asyncio.run(probe(server.url))
        assert accepted.kind is ResultKind.SUCCESS
        assert rejected.kind is ResultKind.FAILURE
        assert rejected.status == 422

    def test_unreachable_server_is_an_error(self, free_port):
        async def probe():
            async with HttpProbeClient(f"http://127.0.0.1:{free_port}/payments", timeout=2) as client:
                return await client.send({})

        assert asyncio.run(probe()).kind is ResultKind.ERROR


CONSTRAINT_POOL = [
    "any-of(card, bankAccount)",
    "requires(card, card.cvc)",
    "amount.value < 0 -> invalid",
    'requires(amount.currency == "USD", shopperReference)',
    "card and bankAccount -> invalid",
    "len(merchantAccount) > 4 -> invalid",
    'not amount.currency in {"EUR", "USD"} -> invalid',
    "exactly-one(card.number, bankAccount.iban)",
]

SCALAR_VALUES = {
    "merchantAccount": ["Test", "Shop", "MerchantX"],
    "amount.value": [-5, 0, 100],
    "amount.currency": ["EUR", "USD", "GBP"],
    "card.number": ["4111"],
    "card.cvc": ["737", "1"],
    "bankAccount.iban": ["NL00"],
    "shopperReference": ["s1"],
}


def random_body(rng, parameters, point):
    """A well-typed body; ``point`` receives the value sent at each path."""
    body = {}
    for parameter in parameters:
        if rng.random() < 0.4:
            continue
        if parameter.children:
            value = random_body(rng, parameter.children, point)
        else:
            value = rng.choice(SCALAR_VALUES[parameter.path])
        body[parameter.name] = value
        point[parameter.path] = value
    return body


class TestValidatorAgreement:
    @pytest.mark.parametrize("seed", range(5))
    def test_status_follows_constraint_evaluation(self, payment_spec, seed):
        rng = random.Random(seed)
        lines = rng.sample(CONSTRAINT_POOL, rng.randint(1, len(CONSTRAINT_POOL)))
        scenario = Scenario(endpoint_path="/payments", spec=payment_spec, constraints=parse_dsl("\n".join(lines)))
        for _ in range(100):
            point = {path: ABSENT for path in payment_spec.paths()}
            body = random_body(rng, payment_spec.parameters, point)
            violated = any(evaluate(c.precondition, Assignment(point)) for c in scenario.constraints)
            assert validate_request(scenario, body) == (422 if violated else 200), (lines, body)
