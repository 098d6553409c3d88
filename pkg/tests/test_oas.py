"""Tests for specification loading and base requests."""

import json
import random

import pytest

from constraint_miner.exceptions import (
    DuplicateParameterError,
    SpecLoadError,
    UnknownExtraPathError,
    UnsupportedTypeError,
)
from constraint_miner.oas import build_base_request, default_value, load_spec, load_spec_file


class TestLoadSpec:
    def test_flat_paths(self, payment_spec):
        assert payment_spec.endpoint_path == "/payments"
        assert payment_spec.method == "POST"
        assert set(payment_spec.paths()) == {
            "merchantAccount",
            "amount",
            "amount.value",
            "amount.currency",
            "card",
            "card.number",
            "card.cvc",
            "bankAccount",
            "bankAccount.iban",
            "shopperReference",
        }
        assert len(payment_spec) == 10

    def test_required_and_enums(self, payment_spec):
        assert payment_spec.get("amount.value").required
        assert not payment_spec.get("card.number").required
        assert payment_spec.get("amount.currency").enum_values == ["EUR", "USD"]
        assert payment_spec.get("card.cvc").parent_path == "card"

    def test_openapi_document(self):
        document = {
            "openapi": "3.0.0",
            "paths": {
                "/refunds": {
                    "put": {
                        "requestBody": {
                            "content": {
                                "application/json": {
                                    "schema": {
                                        "type": "object",
                                        "properties": {"reference": {"type": "string"}},
                                    }
                                }
                            }
                        }
                    }
                }
            },
        }
        spec = load_spec(json.dumps(document))
        assert spec.endpoint_path == "/refunds"
        assert spec.method == "PUT"
        assert spec.paths() == ("reference",)

    def test_array_of_objects(self):
        spec = load_spec(json.dumps({
            "type": "object",
            "properties": {
                "splits": {
                    "type": "array",
                    "items": {"type": "object", "properties": {"account": {"type": "string"}}},
                }
            },
        }))
        assert spec.get("splits").is_container
        assert "splits.account" in spec

    def test_duplicate_parameter(self):
        text = '{"type": "object", "properties": {"a": {"type": "string"}, "a": {"type": "integer"}}}'
        with pytest.raises(DuplicateParameterError):
            load_spec(text)

    @pytest.mark.parametrize("schema", [
        {"type": "object", "properties": {"a": {"type": "file"}}},
        {"type": "object", "properties": {"a": {"description": "no type"}}},
        {"type": "object", "properties": {"a": {"type": "array", "items": {"type": "array"}}}},
        {"type": "string"},
    ])
    def test_unsupported_types(self, schema):
        with pytest.raises(UnsupportedTypeError):
            load_spec(json.dumps(schema))

    def test_invalid_json(self):
        with pytest.raises(SpecLoadError):
            load_spec("{not json")

    def test_file_endpoint_from_name(self, write_file):
        path = write_file("captures.oas.json", json.dumps({"type": "object", "properties": {}}))
        assert load_spec_file(path).endpoint_path == "/captures"

    def test_missing_file(self, tmp_path):
        with pytest.raises(SpecLoadError):
            load_spec_file(tmp_path / "absent.oas.json")


class TestBaseRequest:
    def test_required_only(self, payment_spec):
        assert build_base_request(payment_spec) == {
            "merchantAccount": "str",
            "amount": {"value": 0, "currency": "EUR"},
        }

    def test_extra_paths_bring_ancestors(self, payment_spec):
        body = build_base_request(payment_spec, extra_paths=["card.number"])
        assert body["card"] == {"number": "str"}

    def test_extra_container_has_no_optional_children(self, payment_spec):
        body = build_base_request(payment_spec, extra_paths=["bankAccount"])
        assert body["bankAccount"] == {}

    def test_overrides(self, payment_spec):
        body = build_base_request(payment_spec, overrides={"amount.value": 1000, "merchantAccount": "Test"})
        assert body["amount"]["value"] == 1000
        assert body["merchantAccount"] == "Test"

    def test_unknown_extra_path(self, payment_spec):
        with pytest.raises(UnknownExtraPathError):
            build_base_request(payment_spec, extra_paths=["card.expiry"])

    def test_default_values(self, payment_spec):
        assert default_value(payment_spec.get("card")) == {"number": "str", "cvc": "str"}
        assert default_value(payment_spec.get("amount.currency")) == "EUR"

    def test_override_outside_required_is_sent(self, payment_spec):
        body = build_base_request(payment_spec, overrides={"card.number": "4111"})
        assert body["card"] == {"number": "4111"}

    def test_unknown_override_path(self, payment_spec):
        with pytest.raises(UnknownExtraPathError):
            build_base_request(payment_spec, overrides={"card.expiry": "03/30"})

    def test_extra_path_brings_required_siblings(self):
        spec = load_spec(json.dumps({
            "type": "object",
            "properties": {
                "card": {
                    "type": "object",
                    "required": ["cvc"],
                    "properties": {"number": {"type": "string"}, "cvc": {"type": "string"}},
                }
            },
        }))
        assert build_base_request(spec, extra_paths=["card.number"]) == {"card": {"number": "str", "cvc": "str"}}


class TestArrayItems:
    def test_item_enums_stay_on_items(self):
        spec = load_spec(json.dumps({
            "type": "object",
            "properties": {"tags": {"type": "array", "items": {"type": "string", "enum": ["b", "a"]}}},
        }))
        tags = spec.get("tags")
        assert tags.enum_values == []
        assert tags.item_enum_values == ["b", "a"]
        assert default_value(tags) == ["b"]

    def test_item_enum_needs_scalar_items(self):
        schema = {
            "type": "object",
            "properties": {"flags": {"type": "array", "items": {"type": "boolean", "enum": [True]}}},
        }
        with pytest.raises(SpecLoadError):
            load_spec(json.dumps(schema))


def random_properties(rng: random.Random, depth: int = 0):
    properties = {}
    for i in range(rng.randint(1, 4)):
        name = f"f{depth}{i}"
        if depth < 2 and rng.random() < 0.35:
            properties[name] = random_properties(rng, depth + 1)
        else:
            properties[name] = {"type": rng.choice(["string", "integer", "number", "boolean"])}
    required = [name for name in properties if rng.random() < 0.5]
    return {"type": "object", "properties": properties, "required": required}


def body_paths(node, prefix=""):
    paths = set()
    for name, value in node.items():
        path = f"{prefix}{name}"
        paths.add(path)
        if isinstance(value, dict):
            paths |= body_paths(value, path + ".")
    return paths


def expected_paths(spec, extra):
    ancestors = {path.rsplit(".", i)[0] for path in extra for i in range(path.count(".") + 1)}
    found = set()

    def visit(parameter, parent_present):
        present = parameter.path in ancestors or (parameter.required and parent_present)
        if present:
            found.add(parameter.path)
        for child in parameter.children:
            visit(child, present)

    for root in spec.parameters:
        visit(root, True)
    return found


class TestBaseRequestProperty:
    @pytest.mark.parametrize("seed", range(10))
    def test_value_iff_required_or_extra(self, seed):
        rng = random.Random(seed)
        for _ in range(30):
            spec = load_spec(json.dumps(random_properties(rng)))
            extra = rng.sample(spec.paths(), rng.randint(0, min(3, len(spec))))
            body = build_base_request(spec, extra_paths=extra)
            assert body_paths(body) == expected_paths(spec, extra)
