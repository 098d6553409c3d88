"""Tests for description co-occurrence and candidate selection."""

import json

import pytest

from constraint_miner.doc_analysis import (
    Candidate,
    build_cooccurrence,
    candidates_from_json,
    candidates_to_json,
    find_candidates,
    frequent_parameters,
    mark_values,
    read_candidates,
    write_candidates,
)
from constraint_miner.doc_analysis.cooccurrence import count_mentions
from constraint_miner.exceptions import CandidateError
from constraint_miner.oas import load_spec


def spec_of(properties):
    return load_spec(json.dumps({"type": "object", "properties": properties}))


@pytest.fixture
def checkout_spec():
    return spec_of({
        "paymentMethod": {
            "type": "object",
            "properties": {"type": {"type": "string", "enum": ["scheme", "iDEAL"]}},
        },
        "returnUrl": {"type": "string", "description": "Required when type is iDEAL."},
        "reference": {"type": "string", "description": "Unique reference."},
    })


@pytest.fixture
def hub_spec():
    properties = {
        f"p{i}": {"type": "string", "description": "See hub."} for i in range(1, 7)
    }
    properties["hub"] = {"type": "string", "description": "Relates p1, p2, p3, p4, p5 and p6."}
    properties["q"] = {"type": "string", "description": "Only with r."}
    properties["r"] = {"type": "string"}
    return spec_of(properties)


class TestMentions:
    def test_whole_words_only(self):
        assert count_mentions("card", "Send card or cardHolder.") == 1
        assert count_mentions("card", "No cards here.") == 0

    def test_case_sensitive(self):
        assert count_mentions("iban", "The IBAN of the account.") == 0


class TestCooccurrence:
    def test_matrix(self, payment_spec):
        matrix = build_cooccurrence(payment_spec)
        assert matrix.cell("card", "bankAccount") == 1
        assert matrix.cell("bankAccount", "card") == 1
        assert matrix.cell("merchantAccount", "card") == 0
        frame = matrix.to_frame()
        assert frame.loc["card", "bankAccount"] == 1

    def test_nested_names_are_matched(self, checkout_spec):
        matrix = build_cooccurrence(checkout_spec)
        assert matrix.cell("returnUrl", "paymentMethod.type") == 1

    def test_marked_values(self, checkout_spec):
        marked = mark_values(checkout_spec)
        assert marked == {"returnUrl": {("paymentMethod.type", "iDEAL")}}


class TestCandidates:
    def test_mutual_mentions(self, payment_spec):
        candidates = find_candidates(payment_spec)
        assert [c.params for c in candidates] == [("bankAccount", "card")]
        assert candidates[0].label() == "bankAccount+card"

    def test_marked_values_on_candidate(self, checkout_spec):
        (candidate,) = find_candidates(checkout_spec)
        assert candidate.params == ("paymentMethod.type", "returnUrl")
        assert candidate.marked("paymentMethod.type") == ["iDEAL"]
        assert candidate.marked("returnUrl") == []

    def test_frequent_parameters_are_dropped(self, hub_spec):
        matrix = build_cooccurrence(hub_spec)
        assert frequent_parameters(matrix) == ["hub"]
        assert [c.params for c in find_candidates(hub_spec)] == [("q", "r")]

    def test_higher_factor_keeps_everything(self, hub_spec):
        assert len(find_candidates(hub_spec, frequency_factor=10.0)) == 7

    def test_factor_must_be_positive(self, hub_spec):
        with pytest.raises(ValueError):
            frequent_parameters(build_cooccurrence(hub_spec), frequency_factor=0)


class TestCandidateFiles:
    def test_params_are_sorted(self):
        assert Candidate(params=("b", "a")).params == ("a", "b")

    @pytest.mark.parametrize("params", [("a",), ("a", "a")])
    def test_invalid_candidates(self, params):
        with pytest.raises(CandidateError):
            Candidate(params=params)

    def test_json_round_trip(self, checkout_spec, tmp_path):
        candidates = find_candidates(checkout_spec)
        path = write_candidates(candidates, tmp_path / "out" / "candidates.json")
        loaded = read_candidates(path, checkout_spec)
        assert loaded == candidates
        assert loaded[0].values == candidates[0].values

    def test_unknown_paths_rejected(self, payment_spec):
        text = json.dumps([{"params": ["card", "iban"]}])
        with pytest.raises(CandidateError):
            candidates_from_json(text, payment_spec)

    def test_malformed(self):
        with pytest.raises(CandidateError):
            candidates_from_json("{}")
        with pytest.raises(CandidateError):
            candidates_from_json("[1]")

    def test_serialized_form(self):
        text = candidates_to_json([Candidate(params=("x", "y"), values={"x": [1]})])
        assert json.loads(text) == [{"params": ["x", "y"], "values": {"x": [1]}}]
