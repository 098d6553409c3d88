"""End-to-end runs over the bundled benchmark endpoints."""

from pathlib import Path

import pytest

from constraint_miner.config.files import AnalysisConfig, load_json_config
from constraint_miner.doc_analysis import find_candidates
from constraint_miner.evaluation import CODE, DOC, Score, evaluate_endpoint, load_ground_truth
from constraint_miner.mock_api import load_scenario
from constraint_miner.oas import build_base_request, load_spec_file
from constraint_miner.probing import UNOBSERVED, ScenarioProbeClient, probe_endpoint
from constraint_miner.static_analysis import analyze_endpoint

BENCHMARK_DIR = Path(__file__).resolve().parent.parent / "benchmark"

SUPPORTED = sorted(p.name for p in (BENCHMARK_DIR / "supported").iterdir() if p.is_dir())
CODE_CHALLENGES = ["b2_object_creation", "b5_complex_loop", "b6_path_sensitivity", "b7_loop_sum", "b8_framework_validation"]
DOC_CHALLENGES = ["a1_missing_information", "a2_implicit_reference", "a4_unobserved_constraint"]


def spec_file(directory: Path) -> Path:
    (path,) = directory.glob("*.oas.json")
    return path


def run_code_pipeline(directory: Path):
    spec = load_spec_file(spec_file(directory))
    config = load_json_config(directory / "analysis.json", AnalysisConfig)
    analysis = analyze_endpoint(config, directory)
    truth = load_ground_truth(directory / "truth.gt", spec)
    evaluation = evaluate_endpoint(truth, code=analysis.constraints, spec=spec)
    return analysis, evaluation.reports[CODE]


def test_supported_set_is_complete():
    assert len(SUPPORTED) == 10


@pytest.mark.parametrize("name", SUPPORTED)
def test_supported_endpoint_is_fully_recovered(name):
    _, report = run_code_pipeline(BENCHMARK_DIR / "supported" / name)
    assert not report.missed, [c.render() for c in report.missed]
    assert not report.spurious, [c.render() for c in report.spurious]


@pytest.mark.parametrize("name", CODE_CHALLENGES)
def test_code_challenge_loses_recall_not_precision(name):
    analysis, report = run_code_pipeline(BENCHMARK_DIR / "challenge" / name)
    assert Score.of(report).precision == 1.0
    assert report.missed
    kinds = {d.kind for d in analysis.diagnostics}
    assert kinds & {"unparsed", "truncated"}
    if name == "b8_framework_validation":
        assert "external" in kinds


@pytest.mark.parametrize("name", DOC_CHALLENGES)
def test_doc_challenge_reports_nothing_wrong(name):
    directory = BENCHMARK_DIR / "challenge" / name
    spec = load_spec_file(spec_file(directory))
    scenario = load_scenario(directory / "scenario.json")
    base = build_base_request(spec)
    report = probe_endpoint(spec, find_candidates(spec), ScenarioProbeClient(scenario), base, rate_limit=1000)

    truth = load_ground_truth(directory / "truth.gt", spec)
    doc_report = evaluate_endpoint(truth, doc=report.constraints, spec=spec).reports[DOC]
    assert not doc_report.spurious
    assert doc_report.missed

    messages = {(d.candidate, d.message) for d in report.diagnostics}
    if name == "a4_unobserved_constraint":
        assert ("<base>", "base request rejected") in messages
        assert ("shopperReference+storeDetail", UNOBSERVED) in messages
    else:
        assert not report.constraints
