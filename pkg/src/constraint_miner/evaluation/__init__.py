"""Scoring identified constraints against ground truth."""

from .ground_truth import load_ground_truth
from .matcher import EvaluationReport, MatchedPair, match_constraints
from .metrics import ALL, Score, combined_matched, metrics, overlap, ratio, sum_scores
from .report import (
    CODE,
    COMBINED,
    DOC,
    EndpointEvaluation,
    evaluate_endpoint,
    render_table,
    report_to_json,
    write_report,
)

__all__ = [
    "load_ground_truth",
    "EvaluationReport",
    "MatchedPair",
    "match_constraints",
    "ALL",
    "Score",
    "combined_matched",
    "metrics",
    "overlap",
    "ratio",
    "sum_scores",
    "CODE",
    "COMBINED",
    "DOC",
    "EndpointEvaluation",
    "evaluate_endpoint",
    "render_table",
    "report_to_json",
    "write_report",
]
