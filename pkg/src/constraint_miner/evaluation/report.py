"""Per-endpoint evaluation of the code, documentation and combined pipelines."""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import pandas as pd

from ..constraints.constraint import Constraint, decompose_all
from ..constraints.domain import Domain, build_domain, combine
from ..oas.models import EndpointSpec
from ..utils.logger import get_logger
from .matcher import EvaluationReport, match_constraints
from .metrics import ALL, metrics, overlap

logger = get_logger(__name__)

CODE = "code"
DOC = "doc"
COMBINED = "combined"
PIPELINES = (CODE, DOC, COMBINED)

TABLE_COLUMNS = ["Endpoint", "Pipeline", "Identified", "Total", "FP"]


@dataclass
class EndpointEvaluation:
    endpoint: str
    reports: Dict[str, EvaluationReport] = field(default_factory=dict)
    shared: int = 0

    def to_dict(self) -> Dict[str, object]:
        pipelines = {}
        for name, report in self.reports.items():
            entry = report.to_dict()
            entry["metrics"] = {cls: score.to_dict() for cls, score in metrics(report).items()}
            pipelines[name] = entry
        return {"endpoint": self.endpoint, "shared_matches": self.shared, "pipelines": pipelines}


def _domain(
    truth: Sequence[Constraint],
    identified: Iterable[Sequence[Constraint]],
    spec: Optional[EndpointSpec],
) -> Domain:
    pool = list(decompose_all(truth))
    for constraints in identified:
        pool.extend(decompose_all(constraints))
    return build_domain([c for c in pool if not c.partial], spec=spec)


def evaluate_endpoint(
    truth: Sequence[Constraint],
    code: Optional[Sequence[Constraint]] = None,
    doc: Optional[Sequence[Constraint]] = None,
    spec: Optional[EndpointSpec] = None,
    endpoint: str = "",
) -> EndpointEvaluation:
    """Score every pipeline that produced output; ``combined`` needs both."""
    endpoint = endpoint or (spec.endpoint_path if spec is not None else "")
    given = {name: list(c) for name, c in ((CODE, code), (DOC, doc)) if c is not None}
    domain = _domain(truth, given.values(), spec)

    evaluation = EndpointEvaluation(endpoint)
    for name, constraints in given.items():
        evaluation.reports[name] = match_constraints(
            constraints, truth, domain=domain, endpoint=endpoint, pipeline=name
        )
    if len(given) == 2:
        union = combine(given[CODE], given[DOC], domain=domain)
        evaluation.reports[COMBINED] = match_constraints(
            union, truth, domain=domain, endpoint=endpoint, pipeline=COMBINED
        )
        evaluation.shared = overlap(evaluation.reports[CODE], evaluation.reports[DOC])
    return evaluation


def render_table(evaluations: Iterable[EndpointEvaluation], constraint_class: str = ALL) -> str:
    """Fixed-width table with one row per endpoint and pipeline."""
    rows: List[Dict[str, object]] = []
    for evaluation in evaluations:
        for name in PIPELINES:
            report = evaluation.reports.get(name)
            if report is None:
                continue
            score = metrics(report)[constraint_class]
            rows.append({
                "Endpoint": evaluation.endpoint,
                "Pipeline": name,
                "Identified": score.matched,
                "Total": score.truth_total,
                "FP": score.false_positives,
            })
    frame = pd.DataFrame.from_records(rows, columns=TABLE_COLUMNS)
    if frame.empty:
        return frame.to_string(index=False)
    totals = frame.groupby("Pipeline", sort=False)[["Identified", "Total", "FP"]].sum().reset_index()
    totals.insert(0, "Endpoint", "Total")
    return pd.concat([frame, totals], ignore_index=True).to_string(index=False)


def report_to_json(evaluations: Iterable[EndpointEvaluation]) -> str:
    return json.dumps([e.to_dict() for e in evaluations], indent=2, ensure_ascii=False)


def write_report(evaluations: Iterable[EndpointEvaluation], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report_to_json(evaluations) + "\n", encoding="utf-8")
    logger.info(f"Evaluation report written to {path}")
    return path
