"""Precision and recall of matching reports."""

from dataclasses import dataclass
from typing import Dict, Iterable

from ..constraints.dsl import pretty_print
from .matcher import EvaluationReport

ALL = "all"


def ratio(numerator: int, denominator: int) -> float:
    """``numerator / denominator``; an empty denominator counts as perfect."""
    if denominator == 0:
        return 1.0
    return numerator / denominator


@dataclass(frozen=True)
class Score:
    matched: int
    truth_total: int
    identified_total: int

    @property
    def recall(self) -> float:
        return ratio(self.matched, self.truth_total)

    @property
    def precision(self) -> float:
        return ratio(self.matched, self.identified_total)

    @property
    def false_positives(self) -> int:
        return self.identified_total - self.matched

    @classmethod
    def of(cls, report: EvaluationReport) -> "Score":
        return cls(len(report.matched), report.truth_total, report.identified_total)

    def to_dict(self) -> Dict[str, float]:
        return {
            "matched": self.matched,
            "truth_total": self.truth_total,
            "identified_total": self.identified_total,
            "false_positives": self.false_positives,
            "recall": round(self.recall, 3),
            "precision": round(self.precision, 3),
        }


def metrics(report: EvaluationReport) -> Dict[str, Score]:
    """Scores per constraint class plus ``all``."""
    scores = {name: Score.of(part) for name, part in report.by_class().items()}
    scores[ALL] = Score.of(report)
    return scores


def sum_scores(scores: Iterable[Score]) -> Score:
    matched = truth_total = identified_total = 0
    for score in scores:
        matched += score.matched
        truth_total += score.truth_total
        identified_total += score.identified_total
    return Score(matched, truth_total, identified_total)


def overlap(first: EvaluationReport, second: EvaluationReport) -> int:
    """Truth constraints matched by both reports."""
    found = {pretty_print(pair.truth, with_labels=False) for pair in first.matched}
    return len({pretty_print(pair.truth, with_labels=False) for pair in second.matched} & found)


def combined_matched(first: EvaluationReport, second: EvaluationReport) -> int:
    """Matches of both pipelines with the shared ones counted once."""
    return len(first.matched) + len(second.matched) - overlap(first, second)
