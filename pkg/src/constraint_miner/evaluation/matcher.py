"""Matching identified constraints against ground truth."""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

from ..constraints.constraint import CONSTRAINT_CLASSES, Constraint, decompose_all
from ..constraints.domain import Domain, build_domain, equivalent
from ..constraints.dsl import pretty_print
from ..constraints.formula import referenced_paths, render
from ..oas.models import EndpointSpec
from ..utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class MatchedPair:
    identified: Constraint
    truth: Constraint

    @property
    def constraint_class(self) -> str:
        return self.truth.constraint_class

    def to_dict(self) -> Dict[str, str]:
        return {
            "identified": pretty_print(self.identified),
            "truth": pretty_print(self.truth),
            "class": self.constraint_class,
        }


@dataclass
class EvaluationReport:
    """Outcome of matching one pipeline's constraints for one endpoint.

    ``missed`` and ``spurious`` hold decomposed constraints; partial
    (Unparsed-bearing) identified constraints sit in ``manual_review``
    and count neither way.
    """

    endpoint: str = ""
    pipeline: str = ""
    matched: List[MatchedPair] = field(default_factory=list)
    missed: List[Constraint] = field(default_factory=list)
    spurious: List[Constraint] = field(default_factory=list)
    manual_review: List[Constraint] = field(default_factory=list)

    @property
    def truth_total(self) -> int:
        return len(self.matched) + len(self.missed)

    @property
    def identified_total(self) -> int:
        """Decomposed identified constraints, manual review excluded."""
        return len(self.matched) + len(self.spurious)

    def for_class(self, constraint_class: str) -> "EvaluationReport":
        """The same report restricted to one constraint class."""
        return EvaluationReport(
            endpoint=self.endpoint,
            pipeline=self.pipeline,
            matched=[p for p in self.matched if p.constraint_class == constraint_class],
            missed=[c for c in self.missed if c.constraint_class == constraint_class],
            spurious=[c for c in self.spurious if c.constraint_class == constraint_class],
            manual_review=[c for c in self.manual_review if c.constraint_class == constraint_class],
        )

    def by_class(self) -> Dict[str, "EvaluationReport"]:
        return {name: self.for_class(name) for name in CONSTRAINT_CLASSES}

    def to_dict(self) -> Dict[str, object]:
        return {
            "endpoint": self.endpoint,
            "pipeline": self.pipeline,
            "matched": [pair.to_dict() for pair in self.matched],
            "missed": [_entry(c) for c in self.missed],
            "spurious": [_entry(c) for c in self.spurious],
            "manual_review": [_entry(c) for c in self.manual_review],
        }


def _entry(constraint: Constraint) -> Dict[str, Optional[str]]:
    return {
        "constraint": pretty_print(constraint, with_labels=False),
        "class": constraint.constraint_class,
        "category": constraint.category,
        "source": constraint.source_ref or None,
    }


def _paths(constraints: Iterable[Constraint]) -> List[str]:
    paths = set()
    for constraint in constraints:
        paths |= referenced_paths(constraint.precondition)
    return sorted(paths)


def _same(identified: Constraint, truth: Constraint, domain: Domain) -> bool:
    if truth.partial:
        return identified.normalized() == truth.normalized()
    return equivalent(identified, truth, domain)


def match_constraints(
    identified: Sequence[Constraint],
    truth: Sequence[Constraint],
    domain: Optional[Domain] = None,
    spec: Optional[EndpointSpec] = None,
    endpoint: str = "",
    pipeline: str = "",
) -> EvaluationReport:
    """Greedy one-to-one matching of decomposed constraints by logical equivalence.

    Truth constraints are visited in file order and take the first
    equivalent identified constraint in normalized rendering order.
    Raises ``DomainCoverageError`` when an explicit ``domain`` misses a
    referenced path.
    """
    truth_parts = decompose_all(truth)
    report = EvaluationReport(endpoint=endpoint, pipeline=pipeline)

    candidates: List[Constraint] = []
    for constraint in decompose_all(identified):
        if constraint.partial:
            report.manual_review.append(constraint)
        else:
            candidates.append(constraint)
    candidates.sort(key=lambda c: render(c.normalized().precondition))

    complete = [c for c in truth_parts if not c.partial] + candidates
    if domain is None:
        domain = build_domain(complete, spec=spec)
    else:
        domain.covers(_paths(complete))

    used = [False] * len(candidates)
    for truth_constraint in truth_parts:
        for index, candidate in enumerate(candidates):
            if used[index] or not _same(candidate, truth_constraint, domain):
                continue
            used[index] = True
            report.matched.append(MatchedPair(candidate, truth_constraint))
            break
        else:
            report.missed.append(truth_constraint)

    report.spurious = [c for index, c in enumerate(candidates) if not used[index]]
    logger.info(
        f"{endpoint or 'endpoint'} [{pipeline or 'identified'}]: {len(report.matched)} matched, "
        f"{len(report.missed)} missed, {len(report.spurious)} spurious, "
        f"{len(report.manual_review)} for manual review"
    )
    return report
