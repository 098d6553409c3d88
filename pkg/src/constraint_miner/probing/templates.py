"""Fit constraint templates to filled observation tables.

Every template whose predicted failing rows are exactly the rows that
failed is emitted; there is no noise tolerance.
"""

from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Tuple

from ..config.settings import settings
from ..constraints.atoms import Eq
from ..constraints.constraint import (
    Constraint,
    Origin,
    all_or_none,
    any_of,
    dedupe,
    exactly_one,
    present,
    requires,
)
from ..constraints.formula import Formula, Leaf, evaluate
from ..exceptions import ProbeAbortedError
from ..utils.logger import get_logger
from .tables import ObservationTable, ResultKind

logger = get_logger(__name__)

UNOBSERVED = "unobserved constraints suspected"
NO_TEMPLATE = "no template fits"


@dataclass(frozen=True)
class Template:
    name: str
    formula: Formula


@dataclass(frozen=True)
class ProbeDiagnostic:
    candidate: str
    message: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {"candidate": self.candidate, "message": self.message, "detail": self.detail}


@dataclass
class FitResult:
    constraints: List[Constraint] = field(default_factory=list)
    diagnostics: List[ProbeDiagnostic] = field(default_factory=list)


def candidate_templates(table: ObservationTable) -> List[Template]:
    """Templates worth testing against ``table``, in emission order."""
    paths = list(table.paths)
    templates: List[Template] = []
    if len(paths) == 2:
        a, b = paths
        templates.append(Template(f"requires({a}, {b})", requires(present(a), [b])))
        templates.append(Template(f"requires({b}, {a})", requires(present(b), [a])))
    templates.append(Template(f"any-of({', '.join(paths)})", any_of(paths)))
    templates.append(Template(f"exactly-one({', '.join(paths)})", exactly_one(paths)))
    templates.append(Template(f"all-or-none({', '.join(paths)})", all_or_none(paths)))
    if len(paths) == 2:
        for owner, other in ((paths[0], paths[1]), (paths[1], paths[0])):
            for value in table.candidate.marked(owner):
                templates.append(
                    Template(
                        f"requires({owner} == {value!r}, {other})",
                        requires(Leaf(Eq(owner, value)), [other]),
                    )
                )
    return templates


def _predicted(template: Template, table: ObservationTable, rows: List[int]) -> FrozenSet[int]:
    return frozenset(i for i in rows if evaluate(template.formula, table.rows[i].point()))


def fit_templates(
    table: ObservationTable,
    error_abort_ratio: Optional[float] = None,
) -> FitResult:
    """Constraints whose failure predictions match ``table`` exactly."""
    label = table.candidate.label()
    limit = settings.error_abort_ratio if error_abort_ratio is None else error_abort_ratio
    if not table.complete:
        raise ValueError(f"table {label} has rows without results")
    ratio = table.error_ratio()
    if ratio > limit:
        raise ProbeAbortedError(f"{label}: {ratio:.0%} of probe rows failed in transport (limit {limit:.0%})")

    usable = [i for i, row in enumerate(table.rows) if row.result.kind is not ResultKind.ERROR]
    observed = frozenset(i for i in usable if table.rows[i].result.kind is ResultKind.FAILURE)
    result = FitResult()

    if not observed:
        return result
    if observed == frozenset(usable):
        logger.warning(f"{label}: every combination failed")
        result.diagnostics.append(
            ProbeDiagnostic(label, UNOBSERVED, "every row failed; the base request or another constraint rejects all combinations")
        )
        return result

    fitted: List[Constraint] = []
    for template in candidate_templates(table):
        if _predicted(template, table, usable) == observed:
            logger.debug(f"{label}: {template.name} fits")
            fitted.append(
                Constraint(
                    precondition=template.formula,
                    origin=Origin.DOC,
                    source_ref=f"probe {label}: {template.name}",
                ).normalized()
            )

    if not fitted:
        failing = [dict(table.rows[i].assignment) for i in sorted(observed)]
        logger.warning(f"{label}: no template explains {len(observed)} failing rows")
        result.diagnostics.append(ProbeDiagnostic(label, NO_TEMPLATE, f"failing rows: {failing!r}"))
        return result

    if len(fitted) > 1:
        logger.info(f"{label}: {len(fitted)} templates reproduce the table")
    result.constraints = dedupe(fitted)
    return result


def predicted_failures(constraints: List[Constraint], table: ObservationTable) -> Tuple[int, ...]:
    """Rows that ``constraints`` declare invalid; used for self-consistency checks."""
    return tuple(
        i
        for i, row in enumerate(table.rows)
        if any(evaluate(c.precondition, row.point()) for c in constraints)
    )
