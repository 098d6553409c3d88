"""Observation tables: one row per presence/value combination of a candidate."""

import itertools
import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import pandas as pd

from ..constraints.domain import Domain
from ..constraints.formula import ABSENT, Assignment
from ..doc_analysis.candidates import Candidate
from ..exceptions import CandidateError
from ..oas.defaults import default_value
from ..oas.models import EndpointSpec

ABSENT_CELL = "<absent>"


class ResultKind(str, Enum):
    SUCCESS = "Success"
    FAILURE = "Failure"
    ERROR = "Error"


@dataclass(frozen=True)
class ProbeOutcome:
    """Classified response of one probe request."""

    kind: ResultKind
    status: Optional[int] = None
    detail: str = ""

    @classmethod
    def from_status(cls, status: int) -> "ProbeOutcome":
        kind = ResultKind.SUCCESS if 200 <= status < 300 else ResultKind.FAILURE
        return cls(kind=kind, status=status)

    @classmethod
    def error(cls, detail: str) -> "ProbeOutcome":
        return cls(kind=ResultKind.ERROR, detail=detail)

    @property
    def failed(self) -> bool:
        return self.kind is ResultKind.FAILURE

    def render(self) -> str:
        if self.kind is ResultKind.ERROR:
            return f"Error({self.detail})"
        return self.kind.value


@dataclass(frozen=True)
class StateSet:
    """Per path: ``ABSENT`` followed by the values to probe."""

    states: Mapping[str, Tuple[Any, ...]]

    @property
    def paths(self) -> Tuple[str, ...]:
        return tuple(self.states)

    def values(self, path: str) -> Tuple[Any, ...]:
        return self.states[path][1:]

    def domain(self) -> Domain:
        return Domain.from_states({path: self.values(path) for path in self.states})

    def row_count(self) -> int:
        total = 1
        for states in self.states.values():
            total *= len(states)
        return total


def build_state_set(
    candidate: Candidate,
    spec: EndpointSpec,
    overrides: Optional[Mapping[str, Any]] = None,
) -> StateSet:
    states: Dict[str, Tuple[Any, ...]] = {}
    for path in candidate.params:
        parameter = spec.flat_index.get(path)
        if parameter is None:
            raise CandidateError(f"candidate {candidate.label()} uses unknown path '{path}'")
        values = candidate.marked(path) or [default_value(parameter, overrides)]
        states[path] = (ABSENT,) + tuple(values)
    return StateSet(states)


@dataclass(frozen=True)
class ObservationRow:
    assignment: Mapping[str, Any]
    result: Optional[ProbeOutcome] = None

    def point(self) -> Assignment:
        return Assignment(dict(self.assignment))


@dataclass(frozen=True)
class ObservationTable:
    candidate: Candidate
    state_set: StateSet
    rows: Tuple[ObservationRow, ...] = field(default_factory=tuple)

    @property
    def paths(self) -> Tuple[str, ...]:
        return self.state_set.paths

    @property
    def complete(self) -> bool:
        return all(row.result is not None for row in self.rows)

    def with_results(self, results: Sequence[ProbeOutcome]) -> "ObservationTable":
        if len(results) != len(self.rows):
            raise ValueError(f"expected {len(self.rows)} results, got {len(results)}")
        rows = tuple(replace(row, result=result) for row, result in zip(self.rows, results))
        return replace(self, rows=rows)

    def rows_of(self, kind: ResultKind) -> List[ObservationRow]:
        return [row for row in self.rows if row.result is not None and row.result.kind is kind]

    def error_ratio(self) -> float:
        if not self.rows:
            return 0.0
        return len(self.rows_of(ResultKind.ERROR)) / len(self.rows)

    def to_frame(self) -> pd.DataFrame:
        records = []
        for row in self.rows:
            record = {
                path: ABSENT_CELL if value is ABSENT else json.dumps(value, ensure_ascii=False)
                for path, value in row.assignment.items()
            }
            record["result"] = row.result.render() if row.result else ""
            records.append(record)
        return pd.DataFrame.from_records(records, columns=list(self.paths) + ["result"])

    def write_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path


def enumerate_rows(
    candidate: Candidate,
    spec: EndpointSpec,
    overrides: Optional[Mapping[str, Any]] = None,
) -> ObservationTable:
    """Every combination of the candidate's states, in lexicographic state order."""
    if len(candidate.params) < 2:
        raise CandidateError("observation tables need at least two parameters")
    state_set = build_state_set(candidate, spec, overrides)
    paths = state_set.paths
    rows = tuple(
        ObservationRow(assignment=dict(zip(paths, combo)))
        for combo in itertools.product(*(state_set.states[p] for p in paths))
    )
    return ObservationTable(candidate=candidate, state_set=state_set, rows=rows)


def read_table_csv(path: Path) -> pd.DataFrame:
    return pd.read_csv(Path(path), dtype=str, keep_default_na=False)
