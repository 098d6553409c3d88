"""Candidate parameter pairs for probing."""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from ..exceptions import CandidateError
from ..oas.models import EndpointSpec
from ..utils.logger import get_logger
from .cooccurrence import CooccurrenceMatrix, build_cooccurrence, mark_values

logger = get_logger(__name__)


@dataclass(frozen=True)
class Candidate:
    """Parameters suspected to be related, with the enum values worth probing."""

    params: Tuple[str, ...]
    values: Dict[str, List[Any]] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self) -> None:
        if len(self.params) < 2:
            raise CandidateError(f"a candidate needs at least two parameters, got {list(self.params)}")
        if len(set(self.params)) != len(self.params):
            raise CandidateError(f"candidate lists a parameter twice: {list(self.params)}")
        object.__setattr__(self, "params", tuple(sorted(self.params)))

    def marked(self, path: str) -> List[Any]:
        return list(self.values.get(path, []))

    def to_dict(self) -> Dict[str, Any]:
        return {"params": list(self.params), "values": {p: list(v) for p, v in sorted(self.values.items())}}

    def label(self) -> str:
        return "+".join(self.params)


def frequent_parameters(matrix: CooccurrenceMatrix, frequency_factor: float = 2.0) -> List[str]:
    """Parameters co-occurring with more than ``frequency_factor`` times the mean partner count."""
    if frequency_factor <= 0:
        raise ValueError("frequency_factor must be positive")
    totals = matrix.partner_totals()
    nonzero = totals[totals > 0]
    if nonzero.size == 0:
        return []
    limit = frequency_factor * float(np.mean(nonzero))
    return [matrix.params[i] for i in np.flatnonzero(totals > limit)]


def _marked_for_pair(
    spec: EndpointSpec,
    pair: Tuple[str, str],
    marked: Dict[str, set],
) -> Dict[str, List[Any]]:
    values: Dict[str, List[Any]] = {}
    found = set()
    for describing in pair:
        found |= marked.get(describing, set())
    for owner in pair:
        literals = {literal for path, literal in found if path == owner}
        if literals:
            # enum order, for deterministic tables
            values[owner] = [v for v in spec.flat_index[owner].enum_values if v in literals]
    return values


def find_candidates(spec: EndpointSpec, frequency_factor: float = 2.0) -> List[Candidate]:
    """Pairs of parameters that mention each other in their descriptions."""
    matrix = build_cooccurrence(spec)
    dropped = set(frequent_parameters(matrix, frequency_factor))
    if dropped:
        logger.info(f"Ignoring frequently co-occurring parameters: {sorted(dropped)}")

    marked = mark_values(spec)
    sym = matrix.symmetrized()
    result: List[Candidate] = []
    for i, j in zip(*np.nonzero(np.triu(sym, k=1))):
        a, b = matrix.params[i], matrix.params[j]
        if a in dropped or b in dropped:
            continue
        pair = tuple(sorted((a, b)))
        result.append(Candidate(params=pair, values=_marked_for_pair(spec, pair, marked)))

    result.sort(key=lambda c: c.params)
    logger.info(f"Found {len(result)} candidates for {spec.endpoint_path}")
    return result


def candidates_to_json(candidates: Iterable[Candidate]) -> str:
    return json.dumps([c.to_dict() for c in candidates], indent=2, ensure_ascii=False)


def candidates_from_json(text: str, spec: Optional[EndpointSpec] = None) -> List[Candidate]:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise CandidateError(f"invalid candidate JSON: {e}") from e
    return candidates_from_list(raw, spec)


def candidates_from_list(raw: Any, spec: Optional[EndpointSpec] = None) -> List[Candidate]:
    if not isinstance(raw, list):
        raise CandidateError("candidate list must be a JSON array")
    result = []
    for entry in raw:
        if not isinstance(entry, dict) or "params" not in entry:
            raise CandidateError(f"candidate entry must be an object with 'params': {entry!r}")
        values = {path: list(literals) for path, literals in (entry.get("values") or {}).items()}
        candidate = Candidate(params=tuple(entry["params"]), values=values)
        if spec is not None:
            unknown = [p for p in candidate.params + tuple(values) if p not in spec.flat_index]
            if unknown:
                raise CandidateError(f"candidate {candidate.label()} uses unknown paths {unknown}")
        result.append(candidate)
    return result


def write_candidates(candidates: Iterable[Candidate], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(candidates_to_json(candidates) + "\n", encoding="utf-8")
    return path


def read_candidates(path: Path, spec: Optional[EndpointSpec] = None) -> List[Candidate]:
    path = Path(path)
    if not path.exists():
        raise CandidateError(f"candidate file not found: {path}")
    return candidates_from_json(path.read_text(encoding="utf-8"), spec)
