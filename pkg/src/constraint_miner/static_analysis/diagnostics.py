"""Notes on where and why the code analysis lost precision."""

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, Iterable, List

from ..utils.logger import get_logger

logger = get_logger(__name__)

DIAGNOSTIC_KINDS = ("unparsed", "truncated", "recursive", "external", "ambiguous", "fall-through", "dead-branch")

# kinds that lose information; the rest only explain the output
_DEGRADED = {"unparsed", "truncated", "recursive", "ambiguous"}


@dataclass(frozen=True)
class AnalysisDiagnostic:
    kind: str
    message: str
    source: str = ""
    detail: str = ""

    def __post_init__(self) -> None:
        if self.kind not in DIAGNOSTIC_KINDS:
            raise ValueError(f"unknown diagnostic kind: {self.kind}")

    def to_dict(self) -> Dict[str, str]:
        return asdict(self)

    def __str__(self) -> str:
        where = f"{self.source}: " if self.source else ""
        return f"{where}[{self.kind}] {self.message}"


class DiagnosticLog:
    """Ordered, duplicate-free collection of diagnostics."""

    def __init__(self):
        self._items: Dict[tuple, AnalysisDiagnostic] = {}

    def add(self, kind: str, message: str, source: str = "", detail: str = "") -> None:
        diagnostic = AnalysisDiagnostic(kind, message, source, detail)
        key = (kind, message, source)
        if key in self._items:
            return
        self._items[key] = diagnostic
        if kind in _DEGRADED:
            logger.warning(str(diagnostic))
        else:
            logger.debug(str(diagnostic))

    def extend(self, diagnostics: Iterable[AnalysisDiagnostic]) -> None:
        for item in diagnostics:
            self.add(item.kind, item.message, item.source, item.detail)

    def items(self) -> List[AnalysisDiagnostic]:
        return list(self._items.values())

    def of_kind(self, kind: str) -> List[AnalysisDiagnostic]:
        return [d for d in self._items.values() if d.kind == kind]

    def __len__(self) -> int:
        return len(self._items)


def diagnostics_to_json(diagnostics: Iterable[AnalysisDiagnostic]) -> str:
    return json.dumps([d.to_dict() for d in diagnostics], indent=2, ensure_ascii=False)


def write_diagnostics(diagnostics: Iterable[AnalysisDiagnostic], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(diagnostics_to_json(diagnostics) + "\n", encoding="utf-8")
    return path


def read_diagnostics(path: Path) -> List[AnalysisDiagnostic]:
    return [AnalysisDiagnostic(**item) for item in json.loads(Path(path).read_text(encoding="utf-8"))]
