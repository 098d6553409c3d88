"""Parameter-name co-occurrence in descriptions."""

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Pattern, Set, Tuple

import numpy as np
import pandas as pd

from ..oas.models import EndpointSpec
from ..utils.logger import get_logger

logger = get_logger(__name__)


@lru_cache(maxsize=4096)
def word_pattern(word: str) -> Pattern[str]:
    """Case-sensitive whole-word matcher; identifiers do not match inside longer identifiers."""
    return re.compile(rf"(?<![A-Za-z0-9_]){re.escape(word)}(?![A-Za-z0-9_])")


def count_mentions(word: str, text: str) -> int:
    if not word or not text:
        return 0
    return len(word_pattern(word).findall(text))


@dataclass(frozen=True)
class CooccurrenceMatrix:
    """``cells[i, j]``: mentions of parameter j's name in parameter i's description."""

    params: Tuple[str, ...]
    cells: np.ndarray

    def index(self, path: str) -> int:
        return self.params.index(path)

    def cell(self, describing: str, mentioned: str) -> int:
        return int(self.cells[self.index(describing), self.index(mentioned)])

    def symmetrized(self) -> np.ndarray:
        sym = self.cells + self.cells.T
        np.fill_diagonal(sym, 0)
        return sym

    def partner_totals(self) -> np.ndarray:
        """Number of distinct parameters each parameter co-occurs with."""
        return np.count_nonzero(self.symmetrized(), axis=1)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.cells, index=list(self.params), columns=list(self.params))


def build_cooccurrence(spec: EndpointSpec) -> CooccurrenceMatrix:
    params = spec.paths()
    size = len(params)
    cells = np.zeros((size, size), dtype=np.int64)
    names = [spec.flat_index[path].name for path in params]

    for i, describing in enumerate(params):
        description = spec.flat_index[describing].description
        if not description:
            continue
        for j, name in enumerate(names):
            if i == j:
                continue
            cells[i, j] = count_mentions(name, description)

    logger.debug(f"Co-occurrence matrix for {spec.endpoint_path}: {int(np.count_nonzero(cells))} nonzero cells")
    return CooccurrenceMatrix(params=params, cells=cells)


def mark_values(spec: EndpointSpec) -> Dict[str, Set[Tuple[str, object]]]:
    """Enum literals mentioned verbatim in each description.

    Maps the describing path to ``(owner path, literal)`` pairs, where the
    owner is the parameter whose enum contains the literal.
    """
    enums: List[Tuple[str, object]] = [
        (parameter.path, literal)
        for parameter in spec.walk()
        for literal in parameter.enum_values
    ]
    marked: Dict[str, Set[Tuple[str, object]]] = {}
    for parameter in spec.walk():
        found = {
            (owner, literal)
            for owner, literal in enums
            if count_mentions(str(literal), parameter.description)
        }
        if found:
            marked[parameter.path] = found
    return marked
