"""Documentation mining: co-occurrence, enum value marking and candidates."""

from .candidates import (
    Candidate,
    candidates_from_json,
    candidates_from_list,
    candidates_to_json,
    find_candidates,
    frequent_parameters,
    read_candidates,
    write_candidates,
)
from .cooccurrence import CooccurrenceMatrix, build_cooccurrence, mark_values

__all__ = [
    "Candidate",
    "CooccurrenceMatrix",
    "build_cooccurrence",
    "candidates_from_json",
    "candidates_from_list",
    "candidates_to_json",
    "find_candidates",
    "frequent_parameters",
    "mark_values",
    "read_candidates",
    "write_candidates",
]
