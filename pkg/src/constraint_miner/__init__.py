"""
Constraint Miner

Infers inter-parameter constraints of web API endpoints from their
documentation (co-occurrence mining plus probing) and from the server
source that validates requests (static analysis).
"""

__version__ = "1.0.0"

from .config.settings import Settings
from .constraints import Constraint, equivalent, parse_dsl

__all__ = ["Settings", "Constraint", "equivalent", "parse_dsl", "__version__"]
