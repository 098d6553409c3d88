"""Loading hand-collected ground truth constraints."""

from pathlib import Path
from typing import List, Optional

from ..constraints.constraint import Constraint, Origin
from ..constraints.dsl import load_dsl_file
from ..exceptions import ConfigError
from ..oas.models import EndpointSpec
from ..utils.logger import get_logger

logger = get_logger(__name__)


def load_ground_truth(path: Path, spec: Optional[EndpointSpec] = None) -> List[Constraint]:
    """Read a DSL truth file; ``@class``/``@cat`` labels are kept on every constraint.

    With ``spec`` every path is checked against the endpoint's parameters.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"ground truth file not found: {path}")
    catalog = spec.paths() if spec is not None else None
    constraints = load_dsl_file(path, catalog=catalog, origin=Origin.TRUTH)
    logger.info(f"Loaded {len(constraints)} ground truth constraints from {path}")
    return constraints
