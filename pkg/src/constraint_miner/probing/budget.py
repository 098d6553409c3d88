"""Request budget of pairwise probing."""

DEFAULT_TOP_K = 22
DEFAULT_VALUES_PER_PARAM = 2


def estimate_budget(
    parameter_count: int,
    top_k: int = DEFAULT_TOP_K,
    values_per_param: int = DEFAULT_VALUES_PER_PARAM,
) -> int:
    """Requests needed to probe every parameter against its ``top_k`` best partners.

    Each pair costs ``(values_per_param + 1) ** 2`` rows, one state being absence.
    """
    if parameter_count < 1:
        raise ValueError("parameter_count must be at least 1")
    if top_k < 0 or values_per_param < 0:
        raise ValueError("top_k and values_per_param must not be negative")
    partners = min(top_k, parameter_count - 1)
    return partners * parameter_count * (values_per_param + 1) ** 2
