"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A family parameter is outside its admissible domain."""


class ConvergenceError(RuntimeError):
    """A series or truncation scan failed to reach the requested tolerance
    within the iteration cap."""


class ConsistencyError(RuntimeError):
    """An internal invariant was violated (e.g. the order implication chain
    broke on certified verdicts).  Always indicates a bug, never bad input."""
