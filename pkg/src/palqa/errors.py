"""Exception types shared across the package."""


class FormatError(ValueError):
    """Malformed or corrupt external data: PGM, payload bytes, circuit text."""


class SimulationError(RuntimeError):
    """Simulator invariant violation (qubit cap, nondeterministic reset, ...)."""
