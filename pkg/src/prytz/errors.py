"""Exception types shared across the engine, CLI, and service."""


class PrytzError(Exception):
    """Base class for engine errors."""


class InputError(PrytzError, ValueError):
    """Invalid or precondition-violating input (CLI exit 3, HTTP 422)."""


class NumericError(PrytzError, RuntimeError):
    """A computation failed to reach its stated tolerance (CLI exit 4)."""
