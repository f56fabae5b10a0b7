"""Exception types shared across the package."""


class ParseError(ValueError):
    """Raised on malformed expression input; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DegenerateMetricError(ValueError):
    """Raised when a leading-coefficient metric fails to invert."""


class PreconditionError(ValueError):
    """Raised when a check is invoked on data violating its precondition.

    The optional witness records the concrete violation (as a printable
    expression) so callers can report it.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
