"""Exception hierarchy shared across the package."""


class SliceboundError(Exception):
    """Base class for all library errors."""


class StructuralError(SliceboundError):
    """Malformed input: dimension mismatches, bad schemas, invalid parameters."""


class DomainError(StructuralError):
    """Argument outside the mathematical domain of an operation."""


class GateError(SliceboundError):
    """A hypothesis required by a bound formula is violated.

    Carries the offending indices (when applicable) so callers can report
    which weights broke the gate.
    """

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = list(offending) if offending is not None else []


class DegenerateRegimeError(SliceboundError):
    """The formula degenerates for these parameters (e.g. m0 == k)."""
