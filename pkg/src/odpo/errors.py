"""Exception and warning types shared across the package."""


class DimensionMismatch(ValueError):
    """Vectors of incompatible dimensions were combined."""


class NormViolation(ValueError):
    """A vector exceeds the norm cap it must satisfy."""


class SingularMatrixError(RuntimeError):
    """A matrix that must be invertible is (numerically) singular."""


class SpanDeficientError(RuntimeError):
    """The difference-arm pool cannot support a design at all (e.g. empty)."""


class DomainError(ValueError):
    """A formula was evaluated outside its domain of definition."""


class InvalidScale(ValueError):
    """Requested parameter scale leaves the unit ball."""


class InstanceParseError(ValueError):
    """Instance text could not be parsed; message carries the line number."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class SpanDeficientWarning(UserWarning):
    """The arm pool does not span the ambient space; the optimality
    certificate against the full dimension cannot be met."""
