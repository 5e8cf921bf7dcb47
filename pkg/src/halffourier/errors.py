"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class ToleranceNotReached(RuntimeError):
    """A numerical routine could not certify the requested accuracy.

    The best available estimate and its error are attached so that callers
    can decide whether to use them anyway.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class NonSummableError(RuntimeError):
    """An integrand (kernel or kernel derivative) appears not to be summable."""


class KernelSpecError(ValueError):
    """Malformed kernel expression.

    ``position`` is the zero-based character offset where parsing failed.
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class SimulationError(RuntimeError):
    """The time stepper became unstable or was configured inconsistently."""
