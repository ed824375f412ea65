"""Exception types shared across the package."""


class FreePistonError(Exception):
    """Base class for all errors raised by freepiston."""


class ValidationError(FreePistonError, ValueError):
    """A parameter or configuration value violates its invariant."""


class DomainError(FreePistonError, ValueError):
    """A position lies outside the region where the gas volumes are positive."""


class ContractViolation(FreePistonError, ValueError):
    """A caller broke an operation's precondition."""


class NumericalFailure(FreePistonError, RuntimeError):
    """The integrator could not make progress.

    ``x`` holds the piston position at failure, when known.
    """

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x
