"""Exception types shared across the package."""


class StaboundError(Exception):
    """Base class for every failure this package raises on purpose."""


class NotSymmetricError(StaboundError):
    """Matrix violates the symmetry tolerance."""


class NotPositiveDefiniteError(StaboundError):
    """A weight matrix is not positive definite.

    Carries the offending smallest eigenvalue in ``lambda_min``.
    """

    def __init__(self, message: str, lambda_min: float | None = None):
        super().__init__(message)
        self.lambda_min = lambda_min


class EigenConvergenceError(StaboundError):
    """Jacobi iteration did not converge within the sweep limit."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class NumericalError(StaboundError):
    """Overflow or a failed numerical self-check (e.g. residual too large)."""


class StiffnessError(StaboundError):
    """Adaptive step size underflowed; the problem is too stiff as posed."""


class NotUasError(StaboundError):
    """The system failed a uniform-asymptotic-stability check.

    ``failing_time`` is set when the failure is tied to a specific time.
    """

    def __init__(self, message: str, failing_time: float | None = None):
        super().__init__(message)
        self.failing_time = failing_time


class ExprError(StaboundError):
    """Base class for expression parsing/evaluation failures."""


class ExprSyntaxError(ExprError):
    """Malformed expression text; ``offset`` is the byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class ExprDomainError(ExprError):
    """Evaluation hit a domain violation (sqrt/ln of negative, division by zero, overflow)."""


class ConfigError(StaboundError):
    """Invalid analysis configuration or system description."""
