"""Exception hierarchy shared across the package.

The CLI maps these to distinct exit codes, so the taxonomy stays coarse:
bad inputs, unsupported noise kind, quadrature accuracy failure, fixed-point
non-convergence, and resource caps on the exhaustive / Monte-Carlo oracles.
"""


class CapacityToolError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CapacityToolError, ValueError):
    """An argument violates an operation's domain (k > n, t outside [0,1], ...)."""


class UnsupportedNoiseError(CapacityToolError, ValueError):
    """The requested functional is undefined for this noise kind."""


class QuadratureError(CapacityToolError, ArithmeticError):
    """Adaptive quadrature hit its recursion cap before reaching tolerance."""

    def __init__(self, message: str, partial: float):
        super().__init__(message)
        self.partial = partial


class ConvergenceError(CapacityToolError, ArithmeticError):
    """A fixed-point iteration failed to converge; diagnostics attached."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ResourceLimitError(CapacityToolError, RuntimeError):
    """Problem size exceeds a hard enumeration/sampling cap."""
