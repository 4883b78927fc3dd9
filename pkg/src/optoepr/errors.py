"""Exception hierarchy shared by all modules.

The split mirrors the CLI exit-code contract: parameter/configuration
problems exit 1, numerical failures exit 2.
"""


class OptoEprError(Exception):
    """Base class for all package errors."""


class ParameterError(OptoEprError):
    """Invalid parameter value, configuration, or domain violation."""


class NumericalError(OptoEprError):
    """A numerical procedure failed to meet its contract."""


class ConvergenceError(NumericalError):
    """Root polishing or iteration did not reach the required residual."""


class InstabilityError(NumericalError):
    """The linearized drift matrix has a non-negative eigenvalue real part."""


class InvalidRegimeError(NumericalError):
    """Closed-form inference variance would be non-positive (eps <= -1/2)."""
