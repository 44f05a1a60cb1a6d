"""
Exception types raised across the package.

Configuration and domain problems are ValueErrors (bad input), numerical
problems are RuntimeErrors (the input was fine, the computation was not).
The CLI maps the first family to exit code 1 and the second to exit code 2.
"""


class CqedError(Exception):
    """Base class for every error raised on purpose by cqed."""


class ConfigurationError(CqedError, ValueError):
    """Invalid parameters, grid settings or scenario files."""

    def __init__(self, message: str, field: str = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class DomainError(CqedError, ValueError):
    """An argument outside the domain of an operation (e.g. negative time)."""


class NumericalError(CqedError, RuntimeError):
    """A computation could not produce a trustworthy number."""


class DivergenceError(NumericalError):
    """A quantity needs a decaying solution but the parameters do not decay."""


class UnsupportedRegimeError(NumericalError):
    """A closed form was asked for outside the regime it was derived in."""


class ConsistencyError(NumericalError):
    """A closed form produced a value its own identities rule out."""


class TruncationError(NumericalError):
    """The frequency grid cuts off too much of a spectrum."""


class FidelityUndefinedError(NumericalError):
    """Heralding probability too small to condition on."""


class StepSizeError(NumericalError):
    """The adaptive integrator gave up (step-size underflow or tolerance failure)."""
