from typing import Optional


class CasimirStatsError(Exception):
    """
    Base class for all casimirstats exceptions.

    Args:
        message: Human readable description of the failure.
        module: Name of the module that raised the error (e.g. "pdf").
        parameter: The offending parameter, if one can be named.
        remedy: A suggested fix shown by the command-line front end.
    """

    exit_code = 1

    def __init__(
        self,
        message: str,
        *,
        module: Optional[str] = None,
        parameter: Optional[str] = None,
        remedy: Optional[str] = None,
    ):
        self.module = module
        self.parameter = parameter
        self.remedy = remedy
        super().__init__(message)

    def describe(self) -> str:
        """
        Format the error with its module, parameter and remedy.

        Returns:
            A single-line diagnostic suitable for the CLI.
        """
        parts = []
        if self.module:
            parts.append(f"[{self.module}]")
        parts.append(str(self))
        if self.parameter:
            parts.append(f"(parameter: {self.parameter})")
        if self.remedy:
            parts.append(f"-- {self.remedy}")
        return " ".join(parts)


class ValidationError(CasimirStatsError):
    """Exception raised when a value violates a type invariant."""

    exit_code = 2


class ConfigurationError(CasimirStatsError):
    """
    Exception raised when an experiment configuration cannot be used.

    Args:
        message: Description of the problem.
        line: 1-based line of the first error, if known.
        column: 1-based column of the first error, if known.
    """

    exit_code = 2

    def __init__(
        self,
        message: str,
        *,
        line: Optional[int] = None,
        column: Optional[int] = None,
        **kwargs,
    ):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column or 1}: {message}"
        super().__init__(message, **kwargs)


class UnknownKeyError(ConfigurationError):
    """Exception raised for a configuration key the parser does not know."""
    pass


class TypeMismatchError(ConfigurationError):
    """Exception raised when a configuration value has the wrong type."""
    pass


class MissingKeyError(ConfigurationError):
    """Exception raised when a required configuration key is absent."""
    pass


class DomainError(CasimirStatsError):
    """Exception raised when an argument lies outside an operation's domain."""

    exit_code = 3


class RegimeError(CasimirStatsError):
    """Exception raised when an asymptotic formula is used outside its regime."""

    exit_code = 4


class PrecisionError(CasimirStatsError):
    """Exception raised when a computation has lost its significant digits."""

    exit_code = 5


class TruncationError(CasimirStatsError):
    """Exception raised when a truncated basis or sum is too small."""

    exit_code = 6


class IntegrationError(CasimirStatsError):
    """
    Exception raised when the mode equation cannot be integrated.

    Args:
        message: Description of the failure.
        time: The time at which integration failed.
    """

    exit_code = 7

    def __init__(self, message: str, *, time: Optional[float] = None, **kwargs):
        self.time = time
        if time is not None:
            message = f"{message} at t={time!r}"
        super().__init__(message, **kwargs)


class RangeError(CasimirStatsError):
    """
    Exception raised when a quantity leaves the representable range.

    Args:
        message: Description of the failure.
        quantity: Name of the quantity that overflowed.
    """

    exit_code = 8

    def __init__(self, message: str, *, quantity: Optional[str] = None, **kwargs):
        self.quantity = quantity
        kwargs.setdefault("parameter", quantity)
        super().__init__(message, **kwargs)


class NumericalConsistencyError(CasimirStatsError):
    """Exception raised when a computed state violates a physical invariant."""

    exit_code = 9


class PreconditionError(CasimirStatsError):
    """Exception raised when inputs of an operation do not fit together."""

    exit_code = 10


class ValidityWarning(UserWarning):
    """Base class for warnings about approximations used near their limits."""
    pass


class PulseValidityWarning(ValidityWarning):
    """Warning raised for pulses outside the weak-modulation assumptions."""
    pass


class AsymptoticValidityWarning(ValidityWarning):
    """Warning raised when an asymptotic formula is evaluated out of range."""
    pass


class RegimeValidityWarning(ValidityWarning):
    """Warning raised when a formula's regime conditions are only marginal."""
    pass
