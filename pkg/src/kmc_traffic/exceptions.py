"""Custom exceptions for kmc_traffic package."""

from typing import Any, Optional


class KMCTrafficException(Exception):
    """Base exception for kmc_traffic package."""

    pass


class InvalidConfiguration(KMCTrafficException, ValueError):
    """Raised when a simulation, kernel or slowdown parameter is invalid.

    Attributes:
        key: Name of the offending configuration key, when known
    """

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class UnknownCar(KMCTrafficException, KeyError):
    """Raised when a car identity is not present in the registry."""

    pass


class FrozenSystem(KMCTrafficException):
    """Raised when the total rate vanishes and no event can fire.

    Attributes:
        clock: Simulated time at which the system froze
    """

    def __init__(self, message: str, clock: float = 0.0):
        super().__init__(message)
        self.clock = clock


class MeasurementError(KMCTrafficException):
    """Raised when an average is requested over an empty measurement window."""

    pass


class ValidationFailed(KMCTrafficException):
    """Raised when one or more oracle checks fail.

    Attributes:
        report: The validation report that failed
    """

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report
