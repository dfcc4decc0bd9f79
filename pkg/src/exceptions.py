"""
Error taxonomy for the OSOMA toolkit.

Every error derives from OsomaError and from the builtin it refines, so
callers can catch either the toolkit type or the generic Python one.
"""

from typing import Optional


class OsomaError(Exception):
    """Base class for all toolkit errors"""


class ConfigurationError(OsomaError, ValueError):
    """Invalid sizes, parameters, algorithm names or override keys"""


class DimensionError(OsomaError, ValueError):
    """A vector's length does not satisfy a dimension constraint"""


class UnknownFunctionError(OsomaError, KeyError):
    """Benchmark lookup by an unregistered name"""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the message readable
        return str(self.args[0]) if self.args else ""


class SwapIndexError(OsomaError, IndexError):
    """Swap operator position outside the tour"""


class InstanceMismatchError(OsomaError, ValueError):
    """Two tours do not range over the same city set"""


class InstanceError(OsomaError, ValueError):
    """Missing cost entry or unknown city"""


class BudgetError(OsomaError, ValueError):
    """Exhaustive enumeration requested beyond its ceiling"""


class ConsistencyError(OsomaError, ValueError):
    """Population state contradicts the cost matrix"""


class ScheduleValidationError(OsomaError, ValueError):
    """Event schedule inconsistent with its instance"""


class SchemaError(OsomaError, ValueError):
    """Malformed file content or event payload"""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class ExperimentRuntimeError(OsomaError, RuntimeError):
    """One or more runs inside an experiment failed"""


# Errors the CLI reports as validation failures (exit code 2)
VALIDATION_ERRORS = (
    ConfigurationError,
    DimensionError,
    UnknownFunctionError,
    SchemaError,
    ScheduleValidationError,
    InstanceError,
    InstanceMismatchError,
)
