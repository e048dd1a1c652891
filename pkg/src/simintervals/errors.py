"""Exception hierarchy; the CLI maps each class to an exit code."""


class SimIntervalsError(Exception):
    """Base class for all package errors."""


class ConfigError(SimIntervalsError, ValueError):
    """Invalid parameters or run configuration."""


class DataError(SimIntervalsError, ValueError):
    """Input data violates a precondition (missing column, bad grid, too short)."""


class NumericalError(SimIntervalsError, ArithmeticError):
    """A numerical routine could not produce a finite answer."""
