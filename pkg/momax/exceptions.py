"""Exceptions raised by momax."""


class MomaxError(Exception):
    """Base class for all momax errors."""


class InputError(MomaxError, ValueError):
    """An argument is outside the domain of an operation."""


class BudgetTooSmallError(InputError):
    """The budget left after pre-processing is empty."""


class SizeError(MomaxError):
    """An exhaustive enumeration would be too large."""


class SolverError(MomaxError):
    """The LP backend failed to produce an optimal solution."""


class ConfigError(MomaxError):
    """Invalid solver or experiment configuration."""


class InstanceError(MomaxError):
    """Instance data is malformed or unsupported."""


class TimeLimitExceeded(MomaxError):
    """A run passed its deadline."""
