"""Exception types shared across the package."""


class SirMcmcError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(SirMcmcError, ValueError):
    """An argument violates a documented precondition."""


class ResourceError(SirMcmcError):
    """A computation would exceed a configured size limit."""


class NumericalError(SirMcmcError, ArithmeticError):
    """The integrator produced a state it cannot recover from."""


class ConfigError(SirMcmcError, ValueError):
    """A run or sampler configuration is inconsistent."""
