"""Exception types raised across the package."""


class IrepError(ValueError):
    """Base class for all package errors."""


class InvalidOrderError(IrepError):
    pass


class CapacityError(IrepError):
    pass


class DimensionError(IrepError):
    pass


class EmptyInputError(IrepError):
    pass


class ConfigError(IrepError):
    pass
