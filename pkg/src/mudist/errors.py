class MudistError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(MudistError, ValueError):
    """An argument violates a documented shape or range contract."""


class ConfigurationError(MudistError, ValueError):
    """An indicator, optimizer or experiment configuration is incomplete or inconsistent."""
