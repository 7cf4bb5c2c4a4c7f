"""Exception types shared across the package."""


class PreconditionError(Exception):
    """An operation was called on inputs outside its contract."""


class ResourceLimitError(Exception):
    """The computation would exceed the configured evaluation budget."""

    def __init__(self, message, size=None):
        super().__init__(message)
        self.size = size
