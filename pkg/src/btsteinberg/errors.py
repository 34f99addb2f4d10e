class InvalidInput(ValueError):
    """Arguments outside an operation's domain."""


class ConsistencyError(RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""


class MarginError(ValueError):
    """A finite window (ball radius, flag level) is too small for the request."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class ResourceLimitError(RuntimeError):
    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound
