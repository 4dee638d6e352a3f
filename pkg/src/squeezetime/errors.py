"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """Raised when an input violates an operation's preconditions."""


class ResourceLimitError(RuntimeError):
    """Raised when a brute-force computation would exceed the supported size."""


class SearchWindowExhausted(RuntimeError):
    """No interior local maximum was found inside the time search window.

    ``boundary`` holds ``(t_first, f_first, t_last, f_last)`` of the scanned grid.
    """

    def __init__(self, message, boundary=None):
        super().__init__(message)
        self.boundary = boundary
