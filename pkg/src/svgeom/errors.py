"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """Raised when inputs violate a documented precondition."""


class ResourceError(RuntimeError):
    """Raised when a computation would exceed a configured size guard."""
