"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a structural invariant (Hermiticity, trace, dims, ...)."""


class ResourceLimitError(RuntimeError):
    """A requested computation exceeds the supported problem size."""
