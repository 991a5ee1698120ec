"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the region where a construction exists."""


class NoSolutionError(DomainError):
    """A requested basis or parameter set has no solution."""


class InapplicableError(ValueError):
    """The requested analysis does not apply to the given configuration."""


class ConstructionError(RuntimeError):
    """A built object failed its own internal consistency check."""
