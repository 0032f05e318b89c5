"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class GridMismatchError(ValueError):
    """Two objects were sampled on different lattices."""


class PartitionError(ValueError):
    """A family of localization operators does not form a partition of unity."""


class ConfigError(ValueError):
    """A run configuration failed schema validation."""
