"""Exception types shared across the package."""


class DataError(ValueError):
    """Invalid or unusable input data (bad counts, malformed tables)."""


class NonexistenceError(ValueError):
    """The requested quantity is mathematically undefined for this input,
    e.g. a sceptical prior for a non-significant finding."""
