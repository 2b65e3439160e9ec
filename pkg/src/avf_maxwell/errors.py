"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid grid, solver or run configuration."""


class DimensionError(ValueError):
    """Fields or states that live on incompatible grids."""


class ConsistencyError(RuntimeError):
    """An internal numerical invariant was violated (e.g. a spectral result
    that should be real carries a large imaginary part)."""


class UnsupportedOrderError(ValueError):
    """Requested derivative or scheme order is not implemented."""
