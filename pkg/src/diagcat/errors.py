"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Vector or matrix dimensions do not match."""


class ArityError(ValueError):
    """Upper/lower point counts (or input/output tuples) do not match."""


class RotationError(ValueError):
    """Rotation requested on an empty row."""


class GuardError(RuntimeError):
    """A configured size guard (memory cap, edge cap, iteration cap) was exceeded."""


class LoopCreatedError(RuntimeError):
    """A quotient reduction would create or encountered a loop; reported, not rewritten."""


class SchemaError(ValueError):
    """A JSON document does not match the expected schema."""
