"""Exception types shared across the package."""


class GroupPdoError(Exception):
    """Base class for all library errors."""


class PrecisionError(GroupPdoError):
    """A requested computation cannot be performed exactly.

    Raised when a spectral band exceeds the exactness band of a quadrature
    grid, when input data is found to be aliased, or when a difference
    operation has exhausted the available band margin.  The message names
    the violated constraint.
    """


class BandExhaustedError(PrecisionError):
    """A difference operation shrank the trusted band below the trivial rep."""


class SingularSymbolError(GroupPdoError):
    """A symbol builder hit a resonance and the symbol does not exist."""
