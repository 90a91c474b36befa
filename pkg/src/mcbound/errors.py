"""Exception hierarchy.

Every error raised deliberately by the package derives from :class:`McbError`,
and most also derive from the closest builtin so callers can keep catching
``ValueError`` / ``IndexError``.
"""


class McbError(Exception):
    """Base class for package errors."""


class DimensionError(McbError, ValueError):
    """Shape or dimension mismatch."""


class PartyCountError(DimensionError):
    """A routine was applied to a state with the wrong number of parties."""


class SizeError(McbError, ValueError):
    """Dimension product or rank beyond the configured cap."""


class DomainError(McbError, ValueError):
    """A scalar parameter lies outside its admissible range."""


class ConfigError(McbError, ValueError):
    """Invalid option, weight vector or evaluator name."""


class PartitionError(McbError, ValueError):
    """Invalid grouping of parties into blocks."""


class PartyIndexError(McbError, IndexError):
    """Party or basis index out of range."""


class HermiticityError(McbError, ValueError):
    """Matrix is not Hermitian within tolerance."""

    def __init__(self, deviation, tol):
        super().__init__(f"matrix is not Hermitian: max |h - h^dag| = {deviation:.3e} > {tol:.1e}")
        self.deviation = deviation


class PSDViolation(McbError, ValueError):
    """Matrix has an eigenvalue below the negative tolerance."""

    def __init__(self, eigenvalue, threshold):
        super().__init__(f"matrix is not PSD: eigenvalue {eigenvalue:.3e} < {threshold:.3e}")
        self.eigenvalue = eigenvalue


class NumericError(McbError, ArithmeticError):
    """Numerical inconsistency (non-convergence, negative radicand, ...)."""


class StateLoadError(McbError, ValueError):
    """Malformed state file. ``where`` names the offending position."""

    def __init__(self, message, where=None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
