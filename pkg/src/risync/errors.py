"""Error types used across the package.

The CLI maps these onto exit codes: configuration problems exit with 2,
numeric failures with 3, and a failed validation run with 1.
"""


class RisyncError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(RisyncError):
    """Bad configuration: unknown keys, out-of-range values, malformed files."""


class ParameterError(RisyncError, ValueError):
    """A function argument is outside its mathematical domain."""


class DimensionError(RisyncError, ValueError):
    """Array arguments have inconsistent or unsupported shapes."""


class ConstraintError(RisyncError, ValueError):
    """A unit-modulus (or similar) constraint is violated beyond tolerance."""


class NumericError(RisyncError, ArithmeticError):
    """Numeric consistency check failed (non-finite values, complex residue)."""
