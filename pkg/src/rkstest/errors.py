"""Exception types shared across the package.

All data-level failures derive from RksError so callers (and the CLI,
which maps them to exit code 2) can catch one base class.
"""


class RksError(Exception):
    """Base class for all data-level errors raised by this package."""


class DimensionMismatch(RksError):
    """Inputs disagree on the feature dimension d."""


class DegenerateScale(RksError):
    """All pooled points coincide; the standardization scale is ~0."""


class DataFormatError(RksError):
    """A CSV file could not be parsed; message includes the line number."""


class ZeroDiscrepancy(RksError):
    """Empirical discrepancy is exactly 0; the log objective is undefined."""


class UnsupportedDegree(RksError):
    """Operation not defined for this spline degree (k = 0 gradients)."""


class ZeroSeminorm(RksError):
    """Network has path seminorm 0 and cannot be normalized."""


class TooLarge(RksError):
    """Instance exceeds the size limit of an exact oracle."""


class TooFewSamples(RksError):
    """Estimator needs more observations per sample."""


class UnknownSetting(RksError):
    """No closed-form density is available for this setting."""


class InvalidSpec(RksError):
    """Setting specification fails validation."""


class EmptyGrid(RksError):
    """Grid of (direction, offset) evaluation points is empty."""


class NotPSD(RksError):
    """Covariance stayed non-positive-definite after maximum jitter."""


class EmptyInput(RksError):
    """An operation received an empty value list."""
