"""Exception hierarchy shared by every lsat module.

All domain errors derive from :class:`LsatError` so callers (CLI, HTTP
service) can map the whole family to one failure path.
"""


class LsatError(Exception):
    """Base class for all toolkit errors."""


# tensor algebra
class AmplitudeTooLarge(LsatError):
    """Strain amplitude violates the weak-field bound |h| < 1."""


class SingularMetric(LsatError):
    """Metric determinant too close to zero to invert."""


class AsymmetricInput(LsatError):
    """A matrix that must be symmetric is not."""


# phase propagation
class BadPath(LsatError):
    """Phase path samples violate the path invariants."""


class BadProfile(LsatError):
    """Atmospheric profile samples violate the profile invariants."""


class NonPhysical(LsatError):
    """Meteorological inputs outside their physical domain."""


class NonFinite(LsatError):
    """An input that must be finite is NaN or infinite."""


# signature assembly
class EmptyInput(LsatError):
    """An operation that needs at least one element got none."""


class BadChannel(LsatError):
    """Sample channel index outside [0, T)."""


class DimensionMismatch(LsatError):
    """Array shapes or lengths do not line up."""


# segmentation
class EmptySeries(LsatError):
    """Time series holds no points."""


class WindowTooLarge(LsatError):
    """Not even one full window fits in the series."""


class DegenerateProfile(LsatError):
    """Segment profile has zero variance and cannot be correlated."""


class NoChords(LsatError):
    """Target segment participates in no chord."""


# spectral
class NonUniformSampling(LsatError):
    """Series sample spacing varies beyond tolerance."""


class TooShort(LsatError):
    """Series shorter than one analysis window."""


# inference
class EvidenceZero(LsatError):
    """Every prior-likelihood product is zero; posterior undefined."""


class AllZeroWeights(LsatError):
    """Prediction weights sum to zero."""


class SingularSystem(LsatError):
    """Normal equations are rank-deficient and unregularized."""


# storage
class SchemaError(LsatError):
    """CSV header does not match the required schema."""


class ParseError(LsatError):
    """A data row could not be parsed; message carries the line number."""


class DuplicateTimestamp(LsatError):
    """Two samples of one city share a timestamp."""


class VersionMismatch(LsatError):
    """Store file written with an unsupported format version."""


class CorruptRecord(LsatError):
    """A store record failed to decode; message carries the record index."""


class CityNotFound(LsatError):
    """Provider has no data for the requested city."""


class RangeEmpty(LsatError):
    """Requested time interval contains no samples."""
