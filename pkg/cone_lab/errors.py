"""
Exception hierarchy for cone-lab.

Every failure the library raises on purpose derives from ConeLabError, so
the command-line layer can catch one type at its boundary and map it to an
exit code. Argument problems also derive from ValueError.
"""


class ConeLabError(Exception):
    """Base class for all cone-lab errors."""


class DimensionMismatchError(ConeLabError, ValueError):
    """Vectors of different ambient dimensions were combined, or n < 3."""


class NonUnitVectorError(ConeLabError, ValueError):
    """A point expected on the unit sphere is off it beyond TOL_UNIT."""


class DegenerateGeodesicError(ConeLabError, ValueError):
    """Coincident or antipodal endpoints: the geodesic is not unique."""


class NetStructureError(ConeLabError, ValueError):
    """A cone net is combinatorially or geometrically malformed."""


class EtaViolationError(ConeLabError, ValueError):
    """An eta0 or eta1 constraint of the standard decomposition fails."""


class NetValidationError(ConeLabError):
    """A net that must be minimal-looking failed validation."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class CertificateError(ConeLabError):
    """Sampling blocks of a certificate failed or were aborted."""


class PreconditionError(ConeLabError, ValueError):
    """A documented precondition of an operation does not hold."""


class ProfileError(ConeLabError, ValueError):
    """A sector profile or density profile violates its invariants."""


class CurveHypothesisError(ConeLabError, ValueError):
    """A spherical curve fails one of the straightening hypotheses."""


class GaugeError(ConeLabError, ValueError):
    """A gauge function is used outside its admissible range."""


class ConfigError(ConeLabError, ValueError):
    """Invalid run configuration or tolerance override."""
