"""Exception hierarchy shared by all modules."""


class QInfoError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(QInfoError, ValueError):
    """Operand shapes or declared subsystem dimensions are inconsistent."""


class NotHermitianError(QInfoError, ValueError):
    """Matrix is farther from Hermitian than the allowed tolerance."""


class InvalidStateError(QInfoError, ValueError):
    """Matrix or vector fails density-matrix / pure-state validation."""


class TracePreservationError(QInfoError, ValueError):
    """Kraus operators or PSM branches do not resolve the identity."""


class CompletenessError(QInfoError, ValueError):
    """POVM effects do not sum to the identity."""


class NegativeMassError(QInfoError, ValueError):
    """A joint distribution contains a cell with clearly negative mass."""


class ParameterRangeError(QInfoError, ValueError):
    """A scalar parameter lies outside its admissible range."""


class SchemaError(QInfoError, ValueError):
    """A JSON input file does not conform to its schema."""


class NormalizationError(QInfoError, ValueError):
    """A probability distribution does not sum to one."""
