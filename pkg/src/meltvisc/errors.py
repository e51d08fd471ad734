"""Exception types shared across the toolkit.

Every error derives from :class:`MeltviscError` (itself a ``ValueError``) so
callers can catch a single base class at API boundaries; the CLI maps any
``MeltviscError`` to a nonzero exit status with a located message.
"""


class MeltviscError(ValueError):
    """Base class for all toolkit-specific errors."""


# --- chemistry ---------------------------------------------------------


class UnknownSpeciesError(MeltviscError):
    """A species name is not part of the canonical species set."""


class ZeroCompositionError(MeltviscError):
    """All mass amounts are zero where a non-empty composition is required."""


class ZeroDenominatorError(MeltviscError):
    """NBO/T is undefined: the composition contains no network formers."""


# --- pipeline ----------------------------------------------------------


class EmptyInputError(MeltviscError):
    """An operation that needs at least one value received none."""


class NonPositiveViscosityError(MeltviscError):
    """A raw viscosity is zero or negative and cannot be log-transformed."""


class ConstantFeatureError(MeltviscError):
    """A predictor column has zero variance and cannot be standardized."""


class TooSmallError(MeltviscError):
    """The dataset has too few rows for the requested operation."""


# --- network -----------------------------------------------------------


class InvalidCardinalityError(MeltviscError):
    """Input or output cardinality below 1."""


class ShapeMismatchError(MeltviscError):
    """Array shapes are inconsistent with the model or with each other."""


class EmptySetError(MeltviscError):
    """Training or validation set is empty."""


# --- sensitivity -------------------------------------------------------


class DegenerateModelError(MeltviscError):
    """All connection-weight products are zero; importance is undefined."""


# --- metrics -----------------------------------------------------------


class LengthMismatchError(MeltviscError):
    """Paired vectors differ in length."""


class TooFewError(MeltviscError):
    """Not enough observations for the requested statistic."""


class ConstantTargetError(MeltviscError):
    """The target vector is constant; R^2 is undefined."""


class ZeroVarianceError(MeltviscError):
    """Residuals have zero variance; shape statistics are undefined."""


class MisalignedPredictionsError(MeltviscError):
    """A prediction set does not line up with the labeled test set."""


# --- baselines ---------------------------------------------------------


class SingularityError(MeltviscError):
    """Temperature at or below the VFT divergence temperature."""


class NonPositiveTemperatureError(MeltviscError):
    """Temperature must be strictly positive."""


class InvalidSuspensionError(MeltviscError):
    """Suspension parameters give a non-positive base, (1 - a*c) <= 0."""


# --- io / cli ----------------------------------------------------------


class SchemaError(MeltviscError):
    """A CSV header or cell violates the dataset schema.

    Always cites a location: ``row`` is 1-based (row 1 is the header) and
    ``column`` is the column name, or ``""`` for row-level problems.
    """

    def __init__(self, row: int, column: str, reason: str):
        self.row = row
        self.column = column
        self.reason = reason
        where = f"row {row}" + (f", column {column!r}" if column else "")
        super().__init__(f"{where}: {reason}")


class VersionMismatchError(MeltviscError):
    """A persisted file declares a format version this build cannot read."""


class CorruptFileError(MeltviscError):
    """A persisted file is truncated, malformed, or internally inconsistent."""
