"""Exception types shared across the package."""


class VerificationError(Exception):
    """Base class for all pcskill validation and computation errors."""


class LengthMismatchError(VerificationError):
    """Paired vectors have unequal lengths."""


class NonFiniteValueError(VerificationError):
    """An input contains NaN or +/-inf where finite values are required.

    ``index`` locates the first offending entry when known.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class NotSortedError(VerificationError):
    """Jump locations are not strictly increasing."""


class NotMonotoneCdfError(VerificationError):
    """CDF values are decreasing somewhere, or the leading value is not positive."""


class LastNotOneError(VerificationError):
    """The final CDF value differs from 1 beyond tolerance."""


class EmptyEnsembleError(VerificationError):
    """An ensemble with zero members was supplied."""


class NonPositiveWeightError(VerificationError):
    """A regression weight is zero or negative."""


class AlphaOutOfRangeError(VerificationError):
    """A probability level lies outside the open interval (0, 1)."""


class SampleMismatchError(VerificationError):
    """A sample does not match the fit it is evaluated against."""


class LatitudeOutOfRangeError(VerificationError):
    """A latitude lies outside [-90, 90] degrees."""


class CoordinateMismatchError(VerificationError):
    """Two gridded fields disagree in their coordinate vectors."""


class InsufficientDataError(VerificationError):
    """Fewer than two complete pairs remain after missing-data removal."""


class EmptySeriesError(VerificationError):
    """A score series of length zero was supplied."""


class ConvergenceFailureError(VerificationError):
    """A numerical inversion failed to produce a finite result."""


class AllOutcomesEqualError(VerificationError):
    """Every outcome is identical, so rank-based concordance is undefined."""


class ParseError(VerificationError):
    """An input file is malformed (as opposed to well-formed but invalid)."""


class SeriesParseError(ParseError):
    """A series CSV file could not be parsed.

    ``line`` is the 1-based line number of the offending row.
    """

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class GridParseError(ParseError):
    """A flat binary grid file is truncated or has a malformed header."""


class DegenerateClimatologyWarning(UserWarning):
    """All outcomes are equal, so the climatological score is zero."""


class DegenerateVarianceWarning(UserWarning):
    """An anomaly vector has zero variance, so correlation is undefined."""
