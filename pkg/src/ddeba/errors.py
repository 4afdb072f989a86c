"""Exception hierarchy shared by the library and the CLI."""


class DDEbAError(Exception):
    """Base class for all errors raised by ddeba."""


class ValidationError(DDEbAError, ValueError):
    """Input data or configuration does not satisfy its contract."""


class EstimationError(DDEbAError):
    """A well-formed input could not be estimated."""


class UndefinedDistanceError(EstimationError):
    """Two records share no non-missing feature."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


class DegenerateRangeError(EstimationError):
    """An interval feature has zero range but two different values."""

    def __init__(self, message: str, feature: str | None = None):
        super().__init__(message)
        self.feature = feature


class EmptyRankingError(EstimationError):
    """No candidate neighbours remain after exclusions."""


class EmptySampleError(EstimationError):
    """A distance distribution has no finite samples."""
