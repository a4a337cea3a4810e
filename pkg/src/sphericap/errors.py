"""Exception types shared across the package."""


class SphericapError(Exception):
    """Base class for all errors raised by this package."""


class NonUnitQuaternionError(SphericapError):
    """Quaternion norm deviates from 1 beyond the admissible tolerance."""


class NonFiniteError(SphericapError):
    """A numeric field is NaN or infinite."""


class NonMonotonicTimestampError(SphericapError):
    """Sample timestamp does not strictly increase within a stream."""


class MalformedLineError(SphericapError):
    """A log line could not be parsed.

    Attributes:
        line_no: 1-based line number of the offending line.
    """

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class MalformedRowError(SphericapError):
    """An orientation CSV row could not be parsed."""

    def __init__(self, row_no: int, message: str):
        super().__init__(f"row {row_no}: {message}")
        self.row_no = row_no


class DuplicateImageIdError(SphericapError):
    """An orientation CSV contains the same image_id twice."""


class MalformedBandsError(SphericapError):
    """Longitude bands overlap or leave gaps instead of partitioning the circle."""


class ConfigError(SphericapError):
    """Invalid configuration value."""
