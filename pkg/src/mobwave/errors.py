"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`MobwaveError`, which itself is a ``ValueError`` so callers that only
care about bad input can catch the builtin.
"""


class MobwaveError(ValueError):
    """Base class for all data and validation errors."""


class SchemaError(MobwaveError):
    """CSV header is missing a required column."""

    def __init__(self, column: str):
        super().__init__(f"missing required column {column!r}")
        self.column = column


class RowError(MobwaveError):
    """A data row could not be parsed."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SelectionError(MobwaveError):
    """No rows matched a configured locality."""


class DataQualityError(MobwaveError):
    """Series is unusable for analysis (e.g. a gap that is too long)."""


class ValidationError(MobwaveError):
    """Input or parameter fails a documented constraint."""


class ConfigError(ValidationError):
    """Study configuration or parameter validation failed."""


class DegenerateFitError(MobwaveError):
    """Local regression has too few positively weighted points."""


class SeriesLengthError(MobwaveError):
    """Series is too short for the requested decomposition."""


class CalibrationError(MobwaveError):
    """Not enough data before the first restriction date."""


class DegenerateScaleError(MobwaveError):
    """Min-max scaling of a flat series."""


class SlicingError(MobwaveError):
    """Prepared data does not cover the requested wave slice."""


class ComparisonError(MobwaveError):
    """AUC vectors cannot be compared (category mismatch)."""


class RenderRangeError(MobwaveError):
    """Value lies outside the chart's axis range."""
