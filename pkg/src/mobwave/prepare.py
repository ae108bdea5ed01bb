"""Series preparation: zero-mean calibration, trend isolation, common-range scaling."""
from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass, field
from typing import IO, Mapping

import numpy as np

from .config import DEFAULT_STL
from .errors import CalibrationError, DataQualityError, DegenerateScaleError, ValidationError
from .ingest import ANALYSIS_CATEGORIES, MobilitySeries, PlaceCategory, common_dates, fill_gaps
from .stl import StlParams, StlResult, stl_decompose

MIN_CALIBRATION_DAYS = 7


@dataclass(frozen=True)
class Provenance:
    calibration_offset: float
    scale_min: float
    scale_max: float
    stl_params: StlParams | None = None


@dataclass(eq=False)
class PreparedSeries:
    """Min-max scaled trend of one category; 0 is the lowest level observed."""

    locality_id: str
    category: PlaceCategory
    dates: np.ndarray
    values: np.ndarray
    provenance: Provenance

    def __post_init__(self):
        self.dates = np.asarray(self.dates, dtype="datetime64[D]")
        self.values = np.asarray(self.values, dtype=float)
        if len(self.dates) != len(self.values):
            raise ValueError("dates and values must have equal length")

    def calibrated_trend(self) -> np.ndarray:
        """Undo the scaling, returning the calibrated trend."""
        p = self.provenance
        return self.values * (p.scale_max - p.scale_min) + p.scale_min


def _check_gap_free(series: MobilitySeries):
    if not np.all(np.isfinite(series.values)):
        raise DataQualityError(f"{series.locality_id}/{series.category.name}: series has missing values")
    if len(series) > 1 and not series.is_contiguous:
        raise DataQualityError(f"{series.locality_id}/{series.category.name}: dates are not consecutive")


def calibrate_zero_mean(series: MobilitySeries, wave1_restriction_date: dt.date) -> MobilitySeries:
    """Shift ``series`` so that its values before the first restriction date average zero.

    Raises
    ------
    CalibrationError
        Fewer than seven present values precede ``wave1_restriction_date``.
    """
    before = (series.dates < np.datetime64(wave1_restriction_date, "D")) & np.isfinite(series.values)
    if before.sum() < MIN_CALIBRATION_DAYS:
        raise CalibrationError(
            f"{series.locality_id}/{series.category.name}: {int(before.sum())} days before "
            f"{wave1_restriction_date}, need {MIN_CALIBRATION_DAYS}"
        )
    offset = float(series.values[before].mean())
    return series.replace(
        values=series.values - offset,
        calibration_offset=series.calibration_offset + offset,
    )


def isolate_trend(series: MobilitySeries, params: StlParams = DEFAULT_STL) -> np.ndarray:
    """STL trend of a calibrated, gap-free series."""
    return decompose_series(series, params).trend


def decompose_series(series: MobilitySeries, params: StlParams = DEFAULT_STL) -> StlResult:
    _check_gap_free(series)
    return stl_decompose(series.values, params)


def _minmax(values: np.ndarray, label: str):
    lo, hi = float(values.min()), float(values.max())
    if not hi > lo:
        raise DegenerateScaleError(f"{label}: flat trend (min == max == {lo}) cannot be scaled")
    return lo, hi


def scale_common_range(
    trends: Mapping[PlaceCategory, np.ndarray],
    dates,
    locality_id: str,
    offsets: Mapping[PlaceCategory, float] | None = None,
    stl_params: StlParams | None = None,
) -> dict[PlaceCategory, PreparedSeries]:
    """Min-max scale each category's trend onto [0, 1].

    Each category uses its own minimum and maximum over the whole series, so
    all five categories span the same range within the locality.

    Raises
    ------
    ValidationError
        Categories other than the five analysed ones, or unequal lengths.
    DegenerateScaleError
        A flat category trend.
    """
    if set(trends) != set(ANALYSIS_CATEGORIES):
        raise ValidationError(
            f"{locality_id}: expected exactly the categories "
            f"{[c.name for c in ANALYSIS_CATEGORIES]}, got {[c.name for c in trends]}"
        )
    dates = np.asarray(dates, dtype="datetime64[D]")
    offsets = offsets or {}
    out = {}
    for cat in ANALYSIS_CATEGORIES:
        values = np.asarray(trends[cat], dtype=float)
        if len(values) != len(dates):
            raise ValidationError(f"{locality_id}/{cat.name}: trend length does not match dates")
        lo, hi = _minmax(values, f"{locality_id}/{cat.name}")
        scaled = (values - lo) / (hi - lo)
        prov = Provenance(float(offsets.get(cat, 0.0)), lo, hi, stl_params)
        out[cat] = PreparedSeries(locality_id, cat, dates, scaled, prov)
    return out


@dataclass
class PreparedLocality:
    """Everything computed for one locality; ``prepared`` feeds the aggregation."""

    locality_id: str
    dates: np.ndarray
    raw: dict = field(default_factory=dict)
    calibrated: dict = field(default_factory=dict)
    decompositions: dict = field(default_factory=dict)
    prepared: dict = field(default_factory=dict)


def prepare_locality(
    groups: Mapping[PlaceCategory, MobilitySeries],
    wave1_restriction_date: dt.date,
    params: StlParams = DEFAULT_STL,
) -> PreparedLocality:
    """Gap-fill, calibrate, decompose and scale the five analysed categories.

    Residential is ignored.  After gap filling the categories are trimmed to
    their common date range so that they share one axis.
    """
    missing = [c.name for c in ANALYSIS_CATEGORIES if c not in groups]
    if missing:
        raise ValidationError(f"missing categories {missing}")
    filled = {cat: fill_gaps(groups[cat]) for cat in ANALYSIS_CATEGORIES}
    locality_id = filled[ANALYSIS_CATEGORIES[0]].locality_id
    dates = common_dates(filled.values())
    if len(dates) == 0:
        raise DataQualityError(f"{locality_id}: categories share no dates")

    result = PreparedLocality(locality_id, dates)
    trends = {}
    for cat, s in filled.items():
        keep = np.isin(s.dates, dates)
        s = s.replace(dates=s.dates[keep], values=s.values[keep], filled=s.filled[keep])
        cal = calibrate_zero_mean(s, wave1_restriction_date)
        dec = decompose_series(cal, params)
        result.raw[cat] = s
        result.calibrated[cat] = cal
        result.decompositions[cat] = dec
        trends[cat] = dec.trend
    offsets = {cat: result.calibrated[cat].calibration_offset for cat in ANALYSIS_CATEGORIES}
    result.prepared = scale_common_range(trends, dates, locality_id, offsets, params)
    return result


DIAGNOSTIC_COLUMNS = ("date", "category", "raw", "calibrated", "trend", "seasonal", "remainder", "scaled")


def write_diagnostics(loc: PreparedLocality, dest: IO[str]) -> None:
    """One row per (date, category) with every intermediate value."""
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(DIAGNOSTIC_COLUMNS)
    for cat in ANALYSIS_CATEGORIES:
        dec = loc.decompositions[cat]
        raw = loc.raw[cat].values
        cal = loc.calibrated[cat].values
        scaled = loc.prepared[cat].values
        for i, date in enumerate(loc.dates):
            writer.writerow([
                str(date), cat.value,
                repr(float(raw[i])), repr(float(cal[i])),
                repr(float(dec.trend[i])), repr(float(dec.seasonal[i])),
                repr(float(dec.remainder[i])), repr(float(scaled[i])),
            ])
