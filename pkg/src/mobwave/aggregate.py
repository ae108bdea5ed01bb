"""Wave slicing, AUC aggregation and Pareto dominance between waves.

Lower scaled mobility means stronger reduction, so an AUC vector *dominates*
another when it is no larger in any category and strictly smaller in at
least one.  On a radar chart this is polygon containment.
"""
from __future__ import annotations

import datetime as dt
import enum
import json
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .config import EPSILON, PERIOD_LENGTH_DAYS, WINDOW_LENGTH_DAYS, LocalityConfig, StudyConfig
from .errors import ComparisonError, SlicingError, ValidationError
from .ingest import ANALYSIS_CATEGORIES, PlaceCategory
from .prepare import PreparedSeries


@dataclass(eq=False)
class WaveSlice:
    """Contiguous excerpt of prepared data starting at a restriction date.

    ``window_index`` is 0 for a whole wave period and 1.. for its windows.
    """

    locality_id: str
    wave: int
    window_index: int
    start_date: dt.date
    length_days: int
    values: dict

    def __post_init__(self):
        for cat, v in self.values.items():
            if len(v) != self.length_days:
                raise ValidationError(f"{cat.name}: expected {self.length_days} values, got {len(v)}")

    @property
    def categories(self) -> tuple:
        return tuple(self.values)


def slice_wave(
    prepared: Mapping[PlaceCategory, PreparedSeries],
    restriction_date: dt.date,
    length_days: int = PERIOD_LENGTH_DAYS,
    wave: int = 1,
) -> WaveSlice:
    """Take ``length_days`` daily values starting on ``restriction_date``.

    Raises
    ------
    SlicingError
        The prepared data does not cover the whole requested range.
    """
    if length_days <= 0:
        raise ValidationError(f"slice length must be positive, got {length_days}")
    if not prepared:
        raise ValidationError("no prepared series to slice")
    start = np.datetime64(restriction_date, "D")
    stop = start + np.timedelta64(length_days, "D")
    values = {}
    locality_id = None
    for cat, series in prepared.items():
        locality_id = series.locality_id
        mask = (series.dates >= start) & (series.dates < stop)
        if mask.sum() != length_days:
            have = series.dates[mask]
            raise SlicingError(
                f"{series.locality_id}/{cat.name}: need {start} .. {stop - 1} "
                f"({length_days} days), data covers {len(have)} of them"
                + (f" ({have[0]} .. {have[-1]})" if len(have) else "")
            )
        values[cat] = series.values[mask].copy()
    return WaveSlice(locality_id, wave, 0, restriction_date, length_days, values)


def split_windows(wave_slice: WaveSlice, window_len: int = WINDOW_LENGTH_DAYS) -> list[WaveSlice]:
    """Partition a slice into consecutive non-overlapping windows."""
    if window_len <= 0 or wave_slice.length_days % window_len:
        raise ValidationError(
            f"slice length {wave_slice.length_days} is not divisible by window length {window_len}"
        )
    out = []
    for k in range(wave_slice.length_days // window_len):
        lo, hi = k * window_len, (k + 1) * window_len
        out.append(
            WaveSlice(
                wave_slice.locality_id,
                wave_slice.wave,
                k + 1,
                wave_slice.start_date + dt.timedelta(days=lo),
                window_len,
                {cat: v[lo:hi].copy() for cat, v in wave_slice.values.items()},
            )
        )
    return out


@dataclass(frozen=True)
class AucVector:
    """Per-category area under the scaled curve for one slice."""

    values: Mapping
    locality_id: str = ""
    wave: int = 0
    window_index: int = 0
    start_date: dt.date | None = None
    length_days: int = 0

    def __getitem__(self, cat: PlaceCategory) -> float:
        return self.values[cat]

    @property
    def categories(self) -> tuple:
        return tuple(self.values)

    def as_array(self, categories: Sequence[PlaceCategory] = ANALYSIS_CATEGORIES) -> np.ndarray:
        return np.array([self.values[c] for c in categories], dtype=float)


def auc(wave_slice: WaveSlice) -> AucVector:
    """Unit-width rectangle rule: the sum of daily scaled values."""
    sums = {}
    for cat, v in wave_slice.values.items():
        if np.any(v < 0) or np.any(v > 1):
            raise ValidationError(f"{cat.name}: slice values must lie in [0, 1]")
        sums[cat] = float(np.sum(v))
    return AucVector(
        sums,
        wave_slice.locality_id,
        wave_slice.wave,
        wave_slice.window_index,
        wave_slice.start_date,
        wave_slice.length_days,
    )


class DominanceRelation(enum.Enum):
    DOMINATES = "Dominates"
    DOMINATED_BY = "DominatedBy"
    INCOMPARABLE = "Incomparable"
    EQUAL = "Equal"

    def flipped(self) -> "DominanceRelation":
        if self is DominanceRelation.DOMINATES:
            return DominanceRelation.DOMINATED_BY
        if self is DominanceRelation.DOMINATED_BY:
            return DominanceRelation.DOMINATES
        return self


def _aligned(a, b):
    if isinstance(a, AucVector) and isinstance(b, AucVector):
        if set(a.categories) != set(b.categories):
            raise ComparisonError(
                f"category sets differ: {sorted(c.name for c in a.categories)} vs "
                f"{sorted(c.name for c in b.categories)}"
            )
        if (a.window_index, a.length_days) != (b.window_index, b.length_days):
            raise ComparisonError("AUC vectors come from different window layouts")
        cats = [c for c in ANALYSIS_CATEGORIES if c in a.values] + [
            c for c in a.categories if c not in ANALYSIS_CATEGORIES
        ]
        return a.as_array(cats), b.as_array(cats)
    if isinstance(a, AucVector) or isinstance(b, AucVector):
        raise ComparisonError("cannot compare an AucVector with a bare array")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ComparisonError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def dominance(a, b, epsilon: float = EPSILON) -> DominanceRelation:
    """Classify ``a`` against ``b`` (minimisation, tolerance ``epsilon``).

    ``a`` and ``b`` are :class:`AucVector` instances with the same categories
    or plain equal-length vectors.
    """
    if epsilon < 0:
        raise ValidationError("epsilon must be non-negative")
    a, b = _aligned(a, b)
    if np.all(np.abs(a - b) <= epsilon):
        return DominanceRelation.EQUAL
    if np.all(a <= b + epsilon):
        return DominanceRelation.DOMINATES
    if np.all(b <= a + epsilon):
        return DominanceRelation.DOMINATED_BY
    return DominanceRelation.INCOMPARABLE


@dataclass(frozen=True)
class Comparison:
    window_index: int
    wave1: AucVector
    wave2: AucVector
    relation: DominanceRelation

    @property
    def length_days(self) -> int:
        return self.wave1.length_days

    @property
    def start_day(self) -> int:
        """Days between the restriction date and the first day of the window."""
        if self.window_index == 0:
            return 0
        return (self.window_index - 1) * self.length_days

    @property
    def label(self) -> str:
        return "whole-period" if self.window_index == 0 else f"window {self.window_index}"


@dataclass(frozen=True)
class ComparisonReport:
    locality_id: str
    comparisons: tuple

    @property
    def whole(self) -> Comparison:
        return self.comparisons[0]

    @property
    def windows(self) -> tuple:
        return self.comparisons[1:]


def compare_waves(
    prepared: Mapping[PlaceCategory, PreparedSeries],
    locality: LocalityConfig,
    config: StudyConfig | None = None,
) -> ComparisonReport:
    """Whole-period comparison of wave 1 against wave 2, then one per window."""
    period = config.period_length_days if config else PERIOD_LENGTH_DAYS
    window = config.window_length_days if config else WINDOW_LENGTH_DAYS
    epsilon = config.epsilon if config else EPSILON

    slices = {
        w: slice_wave(prepared, locality.restriction_date(w), period, wave=w) for w in (1, 2)
    }
    windows = {w: split_windows(slices[w], window) for w in (1, 2)}
    comparisons = []
    pairs = [(slices[1], slices[2])] + list(zip(windows[1], windows[2]))
    for s1, s2 in pairs:
        a1, a2 = auc(s1), auc(s2)
        comparisons.append(Comparison(s1.window_index, a1, a2, dominance(a1, a2, epsilon)))
    return ComparisonReport(locality.locality_id, tuple(comparisons))


# --- structured report format (JSON Lines, one record per comparison) ---


def _auc_record(v: AucVector) -> dict:
    return {
        "start_date": v.start_date.isoformat(),
        "auc": {c.value: v.values[c] for c in ANALYSIS_CATEGORIES if c in v.values},
    }


def report_records(report: ComparisonReport) -> list[dict]:
    return [
        {
            "locality_id": report.locality_id,
            "window": c.window_index,
            "label": c.label,
            "start_day": c.start_day,
            "length_days": c.length_days,
            "wave1": _auc_record(c.wave1),
            "wave2": _auc_record(c.wave2),
            "relation": c.relation.value,
        }
        for c in report.comparisons
    ]


def write_report(report: ComparisonReport, dest: IO[str]) -> None:
    for rec in report_records(report):
        dest.write(json.dumps(rec, ensure_ascii=False) + "\n")


def _auc_from_record(rec: dict, wave: int, outer: dict) -> AucVector:
    values = {PlaceCategory(k): float(v) for k, v in rec["auc"].items()}
    return AucVector(
        values,
        outer["locality_id"],
        wave,
        outer["window"],
        dt.date.fromisoformat(rec["start_date"]),
        outer["length_days"],
    )


def read_reports(lines: Iterable[str]) -> list[ComparisonReport]:
    """Parse JSON Lines written by :func:`write_report` (several localities allowed)."""
    grouped: dict[str, list] = {}
    for line in lines:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        comp = Comparison(
            rec["window"],
            _auc_from_record(rec["wave1"], 1, rec),
            _auc_from_record(rec["wave2"], 2, rec),
            DominanceRelation(rec["relation"]),
        )
        grouped.setdefault(rec["locality_id"], []).append(comp)
    return [
        ComparisonReport(loc, tuple(sorted(comps, key=lambda c: c.window_index)))
        for loc, comps in grouped.items()
    ]
