"""Reading and writing Google Community Mobility Report (CMR) CSV files.

A CMR file has one row per (region, date).  Region identity is spread over
several columns (``country_region``, ``sub_region_1``, ``sub_region_2``,
``metro_area``) and the six ``*_percent_change_from_baseline`` columns hold
the mobility values.  :func:`parse_cmr_csv` turns such a file into one
:class:`MobilitySeries` per (locality, place category).
"""
from __future__ import annotations

import contextlib
import csv
import dataclasses
import datetime as dt
import enum
import io
import math
import os
from dataclasses import dataclass
from typing import IO, Iterable, Mapping

import numpy as np

from .errors import DataQualityError, RowError, SchemaError, SelectionError

MAX_GAP_DAYS = 7


class PlaceCategory(enum.Enum):
    """The six CMR place categories.

    The value is the CSV column prefix; ``abbrev`` is the short label used on
    charts.
    """

    GROCERY_PHARMACY = "grocery_and_pharmacy"
    PARKS = "parks"
    TRANSIT_STATIONS = "transit_stations"
    RETAIL_RECREATION = "retail_and_recreation"
    WORKPLACES = "workplaces"
    RESIDENTIAL = "residential"

    @property
    def column(self) -> str:
        return f"{self.value}_percent_change_from_baseline"

    @property
    def abbrev(self) -> str:
        return _ABBREV[self]

    @property
    def label(self) -> str:
        return _LABEL[self]


_ABBREV = {
    PlaceCategory.WORKPLACES: "W",
    PlaceCategory.GROCERY_PHARMACY: "G&P",
    PlaceCategory.PARKS: "P",
    PlaceCategory.RETAIL_RECREATION: "R&R",
    PlaceCategory.TRANSIT_STATIONS: "Ts",
    PlaceCategory.RESIDENTIAL: "Res",
}
_LABEL = {
    PlaceCategory.WORKPLACES: "Workplaces",
    PlaceCategory.GROCERY_PHARMACY: "Grocery & pharmacy",
    PlaceCategory.PARKS: "Parks",
    PlaceCategory.RETAIL_RECREATION: "Retail & recreation",
    PlaceCategory.TRANSIT_STATIONS: "Transit stations",
    PlaceCategory.RESIDENTIAL: "Residential",
}

#: Categories that enter the analysis, in chart axis order.
ANALYSIS_CATEGORIES = (
    PlaceCategory.WORKPLACES,
    PlaceCategory.GROCERY_PHARMACY,
    PlaceCategory.PARKS,
    PlaceCategory.RETAIL_RECREATION,
    PlaceCategory.TRANSIT_STATIONS,
)

REGION_COLUMNS = ("country_region_code", "country_region", "sub_region_1", "sub_region_2", "metro_area")
CMR_HEADER = (
    "country_region_code",
    "country_region",
    "sub_region_1",
    "sub_region_2",
    "metro_area",
    "iso_3166_2_code",
    "census_fips_code",
    "place_id",
    "date",
    "retail_and_recreation_percent_change_from_baseline",
    "grocery_and_pharmacy_percent_change_from_baseline",
    "parks_percent_change_from_baseline",
    "transit_stations_percent_change_from_baseline",
    "workplaces_percent_change_from_baseline",
    "residential_percent_change_from_baseline",
)
# metro_area and the code columns are absent from early CMR releases.
REQUIRED_COLUMNS = (
    "country_region_code",
    "country_region",
    "sub_region_1",
    "sub_region_2",
    "date",
) + tuple(c.column for c in PlaceCategory)


@dataclass(frozen=True)
class LocalitySelector:
    """Exact-match selector for one CMR region.

    ``region`` is compared with the most specific non-empty region column of
    each row (``metro_area``, else ``sub_region_2``, else ``sub_region_1``);
    an empty string selects the country-level rows.  ``country`` may be the
    country name or its two-letter code.  ``sub_region_1`` is only needed to
    disambiguate districts that share a name.
    """

    country: str
    region: str = ""
    sub_region_1: str | None = None

    def matches(self, row: Mapping[str, str]) -> bool:
        if self.country not in (row["country_region"], row["country_region_code"]):
            return False
        if self.sub_region_1 is not None and row["sub_region_1"] != self.sub_region_1:
            return False
        return _most_specific(row) == self.region


def _most_specific(row: Mapping[str, str]) -> str:
    for col in ("metro_area", "sub_region_2", "sub_region_1"):
        value = row.get(col) or ""
        if value:
            return value
    return ""


@dataclass(eq=False)
class MobilitySeries:
    """Daily percent-change-from-baseline values for one locality and category.

    ``values`` may contain NaN for missing cells until :func:`fill_gaps` has
    been applied.  ``filled`` flags values produced by interpolation.
    ``region`` keeps the raw CMR region columns so the series can be written
    back out; ``calibration_offset`` is the mean already subtracted from
    ``values`` (zero for raw data).
    """

    locality_id: str
    category: PlaceCategory
    dates: np.ndarray
    values: np.ndarray
    filled: np.ndarray = None
    region: tuple = ()
    calibration_offset: float = 0.0

    def __post_init__(self):
        self.dates = np.asarray(self.dates, dtype="datetime64[D]")
        self.values = np.asarray(self.values, dtype=float)
        if self.filled is None:
            self.filled = np.zeros(len(self.values), dtype=bool)
        self.filled = np.asarray(self.filled, dtype=bool)
        if not (len(self.dates) == len(self.values) == len(self.filled)):
            raise ValueError("dates, values and filled must have equal length")
        if len(self.dates) > 1 and np.any(np.diff(self.dates).astype(int) <= 0):
            raise ValueError("dates must be strictly increasing")

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MobilitySeries):
            return NotImplemented
        return (
            self.locality_id == other.locality_id
            and self.category == other.category
            and tuple(self.region) == tuple(other.region)
            and np.array_equal(self.dates, other.dates)
            and np.array_equal(self.values, other.values, equal_nan=True)
            and np.array_equal(self.filled, other.filled)
            and self.calibration_offset == other.calibration_offset
        )

    def replace(self, **changes) -> "MobilitySeries":
        return dataclasses.replace(self, **changes)

    @property
    def is_contiguous(self) -> bool:
        return bool(np.all(np.diff(self.dates).astype(int) == 1))


@contextlib.contextmanager
def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8-sig", newline="") as fh:
            yield fh
    elif isinstance(source, io.TextIOBase):
        yield source
    else:
        wrapper = io.TextIOWrapper(source, encoding="utf-8-sig", newline="")
        try:
            yield wrapper
        finally:
            # leave the caller's binary stream open
            wrapper.detach()


def _parse_value(text: str, line: int, column: str) -> float:
    text = text.strip()
    if not text:
        return math.nan
    try:
        value = float(text)
    except ValueError:
        raise RowError(line, f"cannot parse {column}={text!r} as a number") from None
    if not math.isfinite(value):
        raise RowError(line, f"non-finite value in {column}")
    return value


def _default_locality_id(row: Mapping[str, str]) -> str:
    parts = [row["country_region"], row["sub_region_1"], row["sub_region_2"], row.get("metro_area", "")]
    return " / ".join(p for p in parts if p)


def parse_cmr_csv(source, localities: Mapping[str, LocalitySelector] | None = None):
    """Parse a CMR CSV into series grouped by locality.

    Parameters
    ----------
    source : binary or text file object, or path
        UTF-8 CSV with the standard CMR header.
    localities : mapping of locality id to :class:`LocalitySelector`, optional
        Localities to extract.  When omitted every region in the file is
        returned, keyed by a ``"Country / Region"`` style id.

    Returns
    -------
    dict
        ``{locality_id: {PlaceCategory: MobilitySeries}}``, in the order of
        ``localities`` (or of first appearance in the file).  Empty value
        cells become NaN.

    Raises
    ------
    SchemaError
        A required column is missing.
    RowError
        A date or value cell cannot be parsed.
    SelectionError
        A configured locality matches no rows, or matches more than one
        region.
    """
    with _open_text(source) as stream:
        reader = csv.DictReader(stream)
        header = reader.fieldnames or []
        for column in REQUIRED_COLUMNS:
            if column not in header:
                raise SchemaError(column)

        rows: dict[str, list] = {}
        regions: dict[str, set] = {}
        if localities is not None:
            for loc_id in localities:
                rows[loc_id] = []
                regions[loc_id] = set()

        for row in reader:
            line = reader.line_num
            if localities is None:
                targets = [_default_locality_id(row)]
            else:
                targets = [loc_id for loc_id, sel in localities.items() if sel.matches(row)]
            if not targets:
                continue
            try:
                date = dt.date.fromisoformat(row["date"].strip())
            except (ValueError, AttributeError):
                raise RowError(line, f"cannot parse date {row.get('date')!r}") from None
            values = [_parse_value(row[c.column] or "", line, c.column) for c in PlaceCategory]
            region = tuple(row.get(c) or "" for c in REGION_COLUMNS)
            for loc_id in targets:
                rows.setdefault(loc_id, []).append((date, values, line))
                regions.setdefault(loc_id, set()).add(region)

    result = {}
    for loc_id, entries in rows.items():
        if not entries:
            raise SelectionError(f"no rows match locality {loc_id!r}")
        if len(regions[loc_id]) > 1:
            names = sorted(" / ".join(p for p in r if p) for r in regions[loc_id])
            raise SelectionError(f"locality {loc_id!r} matches several regions: {names}")
        entries.sort(key=lambda e: e[0])
        dates = [e[0] for e in entries]
        for prev, cur in zip(entries, entries[1:]):
            if prev[0] == cur[0]:
                raise RowError(cur[2], f"duplicate date {cur[0]} for locality {loc_id!r}")
        table = np.array([e[1] for e in entries], dtype=float)
        region = next(iter(regions[loc_id]))
        result[loc_id] = {
            cat: MobilitySeries(loc_id, cat, np.array(dates, dtype="datetime64[D]"), table[:, j], region=region)
            for j, cat in enumerate(PlaceCategory)
        }
    return result


def _format_value(value: float) -> str:
    if math.isnan(value):
        return ""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def write_cmr_csv(groups: Mapping[str, Mapping[PlaceCategory, MobilitySeries]], dest: IO[str]) -> None:
    """Write grouped series back out in CMR layout.

    Each group must carry all six categories on a shared date axis.  Region
    columns come from the series' ``region`` tuple, so a parse/write/parse
    round trip is lossless.
    """
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(CMR_HEADER)
    for loc_id, by_cat in groups.items():
        missing = [c for c in PlaceCategory if c not in by_cat]
        if missing:
            raise ValueError(f"locality {loc_id!r} lacks categories {[c.name for c in missing]}")
        first = by_cat[PlaceCategory.RETAIL_RECREATION]
        for s in by_cat.values():
            if not np.array_equal(s.dates, first.dates):
                raise ValueError(f"locality {loc_id!r}: categories do not share dates")
        region = dict(zip(REGION_COLUMNS, first.region or ("", loc_id, "", "", "")))
        for i, date in enumerate(first.dates):
            row = {c: "" for c in CMR_HEADER}
            row.update(region)
            row["date"] = str(date)
            for cat, s in by_cat.items():
                row[cat.column] = _format_value(s.values[i])
            writer.writerow([row[c] for c in CMR_HEADER])


def fill_gaps(series: MobilitySeries, max_gap: int = MAX_GAP_DAYS) -> MobilitySeries:
    """Return a gap-free daily series.

    Missing interior days (absent rows or empty cells) are linearly
    interpolated from the nearest present neighbours and flagged in
    ``filled``.  Leading and trailing missing values are trimmed.

    Raises
    ------
    DataQualityError
        Fewer than two present values, or an interior gap longer than
        ``max_gap`` consecutive days.
    """
    present = np.isfinite(series.values)
    if present.sum() < 2:
        raise DataQualityError(
            f"{series.locality_id}/{series.category.name}: need at least 2 present values"
        )
    dates = series.dates[present]
    start, stop = dates[0], dates[-1]
    n = int((stop - start).astype(int)) + 1
    full_dates = start + np.arange(n).astype("timedelta64[D]")
    offsets = (dates - start).astype(int)

    values = np.full(n, np.nan)
    values[offsets] = series.values[present]
    filled = np.zeros(n, dtype=bool)
    filled[offsets] = series.filled[present]

    missing = np.isnan(values)
    if missing.any():
        run = 0
        for i, m in enumerate(missing):
            run = run + 1 if m else 0
            if run > max_gap:
                first_missing = full_dates[i - run + 1]
                raise DataQualityError(
                    f"{series.locality_id}/{series.category.name}: gap of more than "
                    f"{max_gap} days starting {first_missing}"
                )
        idx = np.arange(n)
        values[missing] = np.interp(idx[missing], idx[~missing], values[~missing])
        filled |= missing
    return series.replace(dates=full_dates, values=values, filled=filled)


def select_analysis(groups: Mapping[PlaceCategory, MobilitySeries]) -> dict:
    """Drop the residential series and order the rest by chart axis."""
    return {cat: groups[cat] for cat in ANALYSIS_CATEGORIES if cat in groups}


def common_dates(series: Iterable[MobilitySeries]) -> np.ndarray:
    """Intersection of the date axes of several series."""
    series = list(series)
    out = series[0].dates
    for s in series[1:]:
        out = np.intersect1d(out, s.dates)
    return out
