"""Synthetic data in CMR layout, for demos and tests.

The generated values are made up: a weekly pattern, noise and two mobility
dips that start at each locality's restriction dates.  They are not Google
data and say nothing about any real place.
"""
from __future__ import annotations

import csv
import datetime as dt
import io

import numpy as np

from .config import StudyConfig
from .ingest import CMR_HEADER, PlaceCategory

START = dt.date(2020, 2, 15)
END = dt.date(2021, 1, 31)

_WEEKLY = np.array([3.0, 1.0, 0.0, -1.0, 2.0, -6.0, 1.0])


def _dip(t: np.ndarray, onset: int, depth: float, ramp: float, duration: int) -> np.ndarray:
    """Smooth drop of ``depth`` starting at ``onset`` and recovering after ``duration`` days."""
    down = 1.0 / (1.0 + np.exp(-(t - onset - ramp) / max(ramp / 3.0, 0.5)))
    up = 1.0 / (1.0 + np.exp(-(t - onset - duration) / 6.0))
    return -depth * down * (1.0 - up)


def synthetic_cmr_rows(
    config: StudyConfig,
    seed: int = 0,
    start: dt.date = START,
    end: dt.date = END,
    missing_rate: float = 0.01,
):
    """Yield CMR-format rows (dicts) for every locality in ``config``.

    Wave depths are drawn per locality and category from ``seed``; a small
    fraction of cells is left empty to exercise gap filling.
    """
    rng = np.random.default_rng(seed)
    n = (end - start).days + 1
    t = np.arange(n, dtype=float)
    dates = [start + dt.timedelta(days=i) for i in range(n)]
    for loc in config.localities:
        onset1 = (loc.wave1_restriction_date - start).days
        onset2 = (loc.wave2_restriction_date - start).days
        columns = {}
        for cat in PlaceCategory:
            depth1 = rng.uniform(40, 75)
            depth2 = rng.uniform(10, 50)
            ramp1 = rng.uniform(2, 20)
            ramp2 = rng.uniform(2, 20)
            series = (
                _dip(t, onset1, depth1, ramp1, 80)
                + _dip(t, onset2, depth2, ramp2, 70)
                + rng.uniform(0.3, 1.0) * np.roll(_WEEKLY, rng.integers(7))[(t.astype(int)) % 7]
                + rng.normal(0.0, 2.0, n)
            )
            if cat is PlaceCategory.RESIDENTIAL:
                series = -0.3 * series
            values = np.round(series)
            holes = rng.random(n) < missing_rate
            holes[:3] = holes[-3:] = False
            values[holes] = np.nan
            columns[cat] = values
        sel = loc.selector
        region = {
            "country_region_code": "",
            "country_region": sel.country,
            "sub_region_1": sel.sub_region_1 or sel.region,
            "sub_region_2": sel.region if sel.sub_region_1 else "",
        }
        for i, date in enumerate(dates):
            row = {c: "" for c in CMR_HEADER}
            row.update(region)
            row["date"] = date.isoformat()
            for cat, values in columns.items():
                v = values[i]
                row[cat.column] = "" if np.isnan(v) else str(int(v))
            yield row


def synthetic_cmr_csv(config: StudyConfig, seed: int = 0, **kwargs) -> bytes:
    """Synthetic CMR CSV for ``config`` as UTF-8 bytes."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CMR_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in synthetic_cmr_rows(config, seed=seed, **kwargs):
        writer.writerow(row)
    return buf.getvalue().encode("utf-8")
