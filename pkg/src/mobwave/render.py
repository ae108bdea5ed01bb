"""SVG charts and text tables.

Documents are built as plain strings so that output is byte-for-byte
reproducible.  Coordinates are written with ``repr`` precision, which keeps
vertex radii recoverable from the file.
"""
from __future__ import annotations

import csv
import datetime as dt
import io
import math
from typing import Mapping
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .aggregate import AucVector, ComparisonReport, DominanceRelation
from .config import PERIOD_LENGTH_DAYS, WINDOW_LENGTH_DAYS, LocalityConfig
from .errors import RenderRangeError, SlicingError, ValidationError
from .ingest import ANALYSIS_CATEGORIES, PlaceCategory
from .prepare import PreparedSeries

WAVE_COLORS = {1: "#d62728", 2: "#1f77b4"}
CATEGORY_COLORS = {
    PlaceCategory.WORKPLACES: "#9467bd",
    PlaceCategory.GROCERY_PHARMACY: "#2ca02c",
    PlaceCategory.PARKS: "#8c564b",
    PlaceCategory.RETAIL_RECREATION: "#ff7f0e",
    PlaceCategory.TRANSIT_STATIONS: "#17becf",
}
RADAR_SIZE = (600, 600)
SERIES_SIZE = (1200, 400)

_HEADER = '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>\n'


def _num(x: float) -> str:
    return repr(float(x))


def _svg_open(width: int, height: int) -> list[str]:
    return [
        _HEADER,
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n',
    ]


def _text(x, y, s, size=12, anchor="middle", extra=""):
    return (
        f'<text x="{_num(x)}" y="{_num(y)}" font-family="sans-serif" font-size="{size}" '
        f'text-anchor="{anchor}"{extra}>{escape(s)}</text>\n'
    )


def radar_geometry(width: int, height: int):
    """Centre and outer radius of the radar plotting area."""
    cx = width / 2.0
    cy = height / 2.0 + 10.0
    radius = 0.36 * min(width, height)
    return cx, cy, radius


def axis_angles(n: int = len(ANALYSIS_CATEGORIES)) -> np.ndarray:
    """Axis angles in radians, first axis pointing up, clockwise on screen."""
    return -math.pi / 2 + 2 * math.pi * np.arange(n) / n


def _vertex(cx, cy, r, theta):
    return cx + r * math.cos(theta), cy + r * math.sin(theta)


def radar_chart(
    wave1: AucVector,
    wave2: AucVector,
    title: str | None = None,
    size: tuple[int, int] = RADAR_SIZE,
) -> str:
    """Paired radar chart of two AUC vectors as a standalone SVG document.

    Axes follow the fixed category order W, G&P, P, R&R, Ts.  The radial
    range runs from 0 to the slice length, and each vertex sits at radius
    ``value / length * R``.
    """
    axis_max = wave1.length_days
    if wave2.length_days != axis_max or axis_max <= 0:
        raise ValidationError("both vectors must come from slices of the same positive length")
    if set(wave1.categories) != set(ANALYSIS_CATEGORIES) or set(wave2.categories) != set(ANALYSIS_CATEGORIES):
        raise ValidationError("radar charts need all five analysed categories")
    for vec in (wave1, wave2):
        for cat in ANALYSIS_CATEGORIES:
            v = vec[cat]
            if not 0.0 <= v <= axis_max:
                raise RenderRangeError(f"{cat.name}={v} outside [0, {axis_max}]")

    width, height = size
    cx, cy, R = radar_geometry(width, height)
    angles = axis_angles()
    out = _svg_open(width, height)
    if title:
        out.append(_text(width / 2, 24, title, size=16))

    # frame and axes
    ring = " ".join(f"{_num(x)},{_num(y)}" for x, y in (_vertex(cx, cy, R, t) for t in angles))
    out.append(f'<polygon class="frame" points="{ring}" fill="none" stroke="#999999" stroke-width="1"/>\n')
    for frac in (0.25, 0.5, 0.75):
        pts = " ".join(f"{_num(x)},{_num(y)}" for x, y in (_vertex(cx, cy, frac * R, t) for t in angles))
        out.append(f'<polygon class="grid" points="{pts}" fill="none" stroke="#dddddd" stroke-width="1"/>\n')
    for cat, theta in zip(ANALYSIS_CATEGORIES, angles):
        x, y = _vertex(cx, cy, R, theta)
        out.append(
            f'<line class="axis" data-category={quoteattr(cat.value)} x1="{_num(cx)}" y1="{_num(cy)}" '
            f'x2="{_num(x)}" y2="{_num(y)}" stroke="#999999" stroke-width="1"/>\n'
        )
        lx, ly = _vertex(cx, cy, R + 22, theta)
        out.append(_text(lx, ly + 4, cat.abbrev, size=13))
    # ticks at 0 and axis_max on the first axis
    tx, ty = _vertex(cx, cy, R, angles[0])
    out.append(_text(cx + 6, cy + 4, "0", size=10, anchor="start", extra=' class="tick"'))
    out.append(_text(tx + 6, ty + 12, f"{axis_max:g}", size=10, anchor="start", extra=' class="tick"'))

    for wave, vec in ((1, wave1), (2, wave2)):
        color = WAVE_COLORS[wave]
        pts = []
        for cat, theta in zip(ANALYSIS_CATEGORIES, angles):
            r = vec[cat] / axis_max * R
            pts.append(_vertex(cx, cy, r, theta))
        points = " ".join(f"{_num(x)},{_num(y)}" for x, y in pts)
        values = " ".join(_num(vec[c]) for c in ANALYSIS_CATEGORIES)
        out.append(
            f'<polygon class="wave" data-wave="{wave}" data-values="{values}" points="{points}" '
            f'fill="{color}" fill-opacity="0.2" stroke="{color}" stroke-width="2"/>\n'
        )

    # legend
    for i, wave in enumerate((1, 2)):
        y = height - 40 + 18 * i
        out.append(f'<rect x="20" y="{y - 10}" width="12" height="12" fill="{WAVE_COLORS[wave]}"/>\n')
        out.append(_text(38, y, f"wave {wave}", size=12, anchor="start"))
    out.append("</svg>\n")
    return "".join(out)


def radar_title(locality_id: str, window_index: int, start_day: int, length_days: int) -> str:
    if window_index == 0:
        return f"{locality_id}: days 0-{length_days - 1}"
    return f"{locality_id}: window {window_index}, day {start_day}"


def series_plot(
    prepared: Mapping[PlaceCategory, PreparedSeries],
    locality: LocalityConfig,
    period_length_days: int = PERIOD_LENGTH_DAYS,
    window_length_days: int = WINDOW_LENGTH_DAYS,
    size: tuple[int, int] = SERIES_SIZE,
) -> str:
    """Line plot of prepared series with the two wave periods marked.

    Restriction dates are dashed vertical rules; each wave period is a shaded
    band split at window boundaries.
    """
    if not prepared:
        raise ValidationError("no categories to plot")
    cats = [c for c in ANALYSIS_CATEGORIES if c in prepared] + [c for c in prepared if c not in ANALYSIS_CATEGORIES]
    first = prepared[cats[0]]
    dates = first.dates
    lo_date, hi_date = dates[0], dates[-1]
    for w in (1, 2):
        start = np.datetime64(locality.restriction_date(w), "D")
        stop = start + np.timedelta64(period_length_days - 1, "D")
        if start < lo_date or stop > hi_date:
            raise SlicingError(f"{locality.locality_id}: wave {w} period {start} .. {stop} outside the data")

    width, height = size
    left, right, top, bottom = 60.0, width - 140.0, 40.0, height - 50.0
    span_days = float((hi_date - lo_date).astype(int)) or 1.0

    def px(date) -> float:
        return left + (right - left) * float((np.datetime64(date, "D") - lo_date).astype(int)) / span_days

    def py(v: float) -> float:
        return bottom - (bottom - top) * v

    out = _svg_open(width, height)
    out.append(_text(width / 2, 22, locality.locality_id, size=16))

    for w in (1, 2):
        start = locality.restriction_date(w)
        x0 = px(start)
        x1 = px(start + dt.timedelta(days=period_length_days))
        out.append(
            f'<rect class="period-band" data-wave="{w}" data-start="{start.isoformat()}" '
            f'data-days="{period_length_days}" x="{_num(x0)}" y="{_num(top)}" width="{_num(x1 - x0)}" '
            f'height="{_num(bottom - top)}" fill="#bbbbbb" fill-opacity="0.3"/>\n'
        )
        for k in range(1, period_length_days // window_length_days):
            xb = px(start + dt.timedelta(days=k * window_length_days))
            out.append(
                f'<line class="window-edge" x1="{_num(xb)}" y1="{_num(top)}" x2="{_num(xb)}" '
                f'y2="{_num(bottom)}" stroke="#ffffff" stroke-width="1"/>\n'
            )
        out.append(
            f'<line class="restriction" data-wave="{w}" data-date="{start.isoformat()}" x1="{_num(x0)}" '
            f'y1="{_num(top)}" x2="{_num(x0)}" y2="{_num(bottom)}" stroke="#333333" stroke-width="1.5" '
            f'stroke-dasharray="6,4"/>\n'
        )

    # axes
    out.append(
        f'<polyline class="axes" points="{_num(left)},{_num(top)} {_num(left)},{_num(bottom)} '
        f'{_num(right)},{_num(bottom)}" fill="none" stroke="#000000" stroke-width="1"/>\n'
    )
    for v in (0.0, 0.5, 1.0):
        out.append(_text(left - 8, py(v) + 4, f"{v:g}", size=11, anchor="end"))
    d = lo_date.astype(dt.date)
    month = dt.date(d.year, d.month, 1)
    while np.datetime64(month, "D") <= hi_date:
        if np.datetime64(month, "D") >= lo_date:
            x = px(month)
            out.append(f'<line x1="{_num(x)}" y1="{_num(bottom)}" x2="{_num(x)}" y2="{_num(bottom + 5)}" stroke="#000000"/>\n')
            out.append(_text(x, bottom + 18, month.strftime("%b %Y"), size=10))
        month = dt.date(month.year + (month.month == 12), month.month % 12 + 1, 1)

    for cat in cats:
        s = prepared[cat]
        if not np.array_equal(s.dates, dates):
            raise ValidationError("prepared series must share one date axis")
        pts = " ".join(f"{_num(px(t))},{_num(py(v))}" for t, v in zip(s.dates, s.values))
        color = CATEGORY_COLORS.get(cat, "#000000")
        out.append(
            f'<polyline class="series" data-category={quoteattr(cat.value)} points="{pts}" '
            f'fill="none" stroke="{color}" stroke-width="1.5"/>\n'
        )

    for i, cat in enumerate(cats):
        y = top + 10 + 20 * i
        color = CATEGORY_COLORS.get(cat, "#000000")
        out.append(
            f'<line class="legend" x1="{_num(right + 15)}" y1="{_num(y)}" x2="{_num(right + 40)}" '
            f'y2="{_num(y)}" stroke="{color}" stroke-width="3"/>\n'
        )
        out.append(_text(right + 48, y + 4, cat.abbrev, size=12, anchor="start", extra=' class="legend-label"'))
    out.append("</svg>\n")
    return "".join(out)


RELATION_LABELS = {
    DominanceRelation.DOMINATES: "Dominates(w1)",
    DominanceRelation.DOMINATED_BY: "Dominates(w2)",
    DominanceRelation.INCOMPARABLE: "Incomparable",
    DominanceRelation.EQUAL: "Equal",
}


def _table_rows(report: ComparisonReport):
    header = ["window", "days"]
    for cat in ANALYSIS_CATEGORIES:
        header += [f"{cat.abbrev} w1", f"{cat.abbrev} w2"]
    header.append("relation")
    rows = [header]
    for c in report.comparisons:
        row = [c.label, f"{c.start_day}-{c.start_day + c.length_days - 1}"]
        for cat in ANALYSIS_CATEGORIES:
            row += [f"{c.wave1[cat]:.3f}", f"{c.wave2[cat]:.3f}"]
        row.append(RELATION_LABELS[c.relation])
        rows.append(row)
    return rows


def report_table(report: ComparisonReport, fmt: str = "text") -> str:
    """Render the comparisons as an aligned text table or as CSV."""
    rows = _table_rows(report)
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown table format {fmt!r}")
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = [f"# {report.locality_id}"]
    for r in rows:
        cells = [r[0].ljust(widths[0]), r[1].ljust(widths[1])]
        cells += [v.rjust(w) for v, w in zip(r[2:-1], widths[2:-1])]
        cells.append(r[-1])
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"
