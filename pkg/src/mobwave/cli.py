"""Command line entry point.

``mobwave analyze`` runs the full pipeline for every locality of a study
configuration; ``mobwave decompose`` runs STL on a single series.

Exit status: 0 on success, 1 on a data or validation error, 2 on a usage
error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import re
import sys
import unicodedata
from pathlib import Path

import numpy as np

from . import __version__
from .aggregate import compare_waves, write_report
from .config import StudyConfig, load_study_config
from .errors import MobwaveError, ValidationError
from .ingest import parse_cmr_csv
from .prepare import prepare_locality, write_diagnostics
from .render import radar_chart, radar_title, report_table, series_plot
from .stl import StlParams, stl_decompose

OUT_ENV = "MOBWAVE_OUT"

_STL_FLAGS = {
    "period": "stl_period",
    "seasonal_span": "stl_seasonal",
    "trend_span": "stl_trend",
    "lowpass_span": "stl_lowpass",
    "seasonal_degree": "stl_seasonal_degree",
    "trend_degree": "stl_trend_degree",
    "lowpass_degree": "stl_lowpass_degree",
    "inner_iterations": "stl_inner",
    "outer_iterations": "stl_outer",
}


def _size(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)x(\d+)", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _add_stl_flags(p: argparse.ArgumentParser, with_period: bool = True) -> None:
    g = p.add_argument_group("STL parameters (override the configuration)")
    if with_period:
        g.add_argument("--stl-period", type=int)
    g.add_argument("--stl-seasonal", type=int, help="seasonal span (odd, >= 7)")
    g.add_argument("--stl-trend", type=int, help="trend span (odd)")
    g.add_argument("--stl-lowpass", type=int, help="low-pass span (odd)")
    g.add_argument("--stl-seasonal-degree", type=int, choices=(0, 1, 2))
    g.add_argument("--stl-trend-degree", type=int, choices=(0, 1, 2))
    g.add_argument("--stl-lowpass-degree", type=int, choices=(0, 1, 2))
    g.add_argument("--stl-inner", type=int, help="inner iterations")
    g.add_argument("--stl-outer", type=int, help="outer (robustness) iterations")


def _stl_overrides(args) -> dict:
    return {
        field: getattr(args, attr)
        for field, attr in _STL_FLAGS.items()
        if getattr(args, attr, None) is not None
    }


def _apply_stl_overrides(base: StlParams, overrides: dict) -> StlParams:
    if not overrides:
        return base
    merged = base.as_dict()
    # derived spans follow a changed period/seasonal span unless given explicitly
    if "period" in overrides or "seasonal_span" in overrides:
        merged["trend_span"] = None
        merged["lowpass_span"] = None
    merged.update(overrides)
    return StlParams(**merged)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mobwave", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="compare both waves for every configured locality")
    a.add_argument("--cmr", required=True, type=Path, help="CMR CSV file")
    a.add_argument("--config", required=True, type=Path, help="study configuration (INI)")
    a.add_argument("--out", type=Path, help=f"output directory (default: ${OUT_ENV})")
    a.add_argument("--epsilon", type=float, help="dominance equality tolerance")
    a.add_argument("--diagnostics", action="store_true", help="write per-locality diagnostics CSV")
    a.add_argument("--keep-going", action="store_true", help="continue past failing localities")
    a.add_argument("--radar-size", type=_size, default=(600, 600), metavar="WxH")
    a.add_argument("--series-size", type=_size, default=(1200, 400), metavar="WxH")
    _add_stl_flags(a)

    d = sub.add_parser("decompose", help="STL decomposition of a single series")
    d.add_argument("--input", required=True, type=Path, help="CSV with a 'value' column")
    d.add_argument("--period", type=int, default=7)
    d.add_argument("--out", type=Path, help="output CSV (default: stdout)")
    _add_stl_flags(d, with_period=False)
    return parser


def slugify(name: str) -> str:
    text = unicodedata.normalize("NFKD", name).encode("ascii", "ignore").decode("ascii")
    text = re.sub(r"[^A-Za-z0-9]+", "-", text).strip("-").lower()
    return text or "locality"


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def analyze_locality(groups, loc, config: StudyConfig, args) -> dict[str, bytes]:
    """Run one locality through the pipeline; returns ``{relative path: content}``."""
    prep = prepare_locality(groups, loc.wave1_restriction_date, config.stl)
    report = compare_waves(prep.prepared, loc, config)
    slug = slugify(loc.locality_id)
    files = {}

    buf = io.StringIO()
    write_report(report, buf)
    files[f"{slug}/report.jsonl"] = buf.getvalue().encode("utf-8")
    files[f"{slug}/report.txt"] = report_table(report, "text").encode("utf-8")
    files[f"{slug}/report.csv"] = report_table(report, "csv").encode("utf-8")
    for c in report.comparisons:
        name = "radar_whole.svg" if c.window_index == 0 else f"radar_window{c.window_index}.svg"
        title = radar_title(loc.locality_id, c.window_index, c.start_day, c.length_days)
        files[f"{slug}/{name}"] = radar_chart(c.wave1, c.wave2, title, args.radar_size).encode("utf-8")
    files[f"{slug}/series.svg"] = series_plot(
        prep.prepared, loc, config.period_length_days, config.window_length_days, args.series_size
    ).encode("utf-8")
    if args.diagnostics:
        buf = io.StringIO()
        write_diagnostics(prep, buf)
        files[f"{slug}/diagnostics.csv"] = buf.getvalue().encode("utf-8")
    return files


def cmd_analyze(args) -> int:
    out_dir = args.out
    config = load_study_config(args.config)
    config = config.replace(stl=_apply_stl_overrides(config.stl, _stl_overrides(args)))
    if args.epsilon is not None:
        config = config.replace(epsilon=args.epsilon)

    cmr_bytes = args.cmr.read_bytes()
    config_bytes = args.config.read_bytes()
    data = parse_cmr_csv(io.BytesIO(cmr_bytes), config.selectors())

    slugs = [slugify(loc.locality_id) for loc in config.localities]
    if len(set(slugs)) != len(slugs):
        raise ValidationError("locality ids collide after conversion to directory names")

    files: dict[str, bytes] = {}
    failures = []
    for loc in config.localities:
        try:
            files.update(analyze_locality(data[loc.locality_id], loc, config, args))
        except MobwaveError as exc:
            if not args.keep_going:
                raise
            print(f"error: {loc.locality_id}: {exc}", file=sys.stderr)
            failures.append({"locality_id": loc.locality_id, "error": str(exc)})

    manifest = {
        "tool": "mobwave",
        "version": __version__,
        "inputs": {
            "cmr": {"path": str(args.cmr), "sha256": _sha256(cmr_bytes)},
            "config": {"path": str(args.config), "sha256": _sha256(config_bytes)},
        },
        "config": config.snapshot(),
        "stl_params": config.stl.as_dict(),
        "outputs": [{"path": p, "sha256": _sha256(files[p])} for p in sorted(files)],
        "failures": failures,
    }
    files["manifest.json"] = (json.dumps(manifest, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    _write_tree(out_dir, files)
    return 1 if failures else 0


def _write_tree(out_dir: Path, files: dict[str, bytes]) -> None:
    written = []
    try:
        for rel in sorted(files):
            path = out_dir / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(files[rel])
            written.append(path)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise


def _read_single_series(path: Path):
    with open(path, encoding="utf-8-sig", newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    fields = list(rows[0])
    column = "value" if "value" in fields else fields[-1]
    try:
        values = np.array([float(r[column]) for r in rows])
    except (TypeError, ValueError):
        raise ValidationError(f"{path}: column {column!r} must be numeric") from None
    dates = [r["date"] for r in rows] if "date" in fields else None
    return dates, values


def cmd_decompose(args) -> int:
    params = _apply_stl_overrides(StlParams(), {**_stl_overrides(args), "period": args.period})
    dates, values = _read_single_series(args.input)
    res = stl_decompose(values, params)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["value", "trend", "seasonal", "remainder", "robustness_weight"]
    writer.writerow((["date"] if dates else []) + header)
    for i in range(len(values)):
        row = [repr(float(x)) for x in (values[i], res.trend[i], res.seasonal[i], res.remainder[i], res.robustness_weights[i])]
        writer.writerow(([dates[i]] if dates else []) + row)
    if args.out:
        args.out.write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "analyze" and args.out is None:
        env = os.environ.get(OUT_ENV)
        if not env:
            parser.error(f"--out is required when ${OUT_ENV} is not set")
        args.out = Path(env)
    try:
        if args.command == "analyze":
            return cmd_analyze(args)
        return cmd_decompose(args)
    except (MobwaveError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
