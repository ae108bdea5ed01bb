"""Multi-objective comparison of community mobility reduction across COVID-19 waves.

Pipeline: parse Google CMR data (:mod:`mobwave.ingest`), calibrate, remove
weekday seasonality with STL and scale per locality (:mod:`mobwave.prepare`,
:mod:`mobwave.stl`), aggregate wave periods and windows by AUC and classify
them by Pareto dominance (:mod:`mobwave.aggregate`), then draw radar charts
and series plots (:mod:`mobwave.render`).
"""

__version__ = "0.1.0"

from .aggregate import (
    AucVector,
    ComparisonReport,
    DominanceRelation,
    WaveSlice,
    auc,
    compare_waves,
    dominance,
    slice_wave,
    split_windows,
)
from .config import LocalityConfig, StudyConfig, bundled_study_config, load_study_config
from .ingest import (
    ANALYSIS_CATEGORIES,
    LocalitySelector,
    MobilitySeries,
    PlaceCategory,
    fill_gaps,
    parse_cmr_csv,
    write_cmr_csv,
)
from .loess import LoessParams, loess_fit_at, loess_smooth_series
from .prepare import (
    PreparedSeries,
    calibrate_zero_mean,
    isolate_trend,
    prepare_locality,
    scale_common_range,
)
from .render import radar_chart, report_table, series_plot
from .stl import StlParams, StlResult, stl_decompose
