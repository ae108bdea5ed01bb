"""Seasonal-trend decomposition by loess (STL).

Implements the inner/outer loop procedure of Cleveland, Cleveland, McRae and
Terpenning (1990) for an equally spaced series with integer period ``p``.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SeriesLengthError, ValidationError
from .loess import LoessParams, bisquare, loess_batch


def _next_odd(x: float) -> int:
    n = math.ceil(x)
    return n if n % 2 else n + 1


def default_trend_span(period: int, seasonal_span: int) -> int:
    """Smallest odd integer >= 1.5 p / (1 - 1.5 / n_s)."""
    return _next_odd(1.5 * period / (1.0 - 1.5 / seasonal_span))


@dataclass(frozen=True)
class StlParams:
    """STL smoothing parameters.

    ``trend_span`` and ``lowpass_span`` default to the smallest admissible
    odd values for the given period and seasonal span.
    """

    period: int = 7
    seasonal_span: int = 11
    trend_span: int | None = None
    lowpass_span: int | None = None
    seasonal_degree: int = 1
    trend_degree: int = 1
    lowpass_degree: int = 1
    inner_iterations: int = 2
    outer_iterations: int = 1

    def __post_init__(self):
        if self.period < 2:
            raise ConfigError(f"period must be >= 2, got {self.period}")
        if self.seasonal_span < 7 or self.seasonal_span % 2 == 0:
            raise ConfigError(f"seasonal span must be an odd integer >= 7, got {self.seasonal_span}")
        if self.trend_span is None:
            object.__setattr__(self, "trend_span", default_trend_span(self.period, self.seasonal_span))
        if self.lowpass_span is None:
            object.__setattr__(self, "lowpass_span", _next_odd(self.period))
        min_trend = default_trend_span(self.period, self.seasonal_span)
        if self.trend_span % 2 == 0 or self.trend_span < min_trend:
            raise ConfigError(f"trend span must be odd and >= {min_trend}, got {self.trend_span}")
        min_low = _next_odd(self.period)
        if self.lowpass_span % 2 == 0 or self.lowpass_span < min_low:
            raise ConfigError(f"low-pass span must be odd and >= {min_low}, got {self.lowpass_span}")
        for name in ("seasonal_degree", "trend_degree", "lowpass_degree"):
            if getattr(self, name) not in (0, 1, 2):
                raise ConfigError(f"{name} must be 0, 1 or 2")
        if self.inner_iterations < 1:
            raise ConfigError("inner_iterations must be >= 1")
        if self.outer_iterations < 0:
            raise ConfigError("outer_iterations must be >= 0")

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    def replace(self, **changes) -> "StlParams":
        return dataclasses.replace(self, **changes)


@dataclass
class StlResult:
    trend: np.ndarray
    seasonal: np.ndarray
    remainder: np.ndarray
    robustness_weights: np.ndarray
    params: StlParams

    def __len__(self) -> int:
        return len(self.trend)


def _moving_average(x: np.ndarray, length: int) -> np.ndarray:
    return np.convolve(x, np.full(length, 1.0 / length), mode="valid")


def _smooth_subseries(detrended, period, params: LoessParams, rw):
    """Smooth each cycle-subseries, extended by one period at each end.

    Returns an array of length ``n + 2 * period`` where index ``i``
    corresponds to time ``i - period``.
    """
    n = len(detrended)
    out = np.empty(n + 2 * period)
    for j in range(period):
        sub = detrended[j::period]
        k = len(sub)
        xs = np.arange(k, dtype=float)
        at = np.arange(-1, k + 1, dtype=float)
        sub_rw = None if rw is None else rw[j::period]
        vals, ok = loess_batch(xs, sub, at, params, robustness=sub_rw, strict=False)
        if not ok.all():
            # robustness weights left too few points; keep the data value,
            # and copy the nearest interior estimate at the extension points
            inner = vals[1:-1]
            inner[~ok[1:-1]] = sub[~ok[1:-1]]
            if not ok[0]:
                vals[0] = inner[0]
            if not ok[-1]:
                vals[-1] = inner[-1]
        out[j::period] = vals
    return out


def _smooth_tolerant(y, params: LoessParams, rw):
    xs = np.arange(len(y), dtype=float)
    vals, ok = loess_batch(xs, y, xs, params, robustness=rw, strict=False)
    vals[~ok] = y[~ok]
    return vals


def robustness_weights(remainder) -> np.ndarray:
    """Bisquare weights of ``|R| / (6 median |R|)``."""
    r = np.abs(np.asarray(remainder, dtype=float))
    h = 6.0 * np.median(r)
    if h == 0.0:
        return (r == 0.0).astype(float)
    return bisquare(r / h)


def stl_decompose(series, params: StlParams | None = None) -> StlResult:
    """Decompose ``series`` into trend, seasonal and remainder components.

    Parameters
    ----------
    series : array_like
        Equally spaced, finite values; at least two full periods long.
    params : StlParams, optional
        Defaults to weekly seasonality (``period=7``).

    Returns
    -------
    StlResult
        ``remainder`` is defined as ``series - trend - seasonal`` so the three
        components always add back up to the input.  ``robustness_weights``
        are the weights used in the final pass (all ones without outer
        iterations).
    """
    params = params or StlParams()
    y = np.asarray(series, dtype=float)
    if y.ndim != 1:
        raise ValidationError("series must be one-dimensional")
    if not np.all(np.isfinite(y)):
        raise ValidationError("series contains non-finite values")
    n, p = len(y), params.period
    if n < 2 * p:
        raise SeriesLengthError(f"series of length {n} is shorter than two periods ({2 * p})")

    seasonal_lp = LoessParams(params.seasonal_span, params.seasonal_degree)
    lowpass_lp = LoessParams(params.lowpass_span, params.lowpass_degree)
    trend_lp = LoessParams(params.trend_span, params.trend_degree)

    trend = np.zeros(n)
    seasonal = np.zeros(n)
    rw = None
    for outer in range(params.outer_iterations + 1):
        for _ in range(params.inner_iterations):
            cycle = _smooth_subseries(y - trend, p, seasonal_lp, rw)
            low = _moving_average(_moving_average(_moving_average(cycle, p), p), 3)
            low = _smooth_tolerant(low, lowpass_lp, None)
            seasonal = cycle[p : p + n] - low
            trend = _smooth_tolerant(y - seasonal, trend_lp, rw)
        if outer < params.outer_iterations:
            rw = robustness_weights(y - trend - seasonal)

    weights = np.ones(n) if rw is None else rw
    return StlResult(trend, seasonal, y - trend - seasonal, weights, params)
