import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mobwave.errors import ConfigError, SeriesLengthError, ValidationError
from mobwave.stl import StlParams, default_trend_span, robustness_weights, stl_decompose

from oracles import ramp_plus_weekly, weekly_pattern


def test_default_params():
    p = StlParams()
    assert (p.period, p.seasonal_span, p.trend_span, p.lowpass_span) == (7, 11, 13, 7)
    assert (p.inner_iterations, p.outer_iterations) == (2, 1)
    assert default_trend_span(7, 11) == 13


@pytest.mark.parametrize(
    "kwargs",
    [
        {"seasonal_span": 6},
        {"seasonal_span": 5},
        {"trend_span": 11},
        {"trend_span": 14},
        {"lowpass_span": 5},
        {"seasonal_degree": 3},
        {"inner_iterations": 0},
        {"outer_iterations": -1},
        {"period": 1},
    ],
)
def test_invalid_params(kwargs):
    with pytest.raises(ConfigError):
        StlParams(**kwargs)


def test_pure_periodic_input():
    y = np.tile(weekly_pattern(1.0), 20)
    res = stl_decompose(y)
    np.testing.assert_allclose(res.trend, 0.0, atol=1e-6)
    np.testing.assert_allclose(res.seasonal, y, atol=1e-6)


def test_ramp_plus_weekly_recovered():
    ramp, pattern = ramp_plus_weekly()
    res = stl_decompose(ramp + pattern)
    np.testing.assert_allclose(res.trend[7:-7], ramp[7:-7], rtol=0.02)
    np.testing.assert_allclose(res.seasonal[7:-7], pattern[7:-7], atol=0.02)


def test_short_series_rejected():
    with pytest.raises(SeriesLengthError):
        stl_decompose(np.zeros(13))
    stl_decompose(np.zeros(14))


def test_non_finite_rejected():
    y = np.zeros(30)
    y[4] = np.nan
    with pytest.raises(ValidationError):
        stl_decompose(y)


def test_no_outer_iterations_gives_unit_weights():
    y = np.random.default_rng(1).normal(size=60)
    res = stl_decompose(y, StlParams(outer_iterations=0))
    np.testing.assert_array_equal(res.robustness_weights, 1.0)


def test_robustness_weights_zero_median():
    np.testing.assert_array_equal(robustness_weights([0.0, 0.0, 0.0, 2.0]), [1.0, 1.0, 1.0, 0.0])


def test_outlier_resistance():
    # far from a spike the robust trend moves less than the plain one
    rng = np.random.default_rng(3)
    ramp, pattern = ramp_plus_weekly(n_periods=20)
    y = ramp + pattern + rng.normal(scale=0.1, size=len(ramp))
    spiked = y.copy()
    spiked[70] += 50.0
    robust, plain = StlParams(outer_iterations=5), StlParams(outer_iterations=0)
    far = np.abs(np.arange(len(y)) - 70) >= 2 * robust.trend_span
    d_robust = np.abs(stl_decompose(spiked, robust).trend - stl_decompose(y, robust).trend)[far]
    d_plain = np.abs(stl_decompose(spiked, plain).trend - stl_decompose(y, plain).trend)[far]
    assert d_robust.max() < d_plain.max()
    assert stl_decompose(spiked, robust).robustness_weights[70] < 0.05


def test_linear_ramp_has_no_seasonal():
    y = 3.0 + 0.25 * np.arange(84)
    res = stl_decompose(y)
    np.testing.assert_allclose(res.trend[7:-7], y[7:-7], rtol=0.02)
    np.testing.assert_allclose(res.seasonal, 0.0, atol=1e-6)


@settings(max_examples=40, deadline=None)
@given(
    arrays(np.float64, st.integers(14, 80), elements=st.floats(-1e3, 1e3)),
    st.integers(0, 2),
    st.sampled_from([7, 9, 13]),
)
def test_components_sum_to_input(y, outer, ns):
    res = stl_decompose(y, StlParams(seasonal_span=ns, outer_iterations=outer))
    np.testing.assert_allclose(res.trend + res.seasonal + res.remainder, y, atol=1e-9, rtol=0)
    assert np.all((res.robustness_weights >= 0) & (res.robustness_weights <= 1))
    assert len(res) == len(y)


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.integers(14, 60), elements=st.floats(-100, 100)), st.floats(-50, 50))
def test_shift_moves_trend_only(y, c):
    a = stl_decompose(y, StlParams(outer_iterations=0))
    b = stl_decompose(y + c, StlParams(outer_iterations=0))
    np.testing.assert_allclose(b.trend, a.trend + c, atol=1e-7)
    np.testing.assert_allclose(b.seasonal, a.seasonal, atol=1e-7)
