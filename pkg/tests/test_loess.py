import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobwave.errors import ConfigError, DegenerateFitError
from mobwave.loess import LoessParams, bisquare, loess_batch, loess_fit_at, loess_smooth_series, tricube

from oracles import wls_at


def test_weight_functions():
    np.testing.assert_allclose(tricube([0.0, 0.5, 1.0, 2.0]), [1.0, (1 - 0.125) ** 3, 0.0, 0.0])
    np.testing.assert_allclose(bisquare([0.0, -0.5, 1.0, 3.0]), [1.0, 0.5625, 0.0, 0.0])


@pytest.mark.parametrize("span, degree", [(0, 0), (1, 1), (2, 2), (2.5, 1), (5, 3)])
def test_invalid_params(span, degree):
    with pytest.raises(ConfigError):
        LoessParams(span, degree)


def test_span_one_degree_zero_interpolates():
    ys = np.array([3.0, -1.0, 4.0, 1.5])
    np.testing.assert_array_equal(loess_smooth_series(ys, LoessParams(1, 0)), ys)


def test_span_larger_than_n_stretches_bandwidth():
    xs = np.arange(5.0)
    ys = np.array([1.0, 2.0, 0.0, 5.0, 3.0])
    got = loess_fit_at(xs, ys, 0.0, LoessParams(10, 1))
    assert got == pytest.approx(wls_at(xs, ys, 0.0, 10, 1), abs=1e-12)


@pytest.mark.parametrize("degree", [0, 1, 2])
def test_reproduces_polynomials(degree):
    xs = np.arange(30.0)
    ys = 2.0 - 0.3 * xs + (0.01 * xs**2 if degree == 2 else 0.0)
    if degree == 0:
        ys = np.full_like(xs, 7.5)
    got = loess_smooth_series(ys, LoessParams(9, degree))
    np.testing.assert_allclose(got, ys, atol=1e-9)


def test_external_weights_exclude_outlier():
    xs = np.arange(15.0)
    ys = 1.0 + 0.5 * xs
    ys_bad = ys.copy()
    ys_bad[7] = 100.0
    w = np.ones(15)
    w[7] = 0.0
    assert loess_fit_at(xs, ys_bad, 7.0, LoessParams(7, 1), w) == pytest.approx(ys[7], abs=1e-12)


def test_degenerate_fit_raises():
    xs = np.arange(5.0)
    with pytest.raises(DegenerateFitError):
        loess_fit_at(xs, xs, 2.0, LoessParams(3, 1), external_weights=[0, 0, 1, 0, 0])
    vals, ok = loess_batch(xs, xs, [2.0], LoessParams(3, 1), robustness=[0, 0, 1, 0, 0], strict=False)
    assert not ok[0] and np.isnan(vals[0])


def test_extrapolation_matches_oracle():
    xs = np.arange(10.0)
    ys = np.sin(xs)
    for x0 in (-3.0, 12.0):
        assert loess_fit_at(xs, ys, x0, LoessParams(5, 2)) == pytest.approx(wls_at(xs, ys, x0, 5, 2), abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(-50, 50), min_size=4, max_size=25),
    st.integers(1, 30),
    st.integers(0, 2),
    st.floats(-3, 28),
)
def test_batch_agrees_with_single_point(ys, span, degree, x0):
    span = max(span, degree + 1)
    ys = np.array(ys)
    xs = np.arange(len(ys), dtype=float)
    params = LoessParams(span, degree)
    try:
        single = loess_fit_at(xs, ys, x0, params)
    except DegenerateFitError:
        _, ok = loess_batch(xs, ys, [x0], params, strict=False)
        assert not ok[0]
        return
    batch, ok = loess_batch(xs, ys, [x0], params)
    assert ok[0]
    assert batch[0] == pytest.approx(single, abs=1e-8 * (1 + np.abs(ys).max()))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=6, max_size=25), st.floats(-100, 100), st.floats(0.1, 10))
def test_affine_equivariance(ys, shift, scale):
    ys = np.array(ys)
    params = LoessParams(5, 1)
    base = loess_smooth_series(ys, params)
    moved = loess_smooth_series(scale * ys + shift, params)
    np.testing.assert_allclose(moved, scale * base + shift, atol=1e-8 * (1 + scale * 50 + abs(shift)))
