"""Independent reference computations used to freeze expected values.

Nothing here calls into the code under test.
"""
import math

import numpy as np


def wls_at(xs, ys, x0, span, degree, external_weights=None):
    """Loess value at x0 by explicitly assembling and solving the normal equations."""
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    n = len(xs)
    dist = sorted(abs(x - x0) for x in xs)
    if span <= n:
        lam = dist[span - 1]
    else:
        lam = dist[-1] * span / n
    weights = []
    for i, x in enumerate(xs):
        d = abs(x - x0)
        if lam > 0:
            u = d / lam
        else:
            u = 0.0 if d == 0 else math.inf
        w = (1 - u**3) ** 3 if u < 1 else 0.0
        if external_weights is not None:
            w *= float(external_weights[i])
        weights.append(w)
    scale = lam if lam > 0 else 1.0
    k = degree + 1
    a = np.zeros((k, k))
    b = np.zeros(k)
    for x, y, w in zip(xs, ys, weights):
        t = (x - x0) / scale
        for r in range(k):
            b[r] += w * y * t**r
            for c in range(k):
                a[r, c] += w * t ** (r + c)
    return float(np.linalg.solve(a, b)[0])


def brute_force_dominance(a, b, eps=0.0):
    """Componentwise classifier counting wins and losses of a against b (minimisation)."""
    better = worse = 0
    for x, y in zip(a, b):
        if x < y - eps:
            better += 1
        elif x > y + eps:
            worse += 1
    if better == 0 and worse == 0:
        return "Equal"
    if worse == 0:
        return "Dominates"
    if better == 0:
        return "DominatedBy"
    return "Incomparable"


def weekly_pattern(amplitude=1.0, seed=None):
    """Zero-mean 7-day pattern whose largest magnitude equals ``amplitude``."""
    if seed is None:
        p = np.array([0.8, 0.3, -0.2, 0.1, 0.5, -1.0, -0.5])
    else:
        p = np.random.default_rng(seed).normal(size=7)
    p = p - p.mean()
    return amplitude * p / np.abs(p).max()


def ramp_plus_weekly(n_periods=20, slope=0.1, intercept=5.0, amplitude=1.0):
    t = np.arange(7 * n_periods, dtype=float)
    ramp = intercept + slope * t
    pattern = np.tile(weekly_pattern(amplitude), n_periods)
    return ramp, pattern


def lag_autocorrelation(x, lag):
    x = np.asarray(x, dtype=float)
    x = x - x.mean()
    return float(np.dot(x[:-lag], x[lag:]) / np.dot(x, x))
