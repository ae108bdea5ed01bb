"""Locally weighted polynomial regression (loess).

The neighbourhood of a point ``x0`` is defined by its ``span`` nearest
neighbours.  With ``lam`` the distance to the span-th nearest neighbour, each
point gets the tricube weight ``(1 - |u|**3)**3`` where ``u = d / lam``.  When
the span exceeds the number of points, ``lam`` is the largest distance
stretched by ``span / n``, as in Cleveland et al. (1990).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateFitError


@dataclass(frozen=True)
class LoessParams:
    """Neighbourhood size and local polynomial degree."""

    span: int
    degree: int = 1

    def __post_init__(self):
        if self.degree not in (0, 1, 2):
            raise ConfigError(f"loess degree must be 0, 1 or 2, got {self.degree}")
        if int(self.span) != self.span or self.span < self.degree + 1:
            raise ConfigError(f"loess span must be an integer >= degree + 1, got {self.span}")


def tricube(u):
    u = np.minimum(np.abs(np.asarray(u, dtype=float)), 1.0)
    v = 1.0 - u * u * u
    return v * v * v


def bisquare(u):
    u = np.minimum(np.abs(np.asarray(u, dtype=float)), 1.0)
    v = 1.0 - u * u
    return v * v


def _bandwidth(dist: np.ndarray, span: int) -> np.ndarray:
    """Distance to the span-th nearest neighbour along the last axis."""
    n = dist.shape[-1]
    if span <= n:
        return np.partition(dist, span - 1, axis=-1)[..., span - 1]
    return dist.max(axis=-1) * (span / n)


def _neighbourhood_weights(dist: np.ndarray, lam: np.ndarray) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(lam > 0, dist / np.where(lam > 0, lam, 1.0), np.where(dist == 0, 0.0, np.inf))
    return tricube(u)


def loess_fit_at(xs, ys, x0: float, params: LoessParams, external_weights=None) -> float:
    """Value at ``x0`` of the local weighted polynomial fit.

    Parameters
    ----------
    xs, ys : array_like
        Sample abscissae (strictly increasing) and ordinates.
    x0 : float
        Evaluation point; may lie outside ``xs`` (extrapolation).
    params : LoessParams
    external_weights : array_like, optional
        Robustness weights multiplied into the neighbourhood weights.

    Raises
    ------
    DegenerateFitError
        Fewer than ``degree + 1`` points carry positive weight.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape:
        raise ValueError("xs and ys must be 1-d arrays of equal length")
    if len(xs) > 1 and np.any(np.diff(xs) <= 0):
        raise ValueError("xs must be strictly increasing")

    dist = np.abs(xs - x0)
    lam = _bandwidth(dist, params.span)
    w = _neighbourhood_weights(dist, lam)
    if external_weights is not None:
        w = w * np.asarray(external_weights, dtype=float)
    keep = w > 0
    if keep.sum() < params.degree + 1:
        raise DegenerateFitError(
            f"only {int(keep.sum())} positively weighted points at x0={x0}, "
            f"need {params.degree + 1}"
        )
    scale = lam if lam > 0 else 1.0
    t = (xs[keep] - x0) / scale
    sw = np.sqrt(w[keep])
    design = np.vander(t, params.degree + 1, increasing=True) * sw[:, None]
    coef, *_ = np.linalg.lstsq(design, ys[keep] * sw, rcond=None)
    return float(coef[0])


def loess_batch(xs, ys, at, params: LoessParams, robustness=None, strict: bool = True):
    """Evaluate the loess fit at many points at once.

    Returns ``(values, ok)``.  Rows with fewer than ``degree + 1`` positively
    weighted points raise :class:`DegenerateFitError` when ``strict``;
    otherwise they come back as NaN with ``ok`` False.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    at = np.atleast_1d(np.asarray(at, dtype=float))
    d = params.degree

    diff = at[:, None] - xs[None, :]
    dist = np.abs(diff)
    lam = _bandwidth(dist, params.span)
    w = _neighbourhood_weights(dist, lam)
    if robustness is not None:
        w = w * np.asarray(robustness, dtype=float)[None, :]

    ok = (w > 0).sum(axis=1) >= d + 1
    if strict and not ok.all():
        bad = at[~ok][0]
        raise DegenerateFitError(f"too few positively weighted points at x0={bad}, need {d + 1}")

    scale = np.where(lam > 0, lam, 1.0)
    t = -diff / scale[:, None]
    powers = [np.ones_like(t)]
    for _ in range(2 * d):
        powers.append(powers[-1] * t)
    moments = np.stack([(w * pk).sum(axis=1) for pk in powers], axis=1)
    rhs = np.stack([(w * ys[None, :] * powers[k]).sum(axis=1) for k in range(d + 1)], axis=1)
    gram = np.empty((len(at), d + 1, d + 1))
    for i in range(d + 1):
        for j in range(d + 1):
            gram[:, i, j] = moments[:, i + j]

    values = np.full(len(at), np.nan)
    if ok.any():
        sol = np.linalg.solve(gram[ok], rhs[ok][..., None])[..., 0]
        values[ok] = sol[:, 0]
    return values, ok


def loess_smooth_series(ys, params: LoessParams, robustness=None) -> np.ndarray:
    """Smooth an equally spaced series, evaluating the fit at every index.

    Boundary points use the one-sided nearest-neighbour window that the
    neighbour rule produces there.
    """
    ys = np.asarray(ys, dtype=float)
    xs = np.arange(len(ys), dtype=float)
    values, _ = loess_batch(xs, ys, xs, params, robustness=robustness, strict=True)
    return values
