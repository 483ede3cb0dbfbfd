"""Root-test radius estimates with greatest-lower-bound curve extrapolation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from ..numerics import is_effective_zero, log2_abs_mid
from ..puiseux.series import PuiseuxSeries

FIT_KINDS = {1: "linear", 2: "quadratic", 3: "cubic"}


class RootTestError(ValueError):
    """Series unsuitable for a root-test estimate."""


@dataclass(frozen=True)
class RootTestEstimate:
    points: tuple[tuple[float, float], ...]
    kind: str
    radius: float
    nearest_index: int | None
    window: int
    coefficients: tuple[float, ...] = ()

    @property
    def infinite(self) -> bool:
        return math.isinf(self.radius)


def root_test_points(P: PuiseuxSeries) -> list[tuple[float, float]]:
    """(1/m_k, |a_k|^(-c/m_k)) for positive exponents with nonzero coefficients."""
    pts = []
    for m, a in zip(P.numerators, P.coeffs):
        if m <= 0 or is_effective_zero(a):
            continue
        log2a = log2_abs_mid(a)
        pts.append((1.0 / m, 2.0 ** (-log2a * P.cycle / m)))
    return pts


def lower_bound_fit(xs: np.ndarray, ys: np.ndarray, degree: int) -> tuple[np.ndarray, float]:
    """Polynomial in x lying on or below every point with the least total gap.

    Returns (coefficients lowest first, mean gap).  x is scaled to [0, 1]
    internally for conditioning.
    """
    scale = float(xs.max())
    t = xs / scale
    V = np.vander(t, degree + 1, increasing=True)
    res = linprog(-V.sum(axis=0), A_ub=V, b_ub=ys, bounds=[(None, None)] * (degree + 1), method="highs")
    if not res.success:
        raise RootTestError(f"lower-bound fit failed: {res.message}")
    coef = res.x / scale ** np.arange(degree + 1)
    gap = float(np.sum(ys - V @ res.x))
    return coef, gap


def root_test_estimate(P: PuiseuxSeries, distances: list[tuple[int, float]] | None = None,
                       window_fraction: float = 0.25, min_window: int = 32,
                       min_points: int = 16) -> RootTestEstimate:
    """Extrapolate |a_k|^(-c/m_k) to 1/m -> 0 with the best lower-bound curve.

    ``distances`` pairs singular indices with their distance from the
    center; the index nearest the estimate is reported.
    """
    if P.finite:
        return RootTestEstimate((), "finite", math.inf, None, 0)
    pts = root_test_points(P)
    if len(pts) < min_points:
        raise RootTestError(f"root test needs at least {min_points} usable terms, got {len(pts)}")
    window = min(len(pts), max(min_window, int(len(pts) * window_fraction)))
    tail = pts[-window:]
    xs = np.array([p[0] for p in tail])
    ys = np.array([p[1] for p in tail])
    best = None
    for degree, kind in FIT_KINDS.items():
        if window <= degree + 2:
            continue
        try:
            coef, gap = lower_bound_fit(xs, ys, degree)
        except RootTestError:
            continue
        score = gap / (window - degree - 1)
        if coef[0] <= 0:
            continue
        if best is None or score < best[0]:
            best = (score, kind, coef)
    if best is None:
        raise RootTestError("no lower-bound fit produced a positive radius")
    _, kind, coef = best
    radius = float(coef[0])
    nearest = None
    if distances:
        nearest = min(distances, key=lambda d: (abs(d[1] - radius), d[0]))[0]
    return RootTestEstimate(tuple(pts), kind, radius, nearest, window, tuple(float(c) for c in coef))
