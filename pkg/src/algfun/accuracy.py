"""Series accuracy against independent roots, the log-linear accuracy model and its inverse."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from flint import acb, arb

from .numerics import ball, effective_precision, to_complex
from .polynomial import BivariatePoly
from .puiseux.series import PuiseuxSeries, evaluate_series, series_order, term_for_order
from .roots import roots_with_multiplicity


class MatchError(ValueError):
    """No unique reference root near a series value."""


class ModelError(ValueError):
    """Accuracy model cannot be fitted or inverted."""


@dataclass(frozen=True)
class AccuracySample:
    r_f: float
    angle: float
    order: int
    terms: int
    z: acb
    v_s: acb
    v_b: acb
    c_e: acb
    s_a: float


@dataclass(frozen=True)
class AccuracyModel:
    """Predicted digits A(r, o) = a + b ln r + o (c + d ln r)."""

    a: float
    b: float
    c: float
    d: float
    variance: float
    samples: int = 0

    def predict(self, r_f: float, order: float) -> float:
        lr = math.log(r_f)
        return self.a + self.b * lr + order * (self.c + self.d * lr)


def reference_roots(f: BivariatePoly, z, digits: int) -> list[acb]:
    """All n roots of f(z, w) = 0 in w, repeated by multiplicity."""
    p = f.w_poly_at(ball(z))
    out = []
    for r in roots_with_multiplicity(p, digits):
        out.extend([r.value] * r.multiplicity)
    return out


def match_root(value, roots: list[acb], s_t: float) -> acb:
    """The unique root within ``s_t`` of ``value``."""
    v = to_complex(ball(value))
    hits = [r for r in roots if abs(to_complex(r) - v) < s_t]
    if len(hits) != 1:
        raise MatchError(f"{len(hits)} roots within {s_t:.3g} of the series value")
    return hits[0]


def _min_separation(roots: list[acb]) -> float:
    cs = [to_complex(r) for r in roots]
    if len(cs) < 2:
        return math.inf
    return min(abs(a - b) for i, a in enumerate(cs) for b in cs[i + 1:])


def default_orders(P: PuiseuxSeries, count: int = 5) -> list[int]:
    """``count`` log-spaced orders from about a tenth of the maximum up to the maximum."""
    top = series_order(P, len(P))
    if top < 2:
        return [max(top, 0)]
    low = max(2, math.ceil(top / 10))
    vals = np.geomspace(low, top, count)
    return sorted({int(round(v)) for v in vals})


def default_radius_grid(steps: int = 25) -> list[Fraction]:
    return [Fraction(k, steps) for k in range(1, steps)]


def sample_accuracy(f_local: BivariatePoly, P: PuiseuxSeries, R: float, r_grid: list, orders: list[int],
                    samples_per_cell: int = 3, seed: int = 0, digits: int = 100,
                    s_f: float = 0.1) -> list[AccuracySample]:
    """Accuracy samples on circles r_f R e^(it) about the center of ``f_local``.

    For each (r_f, angle) the reference roots are computed once; the root
    matched by the full-length series value is the target for every order.
    Samples whose comparison error has no correct digits are dropped.
    """
    if not math.isfinite(R) or R <= 0:
        raise ModelError("accuracy sampling needs a finite positive radius")
    rng = random.Random(seed)
    out = []
    for r_f in r_grid:
        rf = float(r_f)
        for _ in range(samples_per_cell):
            t = rng.uniform(0.0, 2 * math.pi)
            z = ball(rf * R * complex(math.cos(t), math.sin(t)))
            roots = reference_roots(f_local, z, digits)
            s_t = s_f * _min_separation(roots)
            full = evaluate_series(P, z)
            try:
                v_b = match_root(full, roots, s_t)
            except MatchError:
                continue
            for o in orders:
                k = term_for_order(P, o)
                v_s = evaluate_series(P, z, k)
                c_e = abs(v_b - v_s)
                c_e = acb(c_e)
                if effective_precision(c_e) == 0:
                    continue
                s_a = -math.log10(abs(to_complex(c_e)))
                out.append(AccuracySample(rf, t, o, k, z, v_s, v_b, c_e, s_a))
    return out


def fit_accuracy_model(samples: list[AccuracySample]) -> AccuracyModel:
    """Least-squares fit of s_a = a + b ln r + o (c + d ln r)."""
    if len(samples) < 16:
        raise ModelError(f"need at least 16 samples, got {len(samples)}")
    if len({s.r_f for s in samples}) < 3 or len({s.order for s in samples}) < 3:
        raise ModelError("samples must span at least 3 radius fractions and 3 orders")
    lr = np.array([math.log(s.r_f) for s in samples])
    o = np.array([float(s.order) for s in samples])
    y = np.array([s.s_a for s in samples])
    X = np.column_stack([np.ones_like(lr), lr, o, o * lr])
    coef, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < 4:
        raise ModelError("rank-deficient design")
    resid = y - X @ coef
    var = float(np.mean(resid ** 2))
    a, b, c, d = (float(v) for v in coef)
    return AccuracyModel(a, b, c, d, var, len(samples))


def order_for_accuracy(model: AccuracyModel, r_f: float, e_a: float) -> int:
    """Smallest order predicted to reach ``e_a`` digits at radius fraction ``r_f``."""
    lr = math.log(float(r_f))
    den = model.c + model.d * lr
    if den <= 0:
        raise ModelError(f"model does not gain accuracy with order at r_f={float(r_f):.4g}")
    return max(0, math.ceil((e_a - model.a - model.b * lr) / den))


def measured_accuracy(f_local: BivariatePoly, P: PuiseuxSeries, R: float, r_f: float, order: int,
                      angles: list[float], digits: int = 100, s_f: float = 0.1) -> list[float]:
    """Correct digits of the order-``order`` truncation at r_f R e^(it) for each angle."""
    k = term_for_order(P, order)
    out = []
    for t in angles:
        z = ball(float(r_f) * R * complex(math.cos(t), math.sin(t)))
        roots = reference_roots(f_local, z, digits)
        v_b = match_root(evaluate_series(P, z), roots, s_f * _min_separation(roots))
        err = abs(to_complex(v_b - evaluate_series(P, z, k)))
        out.append(math.inf if err == 0 else -math.log10(err))
    return out


def precision_profile(P: PuiseuxSeries) -> list[tuple[int, int]]:
    """(term index, effective digits) for every stored coefficient."""
    return [(k + 1, effective_precision(a)) for k, a in enumerate(P.coeffs)]


def sample_rows(samples: list[AccuracySample]) -> list[dict]:
    return [{"r_f": f"{s.r_f:.6g}", "angle": f"{s.angle:.6g}", "order": s.order, "terms": s.terms,
             "s_a": f"{s.s_a:.6g}"} for s in samples]


def profile_rows(P: PuiseuxSeries) -> list[dict]:
    return [{"term": k, "precision": p} for k, p in precision_profile(P)]


def by_radius_rows(samples: list[AccuracySample]) -> list[dict]:
    """Mean accuracy per (r_f, order): the data behind accuracy-versus-radius plots."""
    cells: dict[tuple[float, int], list[float]] = {}
    for s in samples:
        cells.setdefault((s.r_f, s.order), []).append(s.s_a)
    return [{"r_f": f"{r:.6g}", "order": o, "mean_s_a": f"{np.mean(v):.6g}", "count": len(v)}
            for (r, o), v in sorted(cells.items())]
