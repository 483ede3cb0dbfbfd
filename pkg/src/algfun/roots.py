"""Univariate polynomial roots at high precision.

Exact polynomials are split into squarefree parts and isolated by flint; the
isolated roots are then polished by Newton steps at doubling precision.
Ball-coefficient polynomials go through Aberth iteration (double precision
start, then a precision ladder) followed by inclusion-disc clustering, so
roots that coincide within the coefficients' uncertainty come back as a
single root with multiplicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import flint
import numpy as np
from flint import acb, acb_poly, arb, fmpq, fmpq_poly

from .numerics import (
    LOG10_2,
    GaussianRational,
    current_digits,
    digits_to_bits,
    effective_precision,
    is_effective_zero,
    log2_abs_mid,
    to_complex,
)


class RootFindingError(RuntimeError):
    """The iteration budget ran out before the roots converged."""


@dataclass(frozen=True)
class Root:
    value: acb
    multiplicity: int = 1


def _mid(x: acb) -> acb:
    return acb(x.real.mid(), x.imag.mid())


def _upper(x) -> float:
    """Upper bound of |x| as a float (may be inf/0)."""
    return float(abs(x).upper())


def _lower(x) -> float:
    return float(abs(x).lower())


def _set_radius(x: acb, r) -> acb:
    r = arb(r).upper() if not isinstance(r, arb) else r.upper()
    re = arb(x.real.mid(), r)
    im = arb(x.imag.mid(), r)
    return acb(re, im)


# ---------------------------------------------------------------------------
# input normalization
# ---------------------------------------------------------------------------


def _coefficients(p) -> list:
    if isinstance(p, fmpq_poly):
        return [GaussianRational(Fraction(int(c.p), int(c.q))) for c in p.coeffs()]
    if isinstance(p, acb_poly):
        return list(p.coeffs())
    if isinstance(p, dict):
        deg = max(p)
        return [p.get(k, 0) for k in range(deg + 1)]
    return list(p)


def _exact(coeffs) -> bool:
    return all(isinstance(c, (int, Fraction, GaussianRational)) for c in coeffs)


# ---------------------------------------------------------------------------
# exact polynomials over Q(i)
# ---------------------------------------------------------------------------


def _gtrim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _gdivmod(a, b):
    a, b = _gtrim(a), _gtrim(b)
    if len(a) < len(b):
        return [], a
    q = [GaussianRational(0)] * (len(a) - len(b) + 1)
    r = list(a)
    for k in range(len(q) - 1, -1, -1):
        c = r[k + len(b) - 1] / b[-1]
        q[k] = c
        if c:
            for i, y in enumerate(b):
                r[k + i] = r[k + i] - c * y
    return _gtrim(q), _gtrim(r)


def _gmonic(p):
    p = _gtrim(p)
    return [c / p[-1] for c in p]


def _ggcd(a, b):
    a, b = _gtrim(a), _gtrim(b)
    while b:
        a, b = b, _gdivmod(a, b)[1]
    return _gmonic(a)


def _gderiv(p):
    return _gtrim([c * k for k, c in enumerate(p)][1:])


def _gsquarefree(p) -> list[tuple[list, int]]:
    """Yun's algorithm over Q(i)."""
    p = _gtrim([GaussianRational.coerce(c) for c in p])
    out = []
    dp = _gderiv(p)
    g = _ggcd(p, dp)
    b = _gdivmod(p, g)[0]
    c = _gdivmod(dp, g)[0]
    k = 1
    while len(b) > 1:
        d = [x - y for x, y in zip(c + [GaussianRational(0)] * (len(_gderiv(b)) - len(c)),
                                    _gderiv(b) + [GaussianRational(0)] * (len(c) - len(_gderiv(b))))]
        d = _gtrim(d)
        a = _ggcd(b, d) if d else _gmonic(b)
        if len(a) > 1:
            out.append((a, k))
        b = _gdivmod(b, a)[0]
        c = _gdivmod(d, a)[0] if d else []
        k += 1
    return out


def _squarefree_parts(coeffs) -> list[tuple[acb_poly, int]]:
    coeffs = [GaussianRational.coerce(c) for c in coeffs]
    if all(c.is_real for c in coeffs):
        q = fmpq_poly([fmpq(c.re.numerator, c.re.denominator) for c in coeffs])
        _, facs = q.factor_squarefree()
        return [(acb_poly(f), int(e)) for f, e in facs]
    return [(acb_poly([c.to_ball() for c in f]), e) for f, e in _gsquarefree(coeffs)]


# ---------------------------------------------------------------------------
# Newton polish
# ---------------------------------------------------------------------------


def _ladder(target_bits: int, start_bits: int = 64) -> list[int]:
    steps = [target_bits]
    while steps[-1] > start_bits:
        steps.append(steps[-1] // 2 + 8)
    return list(reversed(steps))


def newton_polish(p: acb_poly, x0: acb, digits: int, dp: acb_poly | None = None) -> acb:
    """Refine a simple root of ``p`` from ``x0`` and attach an error radius.

    The radius is twice the Newton correction evaluated in ball arithmetic
    at the final precision, which bounds the distance to the true root once
    the iteration is in its quadratic regime.
    """
    if dp is None:
        dp = p.derivative()
    target = digits_to_bits(digits + 10)
    saved = flint.ctx.prec
    x = _mid(x0)
    pm = acb_poly([_mid(c) for c in p.coeffs()])
    dpm = acb_poly([_mid(c) for c in dp.coeffs()])
    try:
        for bits in _ladder(target, 128):
            flint.ctx.prec = bits
            for _ in range(3):
                d = pm(x) / dpm(x)
                if not d.is_finite():
                    break
                x = _mid(x - d)
                if d == 0 or log2_abs_mid(d) < log2_abs_mid(x) - bits + 4:
                    break
        flint.ctx.prec = target
        for _ in range(2):
            d = pm(x) / dpm(x)
            if not d.is_finite():
                raise RootFindingError("Newton polish failed: derivative indistinguishable from zero")
            x = _mid(x - d)
        val = p(x)
        der = dp(x)
    finally:
        flint.ctx.prec = saved
    if _lower(der) == 0:
        return _set_radius(x, abs(x).upper() + 1)
    rad = 2 * abs(val).upper() / abs(der).lower()
    floor = abs(x).upper() * arb(2) ** (-target + 4)
    return _set_radius(x, max(rad, floor))


# ---------------------------------------------------------------------------
# Aberth iteration
# ---------------------------------------------------------------------------


def _initial_guesses(mags: list[float], n: int) -> np.ndarray:
    """Starting points on circles from the upper hull of log|a_k| (Bini's rule)."""
    pts = [(k, m) for k, m in enumerate(mags) if m > -math.inf]
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) <= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (k1, y1), (k2, y2) in zip(hull, hull[1:]):
        cnt = k2 - k1
        r = 2.0 ** ((y1 - y2) / cnt)
        for t in range(cnt):
            ang = 2 * math.pi * t / cnt + 2 * math.pi * k1 / n + 0.4
            out.append(r * complex(math.cos(ang), math.sin(ang)))
    return np.array(out, dtype=complex)


def _aberth_numpy(pm: acb_poly, dpm: acb_poly, x: np.ndarray, iters: int = 500) -> np.ndarray:
    """Aberth iteration with flint evaluation (128 bits) and numpy updates."""
    saved = flint.ctx.prec
    flint.ctx.prec = 128
    try:
        for _ in range(iters):
            pts = [acb(complex(v)) for v in x]
            pv = [pm(v) for v in pts]
            dv = [dpm(v) for v in pts]
            ratio = np.empty(len(x), dtype=complex)
            for i, (a, b) in enumerate(zip(pv, dv)):
                if b == 0:
                    ratio[i] = 0
                else:
                    ratio[i] = to_complex(a / b)
            diff = x[:, None] - x[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            with np.errstate(all="ignore"):
                step = ratio / (1.0 - ratio * s)
            step = np.where(np.isfinite(step), step, 0)
            x = x - step
            scale = np.maximum(np.abs(x), 1e-300)
            if np.all(np.abs(step) <= 1e-15 * scale):
                break
    finally:
        flint.ctx.prec = saved
    return x


def _aberth_acb(pm: acb_poly, dpm: acb_poly, xs: list[acb], bits: int, iters: int, frozen: set) -> list[acb]:
    saved = flint.ctx.prec
    flint.ctx.prec = bits
    n = len(xs)
    try:
        for _ in range(iters):
            moved = False
            pv = [pm(v) for v in xs]
            dv = [dpm(v) for v in xs]
            new = list(xs)
            for i in range(n):
                if i in frozen or dv[i] == 0:
                    continue
                ratio = pv[i] / dv[i]
                s = acb(0)
                xi = xs[i]
                for j in range(n):
                    if j != i:
                        dx = xi - xs[j]
                        if dx != 0:
                            s += 1 / dx
                den = 1 - ratio * s
                step = ratio / den if den != 0 else ratio
                if not step.is_finite():
                    step = ratio
                if not step.is_finite():
                    continue
                new[i] = _mid(xi - step)
                if log2_abs_mid(step) > log2_abs_mid(new[i]) - bits + 6:
                    moved = True
            xs = new
            if not moved:
                break
    finally:
        flint.ctx.prec = saved
    return xs


def _inclusion_radii(p: acb_poly, xs: list[acb]) -> list[float]:
    """Gershgorin/Weierstrass inclusion radii n*|p(x_i)| / |a_n prod (x_i - x_j)| (log2)."""
    n = len(xs)
    lead = p.coeffs()[-1]
    vals = [p(v) for v in xs]
    out = []
    for i in range(n):
        num = math.log2(max(_upper(vals[i]), 1e-300)) if _upper(vals[i]) > 0 else -math.inf
        den = log2_abs_mid(lead)
        for j in range(n):
            if j != i:
                den += log2_abs_mid(xs[i] - xs[j]) if xs[i] != xs[j] else -math.inf
        if num == -math.inf:
            # the exact value vanished: use the magnitude of the midpoint error bound
            out.append(-math.inf)
        elif den == -math.inf:
            out.append(math.inf)
        else:
            out.append(math.log2(n) + num - den)
    return out


def _cluster(xs: list[acb], log_radii: list[float]) -> list[list[int]]:
    n = len(xs)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            ld = log2_abs_mid(xs[i] - xs[j])
            lr = max(log_radii[i], log_radii[j]) + 1
            if ld <= lr:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _numeric_roots(coeffs: list[acb], digits: int, max_iter: int) -> list[Root]:
    zero_roots = 0
    while len(coeffs) > 1 and is_effective_zero(coeffs[0]) and coeffs[0] == 0:
        coeffs = coeffs[1:]
        zero_roots += 1
    p = acb_poly(coeffs)
    n = p.degree()
    out = [Root(acb(0), zero_roots)] if zero_roots else []
    if n < 1:
        return out
    if n == 1:
        c0, c1 = coeffs
        v = -c0 / c1
        return out + [Root(v, 1)]
    dp = p.derivative()
    pm = acb_poly([_mid(c) for c in coeffs])
    dpm = pm.derivative()
    mags = [log2_abs_mid(c) for c in coeffs]
    x = _initial_guesses(mags, n)
    x = _aberth_numpy(pm, dpm, x, iters=max_iter)
    xs = [acb(complex(v)) for v in x]
    target = digits_to_bits(digits + 10)
    frozen: set = set()
    for bits in _ladder(target, 96):
        xs = _aberth_acb(pm, dpm, xs, bits, 40, frozen)
    saved = flint.ctx.prec
    flint.ctx.prec = target
    try:
        radii = _inclusion_radii(p, xs)
        groups = _cluster(xs, radii)
        for g in groups:
            m = len(g)
            if m == 1:
                out.append(Root(newton_polish(p, xs[g[0]], digits, dp), 1))
                continue
            centroid = sum((xs[i] for i in g), acb(0)) / m
            q = p
            for _ in range(m - 1):
                q = q.derivative()
            out.append(Root(newton_polish(q, centroid, digits), m))
    finally:
        flint.ctx.prec = saved
    return out


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def roots_with_multiplicity(p, digits: int | None = None, max_iter: int = 500) -> list[Root]:
    """All complex roots of ``p`` (coefficients low power first) with multiplicities.

    Exact input (ints, Fractions, Gaussian rationals, fmpq_poly) is split into
    squarefree factors before isolation, so multiplicities are exact.
    """
    if digits is None:
        digits = current_digits()
    coeffs = _coefficients(p)
    while coeffs and (coeffs[-1] == 0 if not isinstance(coeffs[-1], acb) else coeffs[-1] == 0):
        coeffs.pop()
    if len(coeffs) < 2:
        raise ValueError("polynomial must have degree >= 1")
    if _exact(coeffs):
        out: list[Root] = []
        saved = flint.ctx.prec
        flint.ctx.prec = digits_to_bits(digits + 10)
        try:
            for part, mult in _squarefree_parts(coeffs):
                if part.degree() < 1:
                    continue
                if part.degree() == 1:
                    c0, c1 = part.coeffs()
                    out.append(Root(-c0 / c1, mult))
                    continue
                iso = _isolate(part)
                dpart = part.derivative()
                for r in iso:
                    out.append(Root(newton_polish(part, r, digits, dpart), mult))
        finally:
            flint.ctx.prec = saved
        return out
    balls = [c if isinstance(c, acb) else GaussianRational.coerce(c).to_ball() if not isinstance(c, (float, complex)) else acb(c) for c in coeffs]
    return _numeric_roots(balls, digits, max_iter)


def _isolate(part: acb_poly) -> list[acb]:
    saved = flint.ctx.prec
    try:
        for bits in (128, 256, 512, 1024, 2048, 4096, 8192):
            flint.ctx.prec = max(bits, 64)
            try:
                return part.roots()
            except ValueError:
                continue
    finally:
        flint.ctx.prec = saved
    raise RootFindingError("failed to isolate roots of a squarefree factor")


def roots_univariate(p, digits: int | None = None, max_iter: int = 500) -> list[acb]:
    """Roots repeated according to multiplicity."""
    out = []
    for r in roots_with_multiplicity(p, digits, max_iter):
        out.extend([r.value] * r.multiplicity)
    return out


def precision_of(roots: list[acb]) -> int:
    return min((effective_precision(r) for r in roots), default=current_digits())
