"""Initial segments by repeated Newton polygons, then quadratic Newton iteration.

Each leaf of the polygon recursion is one series start: a prefix of terms
fixed by multiple characteristic roots, and a final simple root that seeds
the Newton iteration on an integer-power polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import flint
from flint import acb, acb_poly, acb_series

from ..numerics import effective_precision, is_effective_zero
from ..polynomial import BivariatePoly, FractionalPoly, PrecisionFloorError, strip_coefficient_zeros
from .polygon import characteristic_roots, newton_polygon, polygon_iterate
from .series import PuiseuxSeries


@dataclass(frozen=True)
class Leaf:
    """A series start produced by the polygon recursion.

    ``prefix`` holds (exponent, coefficient) pairs fixed by earlier polygon
    passes; ``root`` is the simple characteristic root of the last segment
    with exponent ``exponent``.  A terminal leaf has no further terms.
    """

    prefix: tuple[tuple[Fraction, acb], ...]
    iterate: FractionalPoly | None
    lam: Fraction
    beta: Fraction
    root: acb | None
    exponent: Fraction | None
    lambdas: tuple[Fraction, ...]
    removable: bool = False
    terminal: bool = False
    removed: tuple = field(default_factory=tuple)

    @property
    def cycle(self) -> int:
        d = 1
        for lam in self.lambdas:
            d = math.lcm(d, lam.denominator)
        for e, _ in self.prefix:
            d = math.lcm(d, e.denominator)
        return d

    @property
    def leading_exponent(self) -> Fraction:
        if self.prefix:
            return self.prefix[0][0]
        return self.exponent if self.exponent is not None else Fraction(0)

    def initial_terms(self) -> list[tuple[Fraction, acb]]:
        terms = list(self.prefix)
        if not self.terminal:
            terms.append((self.exponent, self.root))
        return terms

    def initial_series(self) -> PuiseuxSeries:
        c = self.cycle
        terms = self.initial_terms()
        return PuiseuxSeries(c, tuple(int(e * c) for e, _ in terms), tuple(a for _, a in terms),
                             finite=self.terminal)


def initial_segments(f: BivariatePoly | FractionalPoly, digits: int, floor: int = 0,
                     tol: float | None = None) -> list[Leaf]:
    """All series starts of f(z, w) = 0 about z = 0, in polygon order.

    Leaves are ordered by hull segment (largest exponent first), then by
    characteristic root (real part, |imag|, imag), depth first.
    """
    fp = FractionalPoly.from_bivariate(f) if isinstance(f, BivariatePoly) else f
    fp, _ = strip_coefficient_zeros(fp, tol)
    leaves: list[Leaf] = []
    _recurse(fp, (), (), Fraction(0), None, digits, floor, tol, leaves, top=True)
    return leaves


def _recurse(fk, prefix, lambdas, acc, max_w, digits, floor, tol, out, top, removed=()):
    poly = newton_polygon(fk, max_w)
    # branches with w = 0 in this iterate: the prefix is an exact solution
    for _ in range(poly.j_min):
        out.append(Leaf(prefix, None, Fraction(0), Fraction(0), None, None, lambdas,
                        removable=top and poly.j_min > 1, terminal=True, removed=removed))
    # number of branches tending to zero at the top level (their common value is 0)
    to_zero = poly.j_min + sum(s.width for s in poly.segments if s.lam > 0) if top else 0
    for seg in poly.segments:
        if not top and seg.lam <= 0:
            raise ArithmeticError("non-positive slope in a polygon iterate; coefficient zero not stripped")
        for r in characteristic_roots(seg, digits):
            exp = acc + seg.lam
            lams = lambdas + (seg.lam,)
            if top:
                removable = (seg.lam == 0 and r.multiplicity > 1) or (seg.lam > 0 and to_zero > 1)
            else:
                removable = False
            if r.multiplicity == 1:
                out.append(Leaf(prefix, fk, seg.lam, seg.beta, r.value, exp, lams,
                                removable=removable, removed=removed))
                continue
            nxt, rem = polygon_iterate(fk, seg, r.value, floor, tol)
            start = len(out)
            _recurse(nxt, prefix + ((exp, r.value),), lams, exp, r.multiplicity, digits, floor, tol,
                     out, False, removed + tuple(rem))
            if removable:
                for k in range(start, len(out)):
                    out[k] = _mark_removable(out[k])


def _mark_removable(leaf: Leaf) -> Leaf:
    from dataclasses import replace

    return replace(leaf, removable=True)


# ---------------------------------------------------------------------------
# normalization and Newton iteration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Normalized:
    """Integer-power polynomial fbar(z, w) = zhat(z^d, w) plus the data to undo it."""

    fbar: BivariatePoly
    d: int
    exponent: Fraction
    prefix: tuple[tuple[Fraction, acb], ...]


def normalize_for_iteration(leaf: Leaf) -> Normalized:
    """fhat = z^(-beta) f_k(z, z^lam w) and fbar = fhat(z^d, w) with d the lcm of slope denominators."""
    if leaf.terminal:
        raise ValueError("terminal leaf has nothing to iterate")
    fhat = leaf.iterate.substitute_scale(leaf.lam, leaf.beta)
    d = 1
    for lam in leaf.lambdas:
        d = math.lcm(d, lam.denominator)
    d = math.lcm(d, fhat.denominator)
    return Normalized(fhat.to_integer_powers(d), d, leaf.exponent, leaf.prefix)


@dataclass
class IterationResult:
    coeffs: list[acb]
    finite: bool
    iterations: int
    profile: list[int]


def _series_columns(fbar: BivariatePoly, length: int) -> list[list[acb]]:
    cols = [[acb(0)] * length for _ in range(fbar.w_degree + 1)]
    for (i, j), c in fbar.coeffs.items():
        if i < length:
            cols[j][i] = c
    return cols


def _horner(cols: list[list[acb]], W: acb_series, length: int, derivative: bool = False) -> acb_series:
    n = len(cols) - 1
    if derivative:
        cols = [[a * j for a in col] for j, col in enumerate(cols)][1:]
        n -= 1
    acc = acb_series(cols[n], prec=length)
    for j in range(n - 1, -1, -1):
        acc = acc * W + acb_series(cols[j], prec=length)
    return acc


def _exact_residual_zero(fbar: BivariatePoly, W: list[acb]) -> bool:
    """Untruncated fbar(z, W(z)) vanishes within ball radii."""
    Wp = acb_poly(W)
    polys = fbar.coefficient_polys()
    acc = polys[-1]
    for p in reversed(polys[:-1]):
        acc = acc * Wp + p
    return all(is_effective_zero(c) for c in acc.coeffs())


def newton_iterate_series(norm: Normalized, w0: acb, target_terms: int, nzm: int = 15,
                          floor: int = 0, max_length: int = 1 << 16) -> IterationResult:
    """W_{j+1} = W_j - mod(fbar/fbar_w, z^(2^(j+1))) from W_0 = w0.

    Stops when the back-substituted series will have at least
    ``target_terms`` nonzero terms, or when the increment vanishes and the
    untruncated residual is zero (an exact polynomial solution).  ``nzm``
    consecutive zero increments also end the iteration as a polynomial.
    """
    fbar = norm.fbar
    W = [w0]
    N = 1
    zero_run = 0
    iterations = 0
    base_terms = len(norm.prefix)
    saved_cap = flint.ctx.cap
    try:
        return _iterate(fbar, W, N, zero_run, iterations, base_terms, target_terms, nzm, floor, max_length)
    finally:
        flint.ctx.cap = saved_cap


def _iterate(fbar, W, N, zero_run, iterations, base_terms, target_terms, nzm, floor, max_length):
    while True:
        nonzero = sum(1 for a in W if not is_effective_zero(a))
        if base_terms + nonzero >= target_terms and N > 1:
            return IterationResult(W, False, iterations, _profile(W))
        if N >= max_length:
            return IterationResult(W, False, iterations, _profile(W))
        N2 = 2 * N
        flint.ctx.cap = N2
        cols = _series_columns(fbar, N2)
        Ws = acb_series(W + [acb(0)] * (N2 - N), prec=N2)
        F = _horner(cols, Ws, N2)
        Fw = _horner(cols, Ws, N2, derivative=True)
        delta = (F / Fw).coeffs()
        delta = list(delta) + [acb(0)] * (N2 - len(delta))
        new = delta[N:N2]
        W = W + [acb(0)] * (N2 - N)
        zero_inc = all(is_effective_zero(a) for a in new)
        for k in range(N, N2):
            W[k] = W[k] - new[k - N]
        iterations += 1
        if floor > 0:
            worst = min((effective_precision(a) for a in W if not is_effective_zero(a)), default=floor)
            if worst < floor:
                raise PrecisionFloorError(f"series term precision {worst} below floor {floor}")
        if zero_inc:
            zero_run += 1
            trimmed = _trim_zero(W)
            if _exact_residual_zero(fbar, trimmed) or zero_run >= nzm:
                return IterationResult(trimmed, True, iterations, _profile(trimmed))
        else:
            zero_run = 0
        N = N2


def _trim_zero(W: list[acb]) -> list[acb]:
    W = list(W)
    while len(W) > 1 and is_effective_zero(W[-1]):
        W.pop()
    return W


def _profile(W: list[acb]) -> list[int]:
    return [effective_precision(a) for a in W if not is_effective_zero(a)]


def back_substitute(norm: Normalized, W: list[acb], finite: bool = False) -> PuiseuxSeries:
    """w = sum prefix + z^exponent * W(z^(1/d)), exponents reduced to the minimal cycle."""
    c = norm.d
    for e, _ in norm.prefix:
        c = math.lcm(c, e.denominator)
    c = math.lcm(c, norm.exponent.denominator)
    nums, coeffs = [], []
    for e, a in norm.prefix:
        nums.append(int(e * c))
        coeffs.append(a)
    base = norm.exponent * c
    step = Fraction(c, norm.d)
    for t, a in enumerate(W):
        if is_effective_zero(a):
            continue
        m = base + step * t
        if m.denominator != 1:
            raise ArithmeticError("exponent does not clear the cycle denominator")
        nums.append(int(m))
        coeffs.append(a)
    return PuiseuxSeries(c, tuple(nums), tuple(coeffs), finite=finite).reduced()


def expand_leaf(leaf: Leaf, target_terms: int, nzm: int = 15, floor: int = 0) -> tuple[PuiseuxSeries, list[int]]:
    """Full series for one leaf plus its per-term precision profile."""
    if leaf.terminal:
        s = leaf.initial_series()
        return s.reduced(), [effective_precision(a) for a in s.coeffs]
    norm = normalize_for_iteration(leaf)
    res = newton_iterate_series(norm, leaf.root, target_terms, nzm, floor)
    series = back_substitute(norm, res.coeffs, res.finite)
    return series, [effective_precision(a) for a in series.coeffs]
