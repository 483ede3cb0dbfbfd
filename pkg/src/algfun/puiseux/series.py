"""Puiseux series values: storage, evaluation, conjugation and branch types."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from flint import acb, acb_poly, arb

from ..numerics import (
    ball,
    effective_precision,
    is_effective_zero,
    log2_abs_mid,
    principal_root,
    to_complex,
    unit_root,
)


@dataclass(frozen=True)
class BranchType:
    """Branch taxonomy label: T, E, L(q), P(p,q), F(p,q) or V(p,q)."""

    kind: str
    p: int | None = None
    q: int | None = None

    def __str__(self):
        if self.kind in ("T", "E"):
            return self.kind
        if self.kind == "L":
            return f"L({self.q})"
        return f"{self.kind}({self.p},{self.q})"

    @property
    def is_analytic_single(self) -> bool:
        return self.kind in ("T", "E")


@dataclass(frozen=True)
class PuiseuxSeries:
    """sum_k a_k z^(m_k / c) about a center (relative coordinate z).

    ``finite`` marks an exact polynomial solution (all omitted terms vanish).
    """

    cycle: int
    numerators: tuple[int, ...]
    coeffs: tuple[acb, ...]
    finite: bool = False
    index: int = 0

    def __post_init__(self):
        if len(self.numerators) != len(self.coeffs):
            raise ValueError("numerators and coefficients differ in length")
        if any(b <= a for a, b in zip(self.numerators, self.numerators[1:])):
            raise ValueError("exponent numerators must be strictly increasing")

    def __len__(self):
        return len(self.coeffs)

    @property
    def exponents(self) -> list[Fraction]:
        return [Fraction(m, self.cycle) for m in self.numerators]

    def truncate(self, terms: int) -> "PuiseuxSeries":
        finite = self.finite and terms >= len(self)
        return replace(self, numerators=self.numerators[:terms], coeffs=self.coeffs[:terms], finite=finite)

    def reduced(self) -> "PuiseuxSeries":
        """Same series with the smallest cycle size that expresses its exponents."""
        g = self.cycle
        for m in self.numerators:
            g = math.gcd(g, m)
        if g <= 1:
            return self
        return replace(self, cycle=self.cycle // g, numerators=tuple(m // g for m in self.numerators))

    def min_precision(self) -> int:
        return min((effective_precision(a) for a in self.coeffs), default=0)


def evaluate_series(P: PuiseuxSeries, z_r, terms: int | None = None) -> acb:
    """Partial sum over the first ``terms`` terms at relative coordinate ``z_r``.

    The root z_r^(1/c) is the principal value, computed once and powered.
    """
    z_r = ball(z_r)
    n = len(P) if terms is None else min(terms, len(P))
    if n == 0:
        return acb(0)
    nums = P.numerators[:n]
    if z_r == 0:
        if nums[0] < 0:
            raise ZeroDivisionError("series with negative exponents evaluated at its center")
        return P.coeffs[0] if nums[0] == 0 else acb(0)
    r = principal_root(z_r, P.cycle)
    base = nums[0]
    dense = [acb(0)] * (nums[-1] - base + 1)
    for m, a in zip(nums, P.coeffs[:n]):
        dense[m - base] = a
    total = acb_poly(dense)(r)
    if base != 0:
        total *= r ** base
    return total


def term_magnitudes(P: PuiseuxSeries, z_abs: float, terms: int | None = None) -> list[float]:
    """log10 |a_k| |z|^(m_k/c) for the first ``terms`` terms."""
    n = len(P) if terms is None else min(terms, len(P))
    lz = math.log10(z_abs) if z_abs > 0 else -math.inf
    out = []
    for m, a in zip(P.numerators[:n], P.coeffs[:n]):
        out.append(log2_abs_mid(a) * math.log10(2) + lz * m / P.cycle)
    return out


def truncation_error(P: PuiseuxSeries, z_abs: float, terms: int | None = None) -> float:
    """Tail estimate (log10) from the magnitudes of the last stored terms.

    Finite series have no tail (returns -inf when all terms are used).
    """
    n = len(P) if terms is None else min(terms, len(P))
    if P.finite and n >= len(P):
        return -math.inf
    mags = term_magnitudes(P, z_abs, n)
    if not mags:
        return math.inf
    window = max(4, n // 20)
    tail = max(mags[-window:])
    return tail + 1.0


def conjugate_series(P: PuiseuxSeries, j: int) -> PuiseuxSeries:
    """Replace z^(1/c) by exp(2 pi i j / c) z^(1/c)."""
    c = P.cycle
    if c == 1 or j % c == 0:
        return P
    coeffs = tuple(a * unit_root(c, (j * m) % c) for m, a in zip(P.numerators, P.coeffs))
    return replace(P, coeffs=coeffs)


def series_order(P: PuiseuxSeries, terms: int) -> int:
    """Highest integer power reached by the first ``terms`` terms: floor(m/c) of the last one."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    m = P.numerators[min(terms, len(P)) - 1]
    return m // P.cycle


def term_for_order(P: PuiseuxSeries, order: int) -> int:
    """Smallest term count whose order reaches ``order`` (clamped to the series length)."""
    for k, m in enumerate(P.numerators, start=1):
        if m // P.cycle >= order:
            return k
    return len(P)


def classify_branch(P: PuiseuxSeries, removable: bool = False) -> BranchType:
    """Branch type from the exponent pattern.

    ``removable`` marks a single-cycle series whose center value is a
    multiple root of f(center, .), which makes it type E.
    """
    P = P.reduced()
    c = P.cycle
    nums = P.numerators
    if not nums:
        return BranchType("E" if removable else "T")
    if c == 1:
        if nums[0] < 0:
            return BranchType("L", None, nums[0])
        return BranchType("E" if removable else "T")
    if nums[0] < 0:
        return BranchType("P", c, nums[0])
    nonzero = [m for m in nums if m != 0]
    q = nonzero[0]
    if q % c == 0:
        frac = [m for m in nonzero if m % c != 0]
        q = frac[0] if frac else q
        return BranchType("F", c, q)
    return BranchType("F" if q > c else "V", c, q)


def to_lines(P: PuiseuxSeries) -> list[str]:
    """Dump as ``m/c <tab> re <tab> im <tab> radius_exponent`` lines."""
    lines = []
    for m, a in zip(P.numerators, P.coeffs):
        rad = max(float(a.real.rad()), float(a.imag.rad()))
        rexp = "-inf" if rad == 0 else str(math.floor(math.log10(rad)))
        digits = max(1, min(effective_precision(a), 60))
        lines.append(f"{m}/{P.cycle}\t{a.real.mid().str(digits, radius=False)}\t"
                     f"{a.imag.mid().str(digits, radius=False)}\t{rexp}")
    return lines


def symmetric_sum(P: PuiseuxSeries) -> PuiseuxSeries:
    """sum_j conjugate_series(P, j): non-integer exponents cancel."""
    total = [acb(0)] * len(P)
    for j in range(P.cycle):
        Q = conjugate_series(P, j)
        total = [t + a for t, a in zip(total, Q.coeffs)]
    return replace(P, coeffs=tuple(total))


def derivative_limit(P: PuiseuxSeries) -> acb | None:
    """Limit of dw/dz at the center along the branch; None when it is unbounded.

    Only integer-power branches without poles have a finite limit: the
    coefficient of z^1.  A fractional exponent below 1 makes the slope blow up.
    """
    P = P.reduced()
    for m, a in zip(P.numerators, P.coeffs):
        if a == 0:
            continue
        if m < 0 or (0 < m < P.cycle):
            return None
        if m == P.cycle:
            return a
        if m > P.cycle:
            break
    return acb(0)
