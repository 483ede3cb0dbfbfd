"""Newton polygons of (fractional) bivariate polynomials and their characteristic roots."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from flint import acb

from ..numerics import complex_key, effective_precision
from ..polynomial import BivariatePoly, FractionalPoly, PrecisionFloorError, strip_coefficient_zeros
from ..roots import Root, roots_with_multiplicity


@dataclass(frozen=True)
class Segment:
    """Lower-hull edge: points with e + lam*j == beta; characteristic poly in c."""

    start: tuple[int, Fraction]
    end: tuple[int, Fraction]
    lam: Fraction
    beta: Fraction
    characteristic: tuple[acb, ...]  # coefficients of c^0 .. c^(j_end - j_start)

    @property
    def width(self) -> int:
        return self.end[0] - self.start[0]


@dataclass(frozen=True)
class NewtonPolygon:
    support: tuple[tuple[int, Fraction], ...]
    vertices: tuple[tuple[int, Fraction], ...]
    segments: tuple[Segment, ...]
    j_min: int


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(f: FractionalPoly | BivariatePoly, max_w: int | None = None) -> NewtonPolygon:
    """Lower convex hull of the support in the (w power, z exponent) plane.

    Only points with w power <= ``max_w`` are used when it is given.
    """
    if isinstance(f, BivariatePoly):
        f = FractionalPoly.from_bivariate(f)
    lowest: dict[int, Fraction] = {}
    for e, j in f.terms:
        if max_w is not None and j > max_w:
            continue
        if j not in lowest or e < lowest[j]:
            lowest[j] = e
    if not lowest:
        raise ValueError("empty support")
    pts = sorted(lowest.items())
    hull: list = []
    for p in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    segments = []
    for (j0, e0), (j1, e1) in zip(hull, hull[1:]):
        lam = Fraction(e0 - e1) / (j1 - j0)
        beta = e0 + lam * j0
        chi = [acb(0)] * (j1 - j0 + 1)
        for (e, j), a in f.terms.items():
            if j0 <= j <= j1 and e + lam * j == beta:
                chi[j - j0] = chi[j - j0] + a
        segments.append(Segment((j0, e0), (j1, e1), lam, beta, tuple(chi)))
    return NewtonPolygon(tuple(pts), tuple(hull), tuple(segments), pts[0][0])


def characteristic_roots(seg: Segment, digits: int) -> list[Root]:
    """Nonzero roots of the segment's characteristic polynomial, sorted.

    Order: real part, then |imag|, then imag; multiplicities from clustering.
    """
    roots = roots_with_multiplicity(list(seg.characteristic), digits)
    roots = [r for r in roots if r.value != 0]
    return sorted(roots, key=lambda r: complex_key(r.value))


def polygon_iterate(fk: FractionalPoly, seg: Segment, c: acb, floor: int = 0,
                    tol: float | None = None) -> tuple[FractionalPoly, list]:
    """z^(-beta) f_k(z, z^lam (w + c)) with coefficient zeros stripped before and after.

    Returns the iterate and the removed positions (for auditing).
    """
    fk, removed_before = strip_coefficient_zeros(fk, tol)
    nxt = fk.substitute_shift(seg.lam, seg.beta, c)
    nxt, removed_after = strip_coefficient_zeros(nxt, tol)
    if floor > 0:
        worst = nxt.min_precision()
        if worst < floor:
            raise PrecisionFloorError(f"polygon iterate precision {worst} below floor {floor}")
    return nxt, removed_before + removed_after


def precision_of_terms(f: FractionalPoly) -> int:
    return min((effective_precision(a) for a in f.terms.values()), default=0)
