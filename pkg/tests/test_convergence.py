import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from flint import acb

from algfun.convergence import (
    AmbiguousMatch,
    Arc,
    ContinuationError,
    Landing,
    Line,
    RootTestError,
    RootTracker,
    detour_path,
    integrate_continuation,
    lower_bound_fit,
    match_landing,
    perimeter_entry,
    root_test_estimate,
    separation_tolerance,
)
from algfun.numerics import ball, to_complex, working_precision
from algfun.polynomial import parse_poly
from algfun.puiseux import PuiseuxSeries


def _series(cycle, nums, coeffs):
    with working_precision(60):
        return PuiseuxSeries(cycle, tuple(nums), tuple(ball(c) for c in coeffs))


def test_root_test_geometric_series():
    # 1/(1 - z/R): |a_k|^(-1/k) = R exactly
    R = 0.7
    P = _series(1, range(1, 200), [R ** -k for k in range(1, 200)])
    est = root_test_estimate(P, [(1, 0.5), (2, 0.69), (3, 0.9)])
    assert est.radius == pytest.approx(R, rel=1e-6)
    assert est.nearest_index == 2


def test_root_test_log_series_extrapolates():
    # -log(1 - z/R) = sum (z/R)^k / k: the points approach R only as 1/k -> 0
    R = 2.5
    P = _series(1, range(1, 400), [R ** -k / k for k in range(1, 400)])
    est = root_test_estimate(P)
    raw = P.coeffs[-1]
    naive = abs(complex(to_complex(raw))) ** (-1 / 399)
    assert abs(est.radius - R) < abs(naive - R)
    assert est.radius == pytest.approx(R, rel=0.01)


def test_root_test_fractional_cycle():
    # sum (z^(1/3)/r)^k converges for |z| < r^3
    r = 0.8
    P = _series(3, range(1, 300), [r ** -k for k in range(1, 300)])
    assert root_test_estimate(P).radius == pytest.approx(r ** 3, rel=1e-6)


def test_root_test_needs_terms_and_finite_is_infinite():
    with pytest.raises(RootTestError):
        root_test_estimate(_series(1, [1, 2, 3], [1, 1, 1]))
    P = PuiseuxSeries(1, (0, 1), (acb(1), acb(1)), finite=True)
    assert root_test_estimate(P).infinite


def test_lower_bound_fit_stays_below():
    xs = np.linspace(0.01, 0.2, 40)
    ys = 1 + 3 * xs + 0.01 * np.sin(50 * xs)
    coef, gap = lower_bound_fit(xs, ys, 1)
    assert np.all(np.polyval(coef[::-1], xs) <= ys + 1e-9)
    assert gap >= 0


def test_tc1_estimates_near_radius(tc1_radius):
    for r in tc1_radius.results:
        assert r.estimate.radius == pytest.approx(r.radius, rel=0.1)


def test_perimeter_geometry():
    d = perimeter_entry(0j, 2 + 0j, 0.5)
    assert d == pytest.approx(1.5)
    assert separation_tolerance([acb(0), acb(1), acb(3)], Fraction(1, 10)) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        separation_tolerance([acb(1), acb(1)])


def test_match_landing_uniqueness():
    table = [Landing(1, 0, acb(0), 0.0, True), Landing(2, 1, acb(1), 0.0, False)]
    assert match_landing(acb(0.01), table, 0.1).series_index == 1
    with pytest.raises(AmbiguousMatch):
        match_landing(acb(0.5), table, 0.1)
    with pytest.raises(AmbiguousMatch):
        match_landing(acb(0.5), table, 0.6)


def test_detour_avoids_discs():
    pieces = detour_path(0j, 4 + 0j, [(2 + 0.1j, 0.5)])
    assert [type(p) for p in pieces] == [Line, Arc, Line]
    arc = pieces[1]
    for t in np.linspace(0, 1, 11):
        assert abs(arc.point(t) - (2 + 0.1j)) == pytest.approx(0.5)
    assert pieces[0].start == 0 and pieces[-1].end == 4
    # the short arc bulges away from the center, i.e. below the axis
    assert arc.point(0.5).imag < 0
    with pytest.raises(ContinuationError):
        detour_path(0j, 2 + 0j, [(2, 0.5)])


def test_track_square_root_sheets():
    f = parse_poly("w^2 - z")
    res = RootTracker(f, 40).track([Line(1, 4)], [1, -1])
    assert [to_complex(v) for v in res.values] == [pytest.approx(2), pytest.approx(-2)]


def test_half_loop_swaps_sheets():
    f = parse_poly("w^2 - z")
    loop = [Arc(0j, 1.0, 0.0, math.pi), Arc(0j, 1.0, math.pi, 2 * math.pi)]
    res = integrate_continuation(f, loop, [1, -1], 40)
    assert [to_complex(v) for v in res.values] == [pytest.approx(-1), pytest.approx(1)]


def test_track_matches_closed_form_cubic():
    # w^3 = 1 + z: roots are (1+z)^(1/3) times cube roots of unity, continued along a line
    f = parse_poly("w^3 - 1 - z")
    starts = [cmath.exp(2j * math.pi * k / 3) for k in range(3)]
    res = RootTracker(f, 40).track([Line(0, 2 + 1j)], starts)
    base = (3 + 1j) ** (1 / 3)
    for k, v in enumerate(res.values):
        assert to_complex(v) == pytest.approx(base * starts[k], rel=1e-12)


def test_tc2_both_methods(tc2_radius):
    assert [r.clsp_index for r in tc2_radius.results] == [1, 1, 1, 1]
    assert [r.clsp_index for r in tc2_radius.alternate] == [1, 1, 1, 1]
    assert all(r.radius == pytest.approx(1.0) for r in tc2_radius.results)
    assert tc2_radius.methods_agree


def test_finite_class_has_infinite_radius():
    from algfun.analysis import analyze_radius
    from algfun.config import RunConfig
    from algfun.fixtures import FIXTURES
    rep = analyze_radius(FIXTURES["tc2"].poly(), "origin", RunConfig(working_precision=40, base_terms=32,
                                                                      comparison_terms=32))
    (r,) = rep.results
    assert math.isinf(r.radius) and r.clsp_index is None and r.method == "finite"
