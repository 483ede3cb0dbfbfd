import math
from fractions import Fraction

import pytest
from flint import acb

from algfun.fixtures import FIXTURES
from algfun.numerics import ball, effective_precision, is_effective_zero, to_complex, working_precision
from algfun.polynomial import FractionalPoly, PrecisionFloorError, parse_poly
from algfun.puiseux import (
    ChecksumError,
    Leaf,
    PuiseuxSeries,
    characteristic_roots,
    classify_branch,
    conjugate_series,
    derivative_limit,
    evaluate_series,
    expand_at,
    group_conjugate_classes,
    initial_segments,
    newton_iterate_series,
    newton_polygon,
    normalize_for_iteration,
    series_order,
    symmetric_sum,
    term_for_order,
)
from algfun.puiseux.polygon import Segment
from algfun.puiseux.series import BranchType


def test_polygon_square_root(digits60):
    poly = newton_polygon(parse_poly("w^2 - z"))
    assert len(poly.segments) == 1
    seg = poly.segments[0]
    assert seg.lam == Fraction(1, 2)
    roots = characteristic_roots(seg, 60)
    assert [round(to_complex(r.value).real) for r in roots] == [-1, 1]


def test_polygon_tc2_origin(digits60):
    poly = newton_polygon(FIXTURES["tc2"].poly())
    assert [s.lam for s in poly.segments] == [Fraction(0)]
    roots = characteristic_roots(poly.segments[0], 60)
    assert len(roots) == 1 and roots[0].multiplicity == 4  # (w-1)^4: one polygon pass needed
    leaves = initial_segments(FIXTURES["tc2"].poly(), 60)
    assert [l.lambdas for l in leaves] == [(Fraction(0), Fraction(1, 4))] * 4
    assert normalize_for_iteration(leaves[0]).d == 4


def test_double_characteristic_root(digits60):
    seg = Segment((0, Fraction(0)), (2, Fraction(0)), Fraction(0), Fraction(0), (acb(1), acb(-2), acb(1)))
    roots = characteristic_roots(seg, 60)
    assert len(roots) == 1 and roots[0].multiplicity == 2


def test_twelve_degree_starts(digits60):
    leaves = initial_segments(FIXTURES["deg12"].poly(), 60)
    assert len(leaves) == 12
    leading = sorted(l.leading_exponent for l in leaves)
    assert leading.count(Fraction(-1, 4)) == 4
    assert all(l.cycle == 4 for l in leaves)


def test_twelve_degree_classes(digits60):
    ex = expand_at(FIXTURES["deg12"].poly(), "origin", 24, 60)
    assert [set(c.members) for c in ex.classes] == [{1, 2, 3, 4}, {5, 6, 7, 8}, {9, 10, 11, 12}]
    poles = [c for c in ex.classes if c.generator.numerators[0] < 0]
    assert len(poles) == 1
    assert abs(abs(to_complex(poles[0].generator.coeffs[0])) - 1.973) < 1e-3


def test_normalization_example(digits60):
    # fhat = 1 + z + z^(1/2) w + w^2 is already scaled; the ladder has a half-integer slope
    fhat = FractionalPoly({(Fraction(0), 0): acb(1), (Fraction(1), 0): acb(1),
                           (Fraction(1, 2), 1): acb(1), (Fraction(0), 2): acb(1)})
    leaf = Leaf((), fhat, Fraction(0), Fraction(0), acb(0, 1), Fraction(0), (Fraction(1, 2),))
    norm = normalize_for_iteration(leaf)
    assert norm.d == 2
    assert {k: to_complex(v) for k, v in norm.fbar.coeffs.items()} == {(0, 0): 1, (2, 0): 1, (1, 1): 1, (0, 2): 1}
    # iterating from w0 = i solves fbar to the requested order
    res = newton_iterate_series(norm, acb(0, 1), 40)
    W = res.coeffs
    z = ball("0.01")
    w = sum((a * z ** k for k, a in enumerate(W)), acb(0))
    assert abs(to_complex(norm.fbar.evaluate(z, w))) < 1e-55


def test_integer_ladder_keeps_polynomial(digits60):
    fhat = FractionalPoly({(Fraction(0), 0): acb(-1), (Fraction(1), 1): acb(1), (Fraction(0), 2): acb(1)})
    leaf = Leaf((), fhat, Fraction(0), Fraction(0), acb(1), Fraction(0), (Fraction(1),))
    norm = normalize_for_iteration(leaf)
    assert norm.d == 1
    assert set(norm.fbar.coeffs) == {(0, 0), (1, 1), (0, 2)}


def test_square_root_is_finite(digits60):
    ex = expand_at(parse_poly("w^2 - z"), "origin", 16, 60)
    (cls,) = ex.classes
    assert cls.finite and cls.generator.numerators == (1,) and cls.generator.cycle == 2
    assert str(cls.branch_type) == "V(2,1)"


def test_tc2_origin_polynomial(digits60):
    ex = expand_at(FIXTURES["tc2"].poly(), "origin", 64, 60)
    (cls,) = ex.classes
    P = cls.generator
    assert cls.finite and cls.cycle == 4
    assert P.numerators == (0, 1, 2, 3)
    assert [to_complex(a) for a in P.coeffs] == [1, -1, 1, -1]
    # 1 - 1/2 + 1/4 - 1/8 on the generator; 1 + 1/2 + 1/4 + 1/8 on its real conjugate
    assert to_complex(evaluate_series(P, ball(Fraction(1, 16)))) == pytest.approx(0.625, abs=1e-15)
    values = sorted(to_complex(evaluate_series(cls.member(k), ball(Fraction(1, 16)))).real for k in range(4))
    assert values == [pytest.approx(0.625), pytest.approx(0.75), pytest.approx(0.75), pytest.approx(1.875)]
    for k in range(4):
        coeffs = [to_complex(a) for a in cls.member(k).coeffs]
        assert coeffs[0] == 1 and all(abs(abs(c) - 1) < 1e-40 for c in coeffs)


def test_tc2_removable_at_one(digits60):
    ex = expand_at(FIXTURES["tc2"].poly(), 1, 48, 60)
    assert [str(c.branch_type) for c in ex.classes] == ["E", "E", "E", "T"]
    limits = sorted((to_complex(derivative_limit(c.generator)) for c in ex.classes[:3]), key=lambda c: c.imag)
    assert limits == [pytest.approx(complex(-0.5, -0.5)), pytest.approx(-0.5), pytest.approx(complex(-0.5, 0.5))]
    assert to_complex(ex.classes[3].generator.coeffs[0]) == pytest.approx(4)


def test_tc1_origin_types(tc1_expansion):
    types = [str(c.branch_type) for c in tc1_expansion.classes]
    assert types == ["F(5,16)", "F(4,9)", "F(3,4)", "V(2,1)", "T"]
    assert [c.cycle for c in tc1_expansion.classes] == [5, 4, 3, 2, 1]


def test_tc4_infinity_classes(digits60):
    ex = expand_at(FIXTURES["tc4"].poly(), "infinity", 8, 60)
    assert sorted((c.cycle for c in ex.classes), reverse=True) == [5, 2] + [1] * 28


def test_classify_branch_taxonomy():
    def P(c, nums):
        return PuiseuxSeries(c, tuple(nums), tuple(acb(1) for _ in nums))
    assert classify_branch(P(1, [0, 1, 2])) == BranchType("T")
    assert classify_branch(P(1, [0, 1]), removable=True) == BranchType("E")
    assert str(classify_branch(P(1, [-2, 0]))) == "L(-2)"
    assert str(classify_branch(P(3, [-1, 0]))) == "P(3,-1)"
    assert str(classify_branch(P(5, [0, 16, 21]))) == "F(5,16)"
    assert str(classify_branch(P(2, [1, 2, 3]))) == "V(2,1)"
    assert str(classify_branch(P(4, [0, 4, 9]))) == "F(4,9)"


def test_conjugation_and_symmetric_sum(digits60):
    P = PuiseuxSeries(4, (0, 1, 4, 6), (acb(1), acb(2), acb(3), acb(5)))
    Q = conjugate_series(P, 1)
    assert to_complex(Q.coeffs[1]) == pytest.approx(2j)
    assert to_complex(Q.coeffs[3]) == pytest.approx(-5)
    S = symmetric_sum(P)
    assert [to_complex(a) for a in S.coeffs] == [pytest.approx(4), pytest.approx(0), pytest.approx(12),
                                                pytest.approx(0)]


def test_order_and_term_lookup():
    P = PuiseuxSeries(16, tuple(range(0, 400, 5)), tuple(acb(1) for _ in range(80)))
    assert series_order(P, 1) == 0
    assert series_order(P, 80) == 395 // 16
    assert term_for_order(P, 10) == 33  # first numerator >= 160 is 160 at position 33
    with pytest.raises(ValueError):
        series_order(P, 0)


def test_grouping_rejects_bad_checksum(digits60):
    leaves = initial_segments(parse_poly("w^2 - z"), 60)
    with pytest.raises(ChecksumError):
        group_conjugate_classes(leaves, 3)


def test_precision_floor_halts(tc1_problem):
    with working_precision(60):
        with pytest.raises(PrecisionFloorError):
            expand_at(tc1_problem.f, tc1_problem.slist[2].location, 128, 60, floor=55)


def test_series_precision_is_tracked(digits60):
    ex = expand_at(FIXTURES["tc1"].poly(), "origin", 64, 60)
    for c in ex.classes:
        assert c.profile, "precision profile recorded"
        assert c.generator.min_precision() > 20
