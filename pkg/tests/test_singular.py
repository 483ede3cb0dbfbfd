import random
from fractions import Fraction

import mpmath
import pytest
import sympy

from algfun.fixtures import FIXTURES
from algfun.numerics import ball, to_complex, working_precision
from algfun.polynomial import parse_poly
from algfun.singular import (
    comparison_sequence,
    distance_sequence,
    singular_list,
    singular_sequence,
    to_csv,
    to_json,
)
from tests.helpers import random_poly_text

Z, W = sympy.symbols("z w")


def test_tc2_singular_points_exact():
    with working_precision(60):
        sl = singular_list(FIXTURES["tc2"].poly(), 60)
    assert len(sl) == 2
    assert sl[1].location == 0
    assert (sl[2].location - 1).contains(0)
    assert sl[1].perimeter_radius == pytest.approx(1 / 3)


def test_single_point_perimeter():
    with working_precision(40):
        sl = singular_list(parse_poly("w^2 - z"), 40)
    assert len(sl) == 1 and sl[1].is_qset
    assert sl[1].perimeter_radius == pytest.approx(1 / 3)


def test_tc1_counts_and_poles(tc1_problem):
    sl = tc1_problem.slist
    assert len(sl) == 179
    assert len(sl.poles()) == 2
    mods = [p.modulus for p in sl]
    assert mods == sorted(mods)
    assert sl[1].modulus == 0


@pytest.mark.parametrize("seed", range(4))
def test_random_against_sympy_discriminant(seed):
    text = random_poly_text(random.Random(100 + seed), max_w=4, max_z=3)
    f = parse_poly(text)
    expr = sympy.sympify(text.replace("^", "**"), locals={"z": Z, "w": W})
    disc = sympy.Poly(sympy.resultant(expr, sympy.diff(expr, W), W), Z)
    ref = [complex(r) for r in disc.nroots(n=40, maxsteps=200)]
    with working_precision(60):
        sl = singular_list(f, 60)
    ours = [to_complex(p.location) for p in sl]
    assert len({(round(r.real, 8), round(r.imag, 8)) for r in ref}) == len(ours)
    for r in ref:
        assert min(abs(r - o) for o in ours) < 1e-12


def test_sequences():
    with working_precision(60):
        sl = singular_list(FIXTURES["tc1"].poly(), 60)
        seq = singular_sequence(sl, 1)
        assert seq[0] == 2 and 1 not in seq and len(seq) == 178
        dseq = distance_sequence(sl, ball(0))
        assert dseq[0] == 1
    assert comparison_sequence(list(range(2, 180)), [118, 31], 7) == list(range(2, 126))


def test_serialization():
    with working_precision(40):
        sl = singular_list(FIXTURES["tc2"].poly(), 40)
    assert to_csv(sl).splitlines()[0] == "index,location,re,im,modulus,pole,qset,perimeter"
    assert '"total": 2' in to_json(sl)
