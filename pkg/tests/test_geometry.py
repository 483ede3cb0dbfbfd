import pytest

from algfun.config import RunConfig
from algfun.fixtures import FIXTURES
from algfun.geometry import CycleError, RamificationProfile, format_cycles, riemann_hurwitz
from algfun.analysis import analyze_genus
from algfun.polynomial import parse_poly


def test_format_cycles():
    assert format_cycles((2,) + (1,) * 13) == "(2,[13,1])"
    assert format_cycles((1,) * 15) == "[15,1]"
    assert format_cycles((5, 2) + (1,) * 28) == "(5,2,[28,1])"
    assert format_cycles((1, 2, 3, 4, 5)) == "(5,4,3,2,1)"


def test_square_root_genus():
    profile, g = analyze_genus(parse_poly("w^2 - z"), RunConfig(working_precision=30))
    assert profile.cycles == {1: (2,), "infinity": (2,)}
    assert (g.K, g.G) == (2, 0)


def test_tc2_genus():
    profile, g = analyze_genus(FIXTURES["tc2"].poly(), RunConfig(working_precision=40))
    assert (g.K, g.D, g.G) == (6, 4, 0)


def test_tc1_profile(tc1_genus):
    profile, g = tc1_genus
    assert (g.K, g.G) == (200, 86)
    groups = {format_cycles(sizes): keys for keys, sizes in profile.grouped()}
    assert groups["(5,4,3,2,1)"] == [1]
    assert len(groups["(2,[13,1])"]) == 174
    assert groups["(9,[6,1])"] == [110, 111]
    assert groups["[15,1]"] == [144, 145, "infinity"]


def test_tc4_profile(tc4_genus):
    profile, g = tc4_genus
    assert (g.K, g.G) == (132, 32)
    assert profile.cycles["infinity"] == (5, 2) + (1,) * 28
    assert sum(1 for k in profile.cycles if k != "infinity") == 127
    assert all(v == (2,) + (1,) * 33 for k, v in profile.cycles.items() if k != "infinity")


def test_odd_sum_raises_with_suspects():
    p = RamificationProfile(3)
    p.add(1, (2, 1))
    p.add(2, (3,))
    with pytest.raises(CycleError) as err:
        riemann_hurwitz(p)
    assert err.value.suspects == [2]


def test_profile_sizes_must_sum_to_degree():
    with pytest.raises(ValueError):
        RamificationProfile(3).add(1, (2, 2))


def test_parallel_profile_matches_serial():
    f = FIXTURES["tc2"].poly()
    a = analyze_genus(f, RunConfig(working_precision=30, threads=1))
    b = analyze_genus(f, RunConfig(working_precision=30, threads=2))
    assert a[0].cycles == b[0].cycles and a[1] == b[1]
