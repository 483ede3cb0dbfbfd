"""Invariants that must hold on every run: checksums, closure, integrality, decay, parity, agreement."""

import math
import random

import numpy as np
import pytest
from flint import acb

from algfun.accuracy import match_root, reference_roots
from algfun.analysis import analyze_genus
from algfun.config import RunConfig
from algfun.convergence import separation_tolerance, series_value
from algfun.fixtures import FIXTURES
from algfun.numerics import ball, is_effective_zero, to_complex, working_precision
from algfun.polynomial import parse_poly
from algfun.puiseux import evaluate_series, expand_at, symmetric_sum
from algfun.singular import singular_list
from tests.helpers import random_poly_text

RANDOM_TEXTS = [random_poly_text(random.Random(500 + k), max_w=4, max_z=3) for k in range(5)]


def _disc_points(rng, radius, count):
    out = []
    for _ in range(count):
        r = radius * math.sqrt(rng.uniform(0.05, 0.95))
        t = rng.uniform(0, 2 * math.pi)
        out.append(complex(r * math.cos(t), r * math.sin(t)))
    return out


# -- cycle check-sum --------------------------------------------------------

CHECKSUM_CENTERS = [("tc2", "origin"), ("tc2", 1), ("deg12", "origin"), ("tc4", "infinity"),
                    ("tc1", "origin"), ("iteration", "origin")]
DECAY_CASES = [(0, 12), (1, 10), (4, 8)]


@pytest.mark.parametrize("name,center", CHECKSUM_CENTERS)
def test_cycle_checksum_fixtures(name, center):
    f = FIXTURES[name].poly()
    with working_precision(60):
        ex = expand_at(f, center, 8, 60)
    assert sum(c.cycle for c in ex.classes) == f.w_degree
    assert sorted(m for c in ex.classes for m in c.members) == list(range(1, f.w_degree + 1))


@pytest.mark.parametrize("text", RANDOM_TEXTS)
def test_cycle_checksum_every_singular_point(text):
    f = parse_poly(text)
    with working_precision(60):
        sl = singular_list(f, 60)
        for p in list(sl)[:8]:
            ex = expand_at(f, p.location, 8, 60)
            assert sum(c.cycle for c in ex.classes) == f.w_degree


# -- conjugate closure ------------------------------------------------------

def test_conjugate_closure_tc1(tc1_problem, tc1_expansion):
    rng = random.Random(2024)
    with working_precision(tc1_problem.digits):
        series = tc1_expansion.all_series()
        assert len(series) == 15
        for z in _disc_points(rng, tc1_problem.base_radius, 10):
            roots = reference_roots(tc1_problem.f, z, 100)
            s_t = separation_tolerance(roots)
            used = set()
            for P in series:
                v, err = series_value(P, ball(z))
                root = match_root(v, roots, s_t)
                key = roots.index(root)
                assert key not in used, "two series landed on the same root"
                used.add(key)
                rad = float(max(root.real.rad(), root.imag.rad()))
                assert abs(to_complex(v - root)) <= err + 2 * rad
            assert len(used) == 15


# -- symmetric-sum integrality ----------------------------------------------

def test_symmetric_sum_integrality(tc1_expansion):
    with working_precision(150):
        for cls in tc1_expansion.classes:
            S = symmetric_sum(cls.generator)
            c = cls.generator.cycle
            for m, a in zip(S.numerators, S.coeffs):
                if m % c:
                    assert is_effective_zero(a), f"{cls.branch_type}: exponent {m}/{c} survives"
                elif m == 0:
                    assert not is_effective_zero(a) or cls.generator.coeffs[0] == 0


# -- residual decay ---------------------------------------------------------

@pytest.mark.parametrize("class_index,terms", DECAY_CASES)
def test_truncation_error_decay_slope(tc1_problem, tc1_expansion, class_index, terms):
    """log|error| against log|z| has slope equal to the first omitted exponent."""
    P = tc1_expansion.classes[class_index].generator
    nxt = next(m for m, a in list(zip(P.numerators, P.coeffs))[terms:] if not is_effective_zero(a))
    expected = nxt / P.cycle
    radii = np.geomspace(1e-4, 1e-3, 6) * tc1_problem.base_radius
    with working_precision(tc1_problem.digits):
        logs = []
        for r in radii:
            z = ball(complex(r * math.cos(0.3), r * math.sin(0.3)))
            roots = reference_roots(tc1_problem.f, z, 140)
            full = evaluate_series(P, z)
            root = min(roots, key=lambda x: abs(to_complex(x - full)))
            logs.append(math.log(abs(to_complex(root - evaluate_series(P, z, terms)))))
    slope = np.polyfit(np.log(radii), logs, 1)[0]
    assert slope == pytest.approx(expected, rel=0.05)


# -- Riemann-Hurwitz parity -------------------------------------------------

@pytest.mark.parametrize("text", RANDOM_TEXTS)
def test_k_parity_random(text):
    profile, g = analyze_genus(parse_poly(text), RunConfig(working_precision=40, threads=1))
    assert g.K % 2 == 0 and g.G >= 0
    assert all(sum(v) == g.D for v in profile.cycles.values())


def test_k_parity_fixtures(tc1_genus, tc4_genus):
    assert tc1_genus[1].K % 2 == 0 and tc4_genus[1].K % 2 == 0


# -- method agreement -------------------------------------------------------

def test_method_agreement(tc1_radius, tc2_radius):
    for rep in (tc1_radius, tc2_radius):
        for a, b in zip(rep.results, rep.alternate):
            if a.clsp_index is not None and b.clsp_index is not None:
                assert a.clsp_index == b.clsp_index
        assert rep.methods_agree


# -- determinism ------------------------------------------------------------

def test_expansion_is_deterministic():
    f = FIXTURES["tc1"].poly()
    with working_precision(60):
        a = expand_at(f, "origin", 32, 60)
        b = expand_at(f, "origin", 32, 60)
    for x, y in zip(a.classes, b.classes):
        assert x.members == y.members
        assert [c.mid().str(40) for c in x.generator.coeffs] == [c.mid().str(40) for c in y.generator.coeffs]


def test_sampling_is_deterministic(tc2_radius):
    from algfun.analysis import fit_class_model
    cfg = RunConfig(working_precision=60, base_terms=64, seed=9)
    r = tc2_radius.results[3]
    m1, s1 = fit_class_model(tc2_radius.problem, tc2_radius.expansion, r, cfg)
    m2, s2 = fit_class_model(tc2_radius.problem, tc2_radius.expansion, r, cfg)
    assert m1 == m2 and [x.s_a for x in s1] == [x.s_a for x in s2]
