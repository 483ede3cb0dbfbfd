"""Shared, session-cached analyses of the reference functions.

The tc1 pipeline (singular list, 256-term base series, CLSP walk
with both methods) takes minutes, so it runs once per session and every
test that needs it reads the cached result.
"""

from __future__ import annotations

import pytest

from algfun.analysis import analyze_genus, analyze_radius, expand_center, prepare
from algfun.config import RunConfig
from algfun.fixtures import FIXTURES
from algfun.numerics import working_precision

TC1_CONFIG = RunConfig(working_precision=100, base_terms=256, comparison_terms=128, method="both")
TC2_CONFIG = RunConfig(working_precision=60, base_terms=64, comparison_terms=48, method="both")
GENUS_CONFIG = RunConfig(working_precision=60)

# criterion number -> list of (label, passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


@pytest.fixture(scope="session")
def tc1():
    return FIXTURES["tc1"].poly()


@pytest.fixture(scope="session")
def tc2():
    return FIXTURES["tc2"].poly()


@pytest.fixture(scope="session")
def tc1_problem(tc1):
    return prepare(tc1, "origin", TC1_CONFIG)


@pytest.fixture(scope="session")
def tc1_expansion(tc1_problem):
    return expand_center(tc1_problem, TC1_CONFIG)


@pytest.fixture(scope="session")
def tc1_radius(tc1, tc1_problem, tc1_expansion):
    return analyze_radius(tc1, "origin", TC1_CONFIG, expansion=tc1_expansion, problem=tc1_problem)


@pytest.fixture(scope="session")
def tc2_radius(tc2):
    return analyze_radius(tc2, 2, TC2_CONFIG)


@pytest.fixture(scope="session")
def tc1_genus(tc1, tc1_problem):
    return analyze_genus(tc1, TC1_CONFIG, tc1_problem.slist)


@pytest.fixture(scope="session")
def tc4_genus():
    return analyze_genus(FIXTURES["tc4"].poly(), GENUS_CONFIG)


@pytest.fixture
def digits60():
    with working_precision(60):
        yield 60


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        for label, passed, detail in ACCEPTANCE[number]:
            terminalreporter.write_line(f"criterion {number} {label}: {'PASS' if passed else 'FAIL'}  {detail}")
