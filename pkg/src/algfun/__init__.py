"""Multiprecision analysis of algebraic functions defined by f(z, w) = 0.

Singular points, Puiseux expansions at finite points and infinity, radii of
convergence with their limiting singular points, fitted accuracy models, and
the ramification profile with the Riemann-Hurwitz genus.
"""

from .analysis import analyze_genus, analyze_radius, expand_center, prepare
from .config import RunConfig
from .fixtures import FIXTURES, fixture
from .polynomial import BivariatePoly, parse_poly
from .singular import singular_list

__version__ = "0.1.0"

__all__ = [
    "BivariatePoly",
    "FIXTURES",
    "RunConfig",
    "analyze_genus",
    "analyze_radius",
    "expand_center",
    "fixture",
    "parse_poly",
    "prepare",
    "singular_list",
]
