"""End-to-end pipeline shared by the CLI and the acceptance suite.

Every stage runs at the configuration's internal precision (working digits
plus guard digits); expansions halt when a coefficient falls below the
precision floor.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

from flint import acb

from .accuracy import AccuracyModel, ModelError, default_orders, default_radius_grid, fit_accuracy_model, \
    sample_accuracy
from .config import RunConfig
from .convergence import BOTH, COMPARISON, INTEGRATION, ConvergenceResult, ConvergenceWalk, WalkSettings
from .geometry import GenusReport, RamificationProfile, ramification_profile, riemann_hurwitz
from .numerics import abs_float, ball, working_precision
from .polynomial import BivariatePoly, infinity_transform
from .puiseux import INFINITY, ORIGIN, Expansion, expand_at
from .singular import SingularList, singular_list


def parse_center(text: str | int) -> int | str:
    """A 1-based singular index, ``"origin"`` or ``"infinity"``."""
    if isinstance(text, int):
        return text
    t = str(text).strip().lower()
    if t in (ORIGIN, "0"):
        return ORIGIN
    if t in (INFINITY, "inf"):
        return INFINITY
    t = t[1:] if t.startswith("s") else t
    try:
        k = int(t)
    except ValueError:
        raise ValueError(f"center must be a singular index, 'origin' or 'infinity', not {text!r}") from None
    if k < 1:
        raise ValueError("singular indices start at 1")
    return k


def default_threads(cfg: RunConfig) -> int:
    return cfg.threads or os.cpu_count() or 1


@dataclass
class Problem:
    """A function set up for expansion about one center.

    For the point at infinity ``local_f`` is the transformed polynomial and
    its singular list replaces the original one; otherwise ``local_f`` is f.
    """

    f: BivariatePoly
    local_f: BivariatePoly
    slist: SingularList
    center: int | str
    base_location: acb
    base_index: int | None
    base_radius: float
    digits: int


def prepare(f: BivariatePoly, center, cfg: RunConfig, slist: SingularList | None = None) -> Problem:
    center = parse_center(center)
    digits = cfg.internal_digits
    with working_precision(digits):
        if center == INFINITY:
            local_f = infinity_transform(f)
            slist = singular_list(local_f, digits, cfg.perimeter_factor)
            loc = acb(0)
        else:
            local_f = f
            slist = slist or singular_list(f, digits, cfg.perimeter_factor)
            loc = acb(0) if center == ORIGIN else slist[center].location
        point = slist.locate(loc)
        if point is not None:
            radius = point.perimeter_radius
        elif len(slist):
            radius = float(cfg.perimeter_factor) * min(abs_float(p.location - loc) for p in slist)
        else:
            radius = 1.0
        if not math.isfinite(radius):
            radius = 1.0  # lone singular point: any circle works
    return Problem(f, local_f, slist, center, loc, point.index if point else None, radius, digits)


def expand_center(problem: Problem, cfg: RunConfig, terms: int | None = None) -> Expansion:
    """Base expansion of all conjugate classes about the problem's center."""
    with working_precision(problem.digits):
        return expand_at(problem.local_f, problem.base_location, terms or cfg.base_terms, problem.digits,
                         cfg.floor, cfg.nzm)


def comparison_expander(problem: Problem, cfg: RunConfig):
    def expander(index: int) -> Expansion:
        with working_precision(problem.digits):
            return expand_at(problem.local_f, problem.slist[index].location, cfg.comparison_terms,
                             problem.digits, cfg.comparison_floor, cfg.nzm)
    return expander


@dataclass
class RadiusReport:
    problem: Problem
    expansion: Expansion
    results: list[ConvergenceResult]
    alternate: list[ConvergenceResult] | None = None  # integration results when both methods ran
    models: dict[int, AccuracyModel] = field(default_factory=dict)

    @property
    def methods_agree(self) -> bool | None:
        if self.alternate is None:
            return None
        return [r.clsp_index for r in self.results] == [r.clsp_index for r in self.alternate]

    def rows(self) -> list[dict]:
        """Summary rows: Type, CLSP, R, Terms and the accuracy-model coefficients."""
        out = []
        for r in self.results:
            m = self.models.get(r.class_index)
            row = {"Class": r.class_index, "Type": r.branch_type, "Members": len(r.members),
                   "CLSP": "-" if r.clsp_index is None else r.clsp_index,
                   "R": r.radius, "Terms": r.terms, "Method": r.method,
                   "R_est": r.estimate.radius if r.estimate is not None else None}
            for key in ("a", "b", "c", "d"):
                row[key] = getattr(m, key) if m else None
            row["Var"] = m.variance if m else None
            out.append(row)
        return out


def walk_settings(cfg: RunConfig) -> WalkSettings:
    return WalkSettings(cfg.comparison_terms, cfg.separation_factor, cfg.comparison_margin, cfg.method,
                        cfg.integration_digits, cfg.integration_escalate)


def analyze_radius(f: BivariatePoly, center, cfg: RunConfig, expansion: Expansion | None = None,
                   problem: Problem | None = None, with_accuracy: bool = False) -> RadiusReport:
    """Radius of convergence and CLSP of every conjugate class at ``center``."""
    problem = problem or prepare(f, center, cfg)
    expansion = expansion or expand_center(problem, cfg)
    with working_precision(problem.digits):
        walk = ConvergenceWalk(problem.local_f, problem.slist, expansion, problem.base_location,
                               problem.base_index, problem.base_radius, comparison_expander(problem, cfg),
                               walk_settings(cfg))
        if cfg.method == BOTH:
            results = walk.resolve_all(COMPARISON)
            alternate = walk.resolve_all(INTEGRATION)
        else:
            results = walk.resolve_all(cfg.method)
            alternate = None
    report = RadiusReport(problem, expansion, results, alternate)
    if with_accuracy:
        for r in results:
            if math.isfinite(r.radius):
                try:
                    report.models[r.class_index] = fit_class_model(problem, expansion, r, cfg)[0]
                except ModelError:
                    pass
    return report


def fit_class_model(problem: Problem, expansion: Expansion, result: ConvergenceResult, cfg: RunConfig):
    """Sample the class generator inside its disc and fit the accuracy model."""
    cls = expansion.classes[result.class_index - 1]
    P = cls.generator
    with working_precision(problem.digits):
        samples = sample_accuracy(expansion.local, P, result.radius, default_radius_grid(),
                                  default_orders(P, cfg.orders_per_fit), cfg.samples_per_cell, cfg.seed,
                                  problem.digits, float(cfg.separation_factor))
    return fit_accuracy_model(samples), samples


def analyze_genus(f: BivariatePoly, cfg: RunConfig,
                  slist: SingularList | None = None) -> tuple[RamificationProfile, GenusReport]:
    digits = cfg.internal_digits
    with working_precision(digits):
        slist = slist or singular_list(f, digits, cfg.perimeter_factor)
        profile = ramification_profile(f, slist, digits, True, threads=default_threads(cfg),
                                       perimeter_factor=cfg.perimeter_factor)
    return profile, riemann_hurwitz(profile)
