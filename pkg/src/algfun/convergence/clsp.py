"""Convergence-limiting singular points by series comparison and by integration.

Each class is continued sheet by sheet along straight rays from the base
point.  At every singular point s_n of the comparison plan the sheet value
at D_n (where the ray enters the perimeter of s_n) is matched against the
expansions centered at s_n.  Landing on a single-cycle analytic series (T
or E) means the sheet continues through s_n; landing on a multi-cycle or
unbounded series makes s_n the sheet's impinging singular point.  The
class CLSP is the first such point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from flint import acb

from ..numerics import abs_float, ball, to_complex, working_precision
from ..polynomial import BivariatePoly
from ..puiseux.expansion import ConjugateClass, Expansion
from ..puiseux.series import PuiseuxSeries, evaluate_series, truncation_error
from ..singular import SingularList, comparison_sequence, distance_sequence, singular_sequence
from .continuation import ContinuationError, detour_path, integrate_continuation
from .roottest import RootTestError, RootTestEstimate, root_test_estimate

COMPARISON = "comparison"
INTEGRATION = "integration"
BOTH = "both"


class UnresolvedError(RuntimeError):
    """The comparison plan was exhausted without finding a CLSP."""


class AmbiguousMatch(ValueError):
    """A sheet value matched zero or several expansion values."""


@dataclass(frozen=True)
class Landing:
    """One expansion value at D_n: series index, its class, value and error bound."""

    series_index: int
    class_index: int
    value: acb
    error: float
    analytic: bool


@dataclass
class ConvergenceResult:
    class_index: int
    branch_type: str
    members: tuple[int, ...]
    clsp_index: int | None
    radius: float
    method: str
    terms: int
    estimate: RootTestEstimate | None = None
    sheet_isp: dict[int, int] = field(default_factory=dict)
    sheet_methods: dict[int, str] = field(default_factory=dict)
    base_index: int | None = None

    @property
    def symbolic(self) -> str:
        if self.clsp_index is None:
            return "inf"
        return f"|s{self.base_index} - s{self.clsp_index}|" if self.base_index else f"|z0 - s{self.clsp_index}|"


def separation_tolerance(values: list, s_f: Fraction | float = Fraction(1, 10)) -> float:
    """s_f times the minimum pairwise distance of ``values``."""
    cs = [to_complex(ball(v)) for v in values]
    if len(cs) < 2:
        raise ValueError("separation tolerance needs at least two values")
    ms = min(abs(a - b) for i, a in enumerate(cs) for b in cs[i + 1:])
    if ms == 0:
        raise ValueError("coincident values: separation is zero")
    return float(s_f) * ms


def perimeter_entry(base: complex, target: complex, radius: float) -> complex:
    """Point where the segment base -> target crosses the target's perimeter."""
    u = (target - base) / abs(target - base)
    return target - radius * u


def series_value(P: PuiseuxSeries, z_r, terms: int | None = None) -> tuple[acb, float]:
    """Partial sum and an error bound (ball radius plus tail estimate)."""
    v = evaluate_series(P, z_r, terms)
    zr = abs(to_complex(ball(z_r)))
    tail = truncation_error(P, zr, terms)
    err = float(max(v.real.rad(), v.imag.rad())) * 2
    if tail > -math.inf:
        err += 10.0 ** tail if tail < 300 else math.inf
    return v, err


def is_analytic_landing(cls: ConjugateClass) -> bool:
    """Single-cycle and bounded at the center (type T or E)."""
    nums = cls.generator.numerators
    return cls.cycle == 1 and (not nums or nums[0] >= 0)


def landing_table(expansion: Expansion, z_r) -> list[Landing]:
    """Values of every series of ``expansion`` at relative coordinate ``z_r``."""
    rows = []
    for ci, cls in enumerate(expansion.classes):
        analytic = is_analytic_landing(cls)
        for k in range(cls.cycle):
            s = cls.member(k)
            v, err = series_value(s, z_r)
            rows.append(Landing(s.index, ci, v, err, analytic))
    rows.sort(key=lambda r: r.series_index)
    return rows


def match_landing(value: acb, table: list[Landing], s_t: float) -> Landing:
    """Unique table entry within ``s_t`` of ``value``."""
    v = to_complex(value)
    hits = [r for r in table if abs(to_complex(r.value) - v) < s_t]
    if len(hits) != 1:
        raise AmbiguousMatch(f"{len(hits)} expansion values within tolerance {s_t:.3g}")
    return hits[0]


@dataclass
class WalkSettings:
    comparison_terms: int = 128
    s_f: Fraction = Fraction(1, 10)
    margin: int = 7
    method: str = COMPARISON
    integration_digits: int = 40
    integration_escalate: int = 80
    min_digits: float = 6.0


class ConvergenceWalk:
    """Shared state for resolving every class of one base expansion.

    ``expander(index)`` returns the comparison expansion at singular point
    ``index``; results are cached so all classes reuse them.
    """

    def __init__(self, f: BivariatePoly, slist: SingularList, base_expansion: Expansion,
                 base_location: acb, base_index: int | None, base_radius: float,
                 expander: Callable[[int], Expansion], settings: WalkSettings | None = None):
        self.f = f
        self.slist = slist
        self.base = base_expansion
        self.base_location = base_location
        self.base_index = base_index
        self.base_radius = base_radius
        self.expander = expander
        self.settings = settings or WalkSettings()
        self._expansions: dict[int, Expansion] = {}
        self._tables: dict[int, tuple[list[Landing], float, complex]] = {}
        self._integrated: dict[int, list[acb]] = {}
        self.base_series = {s.index: s for s in base_expansion.all_series()}
        if base_index is not None:
            self.sequence = singular_sequence(slist, base_index)
        else:
            self.sequence = distance_sequence(slist, base_location)

    # -- geometry ---------------------------------------------------------
    @property
    def _b(self) -> complex:
        return to_complex(self.base_location)

    def distance(self, index: int) -> float:
        return abs_float(self.slist[index].location - self.base_location)

    def entry_point(self, index: int) -> complex:
        p = self.slist[index]
        return perimeter_entry(self._b, to_complex(p.location), p.perimeter_radius)

    def exit_point(self, index: int) -> complex:
        p = self.slist[index]
        u = (to_complex(p.location) - self._b) / abs(to_complex(p.location) - self._b)
        return self._b + self.base_radius * u

    # -- estimates and plan -----------------------------------------------
    def estimate(self, cls: ConjugateClass) -> RootTestEstimate | None:
        dists = [(i, self.distance(i)) for i in self.sequence]
        try:
            return root_test_estimate(cls.generator, dists)
        except RootTestError:
            return None

    def plan(self, estimates: list[RootTestEstimate | None]) -> list[int]:
        est = [e.nearest_index for e in estimates if e is not None and e.nearest_index is not None]
        if not est:
            return list(self.sequence)
        return comparison_sequence(self.sequence, est, self.settings.margin)

    # -- per-point data ---------------------------------------------------
    def expansion(self, index: int) -> Expansion:
        if index not in self._expansions:
            self._expansions[index] = self.expander(index)
        return self._expansions[index]

    def table(self, index: int) -> tuple[list[Landing], float, complex]:
        if index not in self._tables:
            d = self.entry_point(index)
            loc = self.slist[index].location
            z_r = ball(d) - loc
            rows = landing_table(self.expansion(index), z_r)
            s_t = separation_tolerance([r.value for r in rows], self.settings.s_f)
            self._tables[index] = (rows, s_t, d)
        return self._tables[index]

    def integrated(self, index: int) -> list[acb]:
        """All n base sheets continued from the base perimeter to D_index."""
        if index not in self._integrated:
            a = self.exit_point(index)
            d = self.entry_point(index)
            z_r = ball(a) - self.base_location
            starts = [evaluate_series(self.base_series[i], z_r) for i in sorted(self.base_series)]
            obstacles = []
            for p in self.slist:
                if p.index in (index, self.base_index):
                    continue
                obstacles.append((to_complex(p.location), p.perimeter_radius))
            path = detour_path(a, d, obstacles)
            res = integrate_continuation(self.f, path, starts, self.settings.integration_digits,
                                         self.settings.integration_escalate)
            self._integrated[index] = res.values
        return self._integrated[index]

    # -- sheet values -----------------------------------------------------
    def compared_value(self, sheet: int, index: int) -> acb | None:
        """Base sheet at D_index by direct series evaluation, or None when too inaccurate."""
        rows, s_t, d = self.table(index)
        z_r = ball(d) - self.base_location
        v, err = series_value(self.base_series[sheet], z_r)
        mag = abs(to_complex(v))
        if not math.isfinite(err) or err >= s_t / 10:
            return None
        if mag > 0 and -math.log10(max(err, 1e-300) / mag) < self.settings.min_digits:
            return None
        return v

    def land(self, sheet: int, index: int, method: str) -> tuple[Landing, str]:
        rows, s_t, _ = self.table(index)
        if method == COMPARISON:
            v = self.compared_value(sheet, index)
            if v is not None:
                try:
                    return match_landing(v, rows, s_t), COMPARISON
                except AmbiguousMatch:
                    pass
        v = self.integrated(index)[sheet - 1]
        return match_landing(v, rows, s_t), INTEGRATION

    # -- resolution -------------------------------------------------------
    def resolve(self, class_index: int, plan: list[int], method: str | None = None,
                estimate: RootTestEstimate | None = None) -> ConvergenceResult:
        cls = self.base.classes[class_index]
        method = method or self.settings.method
        terms = len(cls.generator)
        if cls.finite:
            return ConvergenceResult(class_index + 1, str(cls.branch_type), cls.members, None, math.inf,
                                     "finite", terms, estimate, base_index=self.base_index)
        sheet_isp: dict[int, int] = {}
        used: dict[int, str] = {}
        visited = []
        remaining = [i for i in self.sequence if i not in plan]
        for idx in list(plan) + remaining:
            visited.append(idx)
            for sheet in cls.members:
                landing, how = self.land(sheet, idx, method)
                used[sheet] = how if used.get(sheet, how) == how else "mixed"
                if not landing.analytic:
                    sheet_isp[sheet] = idx
            if sheet_isp:
                methods = set(used.values())
                tag = methods.pop() if len(methods) == 1 else "mixed"
                return ConvergenceResult(class_index + 1, str(cls.branch_type), cls.members, idx,
                                         self.distance(idx), tag, terms, estimate, sheet_isp, used,
                                         self.base_index)
        raise UnresolvedError(f"class {class_index + 1}: no CLSP among {len(visited)} singular points")

    def resolve_all(self, method: str | None = None) -> list[ConvergenceResult]:
        estimates = [self.estimate(c) for c in self.base.classes]
        plan = self.plan(estimates)
        return [self.resolve(k, plan, method, estimates[k]) for k in range(len(self.base.classes))]
