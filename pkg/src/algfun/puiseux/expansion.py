"""Expansion sets at a center: conjugate classes, generators and branch types."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from flint import acb

from ..numerics import ball, is_effective_zero
from ..polynomial import BivariatePoly, infinity_transform, strip_coefficient_zeros, translate_z
from .iteration import Leaf, expand_leaf, initial_segments
from .series import BranchType, PuiseuxSeries, classify_branch, conjugate_series, series_order

INFINITY = "infinity"
ORIGIN = "origin"


class ChecksumError(ArithmeticError):
    """Cycle sizes of an expansion set do not add up to the w-degree."""


@dataclass
class ConjugateClass:
    """One c-cycle branch: a generator series and the indices of its c members."""

    generator: PuiseuxSeries
    members: tuple[int, ...]
    branch_type: BranchType
    leaf: Leaf
    profile: list[int] = field(default_factory=list)
    conjugation: tuple[int, ...] = ()

    @property
    def cycle(self) -> int:
        return len(self.members)

    @property
    def finite(self) -> bool:
        return self.generator.finite

    @property
    def order_reached(self) -> int:
        return series_order(self.generator, len(self.generator)) if len(self.generator) else 0

    def member(self, k: int) -> PuiseuxSeries:
        """k-th member (0-based within the class) by conjugation of the generator."""
        return replace(conjugate_series(self.generator, self.conjugation[k]), index=self.members[k])


@dataclass
class Expansion:
    """All branches of w(z) about one center, grouped into conjugate classes."""

    center: acb | str
    local: BivariatePoly
    leaves: list[Leaf]
    classes: list[ConjugateClass]

    @property
    def degree(self) -> int:
        return self.local.w_degree

    @property
    def cycles(self) -> list[int]:
        return [c.cycle for c in self.classes]

    def all_series(self) -> list[PuiseuxSeries]:
        """The n member series, in series-index order."""
        out = {}
        for cls in self.classes:
            for k in range(cls.cycle):
                s = cls.member(k)
                out[s.index] = s
        return [out[i] for i in sorted(out)]


def local_polynomial(f: BivariatePoly, center, floor: int = 0, tol: float | None = None) -> BivariatePoly:
    """Polynomial whose expansion about z = 0 is the expansion of f about ``center``."""
    if isinstance(center, str):
        if center == INFINITY:
            return infinity_transform(f)
        if center == ORIGIN:
            return f
        raise ValueError(f"unknown center {center!r}")
    c = ball(center)
    if c == 0:
        return f
    return translate_z(f, c, floor, tol)


def _matches(a: PuiseuxSeries, b: PuiseuxSeries, slack: float = 10.0) -> bool:
    if a.cycle != b.cycle or a.numerators != b.numerators:
        return False
    for x, y in zip(a.coeffs, b.coeffs):
        d = x - y
        if is_effective_zero(d):
            continue
        gap = abs(d.mid())
        rad = (x.rad() + y.rad()) * slack
        if gap > rad:
            return False
    return True


def group_conjugate_classes(leaves: list[Leaf], n: int) -> list[tuple[list[int], list[int]]]:
    """Partition leaves into conjugate classes by conjugating initial terms.

    Returns (leaf indices, conjugation index per member) for each class in
    the order of first appearance.  Raises :class:`ChecksumError` when a
    conjugate has no unique partner or the cycle sizes do not sum to n.
    """
    initial = [leaf.initial_series().reduced() for leaf in leaves]
    assigned = [False] * len(leaves)
    groups = []
    for g, start in enumerate(initial):
        if assigned[g]:
            continue
        assigned[g] = True
        members, conj = [g], [0]
        for j in range(1, start.cycle):
            target = conjugate_series(start, j)
            hits = [k for k in range(len(leaves)) if not assigned[k] and _matches(target, initial[k])]
            if len(hits) != 1:
                raise ChecksumError(
                    f"conjugate {j} of series {g + 1} matched {len(hits)} initial segments")
            assigned[hits[0]] = True
            members.append(hits[0])
            conj.append(j)
        groups.append((members, conj))
    total = sum(len(m) for m, _ in groups)
    if total != n:
        raise ChecksumError(f"cycle sizes sum to {total}, expected {n}")
    return groups


def initial_classes(f: BivariatePoly, center, digits: int, floor: int = 0,
                    tol: float | None = None) -> tuple[BivariatePoly, list[Leaf], list]:
    """Leaves and class grouping only (no long series); used for ramification."""
    local = local_polynomial(f, center, floor, tol)
    local, _ = strip_coefficient_zeros(local, tol)
    leaves = initial_segments(local, digits, floor, tol)
    groups = group_conjugate_classes(leaves, local.w_degree)
    return local, leaves, groups


def expand_at(f: BivariatePoly, center, terms: int, digits: int, floor: int = 0,
              nzm: int = 15, tol: float | None = None) -> Expansion:
    """Expand every conjugate class generator about ``center`` to at least ``terms`` terms.

    ``center`` is a complex value, ``"origin"`` or ``"infinity"``.  Series
    indices run 1..n in leaf order; the generator of each class is its
    first member in that order.
    """
    local, leaves, groups = initial_classes(f, center, digits, floor, tol)
    classes = []
    for members, conj in groups:
        leaf = leaves[members[0]]
        series, profile = expand_leaf(leaf, terms, nzm, floor)
        series = replace(series, index=members[0] + 1)
        if series.cycle != len(members):
            raise ChecksumError(
                f"generator {members[0] + 1} has cycle {series.cycle} but its class has {len(members)} members")
        btype = classify_branch(series, leaf.removable)
        classes.append(ConjugateClass(series, tuple(m + 1 for m in members), btype, leaf, profile,
                                      tuple(conj)))
    return Expansion(center, local, leaves, classes)
