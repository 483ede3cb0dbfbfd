"""Singular points of w(z): ordering, perimeters and neighbour sequences."""

from __future__ import annotations

import csv
import functools
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from flint import acb

from .numerics import abs_float, complex_order, format_ball, is_effective_zero, short
from .polynomial import BivariatePoly, resultant_w
from .roots import roots_with_multiplicity


@dataclass(frozen=True)
class SingularPoint:
    index: int
    location: acb
    is_pole: bool = False
    is_qset: bool = False
    perimeter_radius: float = math.inf
    resultant_multiplicity: int = 1

    @property
    def modulus(self) -> float:
        return abs_float(self.location)


@dataclass(frozen=True)
class SingularList:
    points: tuple[SingularPoint, ...] = field(default_factory=tuple)

    @property
    def total(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, index: int) -> SingularPoint:
        """1-based lookup, matching the reported indices."""
        if index < 1 or index > len(self.points):
            raise IndexError(f"singular index {index} out of range 1..{len(self.points)}")
        return self.points[index - 1]

    def __iter__(self):
        return iter(self.points)

    def poles(self) -> list[SingularPoint]:
        return [p for p in self.points if p.is_pole]

    def locate(self, z: acb) -> SingularPoint | None:
        """Singular point whose location agrees with ``z`` within ball radii."""
        for p in self.points:
            if is_effective_zero(p.location - z):
                return p
        return None


def _modulus_order(a: acb, b: acb) -> int:
    d = abs(a) - abs(b)
    if not d.contains(0):
        return -1 if d < 0 else 1
    return complex_order(a, b)


def sort_locations(locations: list[acb]) -> list[acb]:
    """Increasing modulus; equal moduli ordered real part first then imaginary part."""
    return sorted(locations, key=functools.cmp_to_key(_modulus_order))


def singular_list(f: BivariatePoly, digits: int, perimeter_factor: Fraction | float = Fraction(1, 3)) -> SingularList:
    """Finite singular points: zeros of the resultant of f and df/dw."""
    res = resultant_w(f, f.derivative_w())
    roots = [r for r in roots_with_multiplicity(res, digits)] if len(res) > 1 else []
    locs = sort_locations([r.value for r in roots])
    mult = {}
    for r in roots:
        mult[id(r.value)] = r.multiplicity

    lead = f.exact_coefficient(f.w_degree)
    pole_roots = [r.value for r in roots_with_multiplicity(_trim(lead), digits)] if len(_trim(lead)) > 1 else []
    q_roots = []
    if not _trim(f.exact_coefficient(1) if f.w_degree >= 1 else []):
        a0 = _trim(f.exact_coefficient(0))
        if len(a0) > 1:
            q_roots = [r.value for r in roots_with_multiplicity(a0, digits)]

    def member(z, pool):
        return any(is_effective_zero(z - p) for p in pool)

    factor = float(perimeter_factor)
    pts = []
    for k, z in enumerate(locs):
        others = [abs_float(z - o) for j, o in enumerate(locs) if j != k]
        nearest = min(others) if others else 1.0
        pts.append(SingularPoint(
            index=k + 1,
            location=z,
            is_pole=member(z, pole_roots),
            is_qset=member(z, q_roots),
            perimeter_radius=factor * nearest,
            resultant_multiplicity=mult.get(id(z), 1),
        ))
    return SingularList(tuple(pts))


def _trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def singular_sequence(slist: SingularList, base: int) -> list[int]:
    """Other singular indices ordered by distance from the base point."""
    if base < 1 or base > slist.total:
        raise IndexError("base index out of range")
    sb = slist[base].location

    def cmp(i, j):
        d = abs(slist[i].location - sb) - abs(slist[j].location - sb)
        if not d.contains(0):
            return -1 if d < 0 else 1
        return (i > j) - (i < j)

    rest = [p.index for p in slist if p.index != base]
    return sorted(rest, key=functools.cmp_to_key(cmp))


def distance_sequence(slist: SingularList, center: acb) -> list[int]:
    """All singular indices ordered by distance from an arbitrary center."""

    def cmp(i, j):
        d = abs(slist[i].location - center) - abs(slist[j].location - center)
        if not d.contains(0):
            return -1 if d < 0 else 1
        return (i > j) - (i < j)

    return sorted((p.index for p in slist), key=functools.cmp_to_key(cmp))


def comparison_sequence(seq: list[int], est_clsp_indices: list[int], margin: int) -> list[int]:
    """Prefix of ``seq`` reaching ``margin`` entries past the farthest estimate."""
    positions = [seq.index(i) for i in est_clsp_indices if i in seq]
    if any(i not in seq for i in est_clsp_indices) and not positions:
        return list(seq)
    if not positions:
        return list(seq[:margin]) if margin > 0 else []
    end = max(positions) + margin + 1
    return list(seq[:min(end, len(seq))])


def to_rows(slist: SingularList) -> list[dict]:
    rows = []
    for p in slist:
        rows.append({
            "index": p.index,
            "location": format_ball(p.location),
            "re": short(p.location.real),
            "im": short(p.location.imag),
            "modulus": f"{p.modulus:.6g}",
            "pole": int(p.is_pole),
            "qset": int(p.is_qset),
            "perimeter": f"{p.perimeter_radius:.6g}",
        })
    return rows


def to_csv(slist: SingularList) -> str:
    buf = io.StringIO()
    rows = to_rows(slist)
    fields = ["index", "location", "re", "im", "modulus", "pole", "qset", "perimeter"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def to_json(slist: SingularList) -> str:
    return json.dumps({"total": slist.total, "points": to_rows(slist)}, indent=1)
