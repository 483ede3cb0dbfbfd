"""Ramification profiles over all singular points and the Riemann-Hurwitz genus."""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .numerics import working_precision
from .polynomial import BivariatePoly
from .puiseux.expansion import INFINITY, initial_classes
from .singular import SingularList, singular_list


class CycleError(ArithmeticError):
    """Odd Riemann-Hurwitz sum: some cycle count is wrong."""

    def __init__(self, message: str, suspects: list):
        super().__init__(message)
        self.suspects = suspects


def format_cycles(cycles: tuple[int, ...]) -> str:
    """Compact form: sizes in decreasing order, repeats as [count,size]."""
    counts = Counter(cycles)
    parts = []
    for size in sorted(counts, reverse=True):
        k = counts[size]
        parts.append(str(size) if k == 1 else f"[{k},{size}]")
    text = ",".join(parts)
    return text if len(parts) == 1 and text.startswith("[") else f"({text})"


@dataclass
class RamificationProfile:
    """Cycle-size multiset per point; keys are singular indices or ``"infinity"``."""

    degree: int
    cycles: dict = field(default_factory=dict)

    def add(self, key, sizes) -> None:
        sizes = tuple(sorted(sizes, reverse=True))
        if sum(sizes) != self.degree:
            raise ValueError(f"cycle sizes at {key} sum to {sum(sizes)}, expected {self.degree}")
        self.cycles[key] = sizes

    def contribution(self, key) -> int:
        return sum(c - 1 for c in self.cycles[key])

    def grouped(self) -> list[tuple[list, tuple[int, ...]]]:
        """Points sharing a profile, in first-appearance order."""
        groups: dict[tuple[int, ...], list] = {}
        for key, sizes in self.cycles.items():
            groups.setdefault(sizes, []).append(key)
        return [(keys, sizes) for sizes, keys in groups.items()]

    def rows(self) -> list[dict]:
        return [{"point": str(k), "cycles": format_cycles(v), "contribution": self.contribution(k)}
                for k, v in self.cycles.items()]

    def to_json(self) -> str:
        return json.dumps({"degree": self.degree, "points": self.rows()}, indent=1)


@dataclass(frozen=True)
class GenusReport:
    K: int
    D: int
    G: int


def _cycle_sizes(f: BivariatePoly, center, digits: int, floor: int, tol: float | None) -> list[int]:
    _, _, groups = initial_classes(f, center, digits, floor, tol)
    return [len(m) for m, _ in groups]


_worker: dict = {}


def _init_worker(f, digits, perimeter_factor, floor, tol):
    # balls do not pickle, so each worker recomputes the (deterministic) singular list
    _worker.update(f=f, digits=digits, floor=floor, tol=tol)
    with working_precision(digits):
        _worker["slist"] = singular_list(f, digits, perimeter_factor)


def _worker_sizes(key):
    w = _worker
    with working_precision(w["digits"]):
        center = INFINITY if key == INFINITY else w["slist"][key].location
        return key, _cycle_sizes(w["f"], center, w["digits"], w["floor"], w["tol"])


def ramification_profile(f: BivariatePoly, slist: SingularList, digits: int, include_infinity: bool = True,
                         floor: int = 0, tol: float | None = None, threads: int = 1,
                         perimeter_factor: Fraction = Fraction(1, 3)) -> RamificationProfile:
    """Cycle sizes from initial segments at every singular point (and infinity).

    With ``threads > 1`` the points are split over worker processes; the
    profile is assembled in singular-list order either way.
    """
    profile = RamificationProfile(f.w_degree)
    keys = [p.index for p in slist] + ([INFINITY] if include_infinity else [])
    if threads > 1 and len(keys) > 1:
        with ProcessPoolExecutor(threads, initializer=_init_worker,
                                 initargs=(f, digits, perimeter_factor, floor, tol)) as pool:
            sizes = dict(pool.map(_worker_sizes, keys, chunksize=max(1, len(keys) // (4 * threads))))
    else:
        sizes = {}
        for key in keys:
            center = INFINITY if key == INFINITY else slist[key].location
            sizes[key] = _cycle_sizes(f, center, digits, floor, tol)
    for key in keys:
        profile.add(key, sizes[key])
    return profile


def riemann_hurwitz(profile: RamificationProfile, D: int | None = None) -> GenusReport:
    """K = sum over points of sum (c_i - 1); genus G = 1 + K/2 - D."""
    D = profile.degree if D is None else D
    K = sum(profile.contribution(k) for k in profile.cycles)
    if K % 2:
        minimal = {2: 1, 1: D - 2}
        suspects = [k for k, v in profile.cycles.items() if Counter(v) != Counter(minimal) and any(c > 1 for c in v)]
        raise CycleError(f"Riemann-Hurwitz sum K={K} is odd", suspects)
    G = 1 + K // 2 - D
    if G < 0:
        raise CycleError(f"negative genus {G} from K={K}, D={D}", list(profile.cycles))
    return GenusReport(K, D, G)
