"""Analytic continuation of all roots of f(z, .) along a path by ODE tracking.

The sheets obey dw/dz = -f_z/f_w.  Each step is an RK4 predictor in the
path parameter followed by a Newton corrector on f(z, w) = 0; a step is
accepted only when every corrected root stays well inside its own basin
(its displacement is small against the separation from the other roots).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from flint import acb, acb_poly, arb

from ..numerics import ball, to_complex, working_precision
from ..polynomial import BivariatePoly


class ContinuationError(RuntimeError):
    """Path tracking failed (step underflow, root collision or residual check)."""


@dataclass(frozen=True)
class Line:
    start: complex
    end: complex

    def point(self, t: float) -> complex:
        return self.start + (self.end - self.start) * t

    def velocity(self, t: float) -> complex:
        return self.end - self.start

    @property
    def length(self) -> float:
        return abs(self.end - self.start)


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    theta1: float

    def point(self, t: float) -> complex:
        th = self.theta0 + (self.theta1 - self.theta0) * t
        return self.center + self.radius * cmath.exp(1j * th)

    def velocity(self, t: float) -> complex:
        th = self.theta0 + (self.theta1 - self.theta0) * t
        return 1j * self.radius * (self.theta1 - self.theta0) * cmath.exp(1j * th)

    @property
    def start(self) -> complex:
        return self.point(0.0)

    @property
    def end(self) -> complex:
        return self.point(1.0)

    @property
    def length(self) -> float:
        return abs(self.theta1 - self.theta0) * self.radius


def detour_path(start: complex, end: complex, obstacles: list[tuple[complex, float]]) -> list[Line | Arc]:
    """Straight path from start to end, replacing each chord through an
    obstacle disc (center, radius) by the shorter arc of its boundary.

    Discs must not contain either endpoint.
    """
    d = end - start
    L = abs(d)
    if L == 0:
        return []
    u = d / L
    cuts = []
    for c, r in obstacles:
        if abs(start - c) < r or abs(end - c) < r:
            raise ContinuationError("path endpoint lies inside a singular perimeter")
        rel = (c - start) / u
        along, off = rel.real, rel.imag
        if abs(off) >= r or along <= 0 or along >= L:
            continue
        half = math.sqrt(r * r - off * off)
        t0, t1 = along - half, along + half
        if t0 <= 0 or t1 >= L:
            raise ContinuationError("path endpoint lies inside a singular perimeter")
        cuts.append((t0, t1, c, r, off))
    cuts.sort()
    pieces: list[Line | Arc] = []
    pos = 0.0
    for t0, t1, c, r, off in cuts:
        if t0 < pos:
            raise ContinuationError("overlapping singular perimeters on the path")
        p0, p1 = start + u * t0, start + u * t1
        if t0 > pos:
            pieces.append(Line(start + u * pos, p0))
        a0 = cmath.phase(p0 - c)
        a1 = cmath.phase(p1 - c)
        # go around on the side away from the center: the short arc
        sweep = (a1 - a0) % (2 * math.pi)
        if sweep > math.pi:
            sweep -= 2 * math.pi
        if abs(off) < 1e-15:
            sweep = math.pi  # through the center: either half works; take counter-clockwise
        pieces.append(Arc(c, r, a0, a0 + sweep))
        pos = t1
    pieces.append(Line(start + u * pos, end))
    return pieces


@dataclass
class TrackResult:
    values: list[acb]
    steps: int
    rejected: int
    residual: float


class RootTracker:
    """Tracks all n roots of f(z, .) at a fixed working precision."""

    def __init__(self, f: BivariatePoly, digits: int = 40, max_steps: int = 20000):
        self.f = f
        self.digits = digits
        self.max_steps = max_steps
        with working_precision(digits + 5):
            self.a = f.coefficient_polys()
            self.az = [p.derivative() for p in self.a]

    def _w_poly(self, z: acb) -> tuple[acb_poly, acb_poly, acb_poly]:
        fw = acb_poly([p(z) for p in self.a])
        fz = acb_poly([p(z) for p in self.az])
        return fw, fw.derivative(), fz

    def _slope(self, z: acb, dz: acb, ws: list[acb]) -> list[acb]:
        p, dp, pz = self._w_poly(z)
        num = [pz(w) for w in ws]
        den = [dp(w) for w in ws]
        return [-(a / b) * dz for a, b in zip(num, den)]

    def _newton(self, z: acb, ws: list[acb], iters: int = 8) -> tuple[list[acb], bool]:
        p, dp, _ = self._w_poly(z)
        tol = 10.0 ** (-(self.digits - 3))
        out = list(ws)
        for _ in range(iters):
            vals = [p(w) for w in out]
            ders = [dp(w) for w in out]
            worst = 0.0
            nxt = []
            for w, v, d in zip(out, vals, ders):
                step = v / d
                if not step.is_finite():
                    return out, False
                nxt.append(acb(w.mid() - step.mid()))
                scale = max(1.0, abs(to_complex(w)))
                worst = max(worst, abs(to_complex(step)) / scale)
            out = nxt
            if worst < tol:
                return out, True
        return out, False

    def residual(self, z: acb, ws: list[acb]) -> float:
        p, dp, _ = self._w_poly(z)
        vals = [p(w) for w in ws]
        ders = [dp(w) for w in ws]
        return max(abs(to_complex(v / d)) / max(1.0, abs(to_complex(w))) for v, d, w in zip(vals, ders, ws))

    def track(self, path: list[Line | Arc], start_values: list, initial_step: float | None = None) -> TrackResult:
        """Continue ``start_values`` (roots at the path start) to the path end."""
        with working_precision(self.digits + 5):
            ws = [ball(v) for v in start_values]
            ws = [acb(w.mid()) for w in ws]
            if not path:
                return TrackResult(ws, 0, 0, 0.0)
            z0 = ball(path[0].start)
            ws, ok = self._newton(z0, ws)
            if not ok:
                raise ContinuationError("start values are not roots at the path start")
            self._check_distinct(ws)
            steps = rejected = 0
            for piece in path:
                ws, s, r = self._track_piece(piece, ws, initial_step)
                steps += s
                rejected += r
            z1 = ball(path[-1].end)
            res = self.residual(z1, ws)
            if res > 10.0 ** (-(self.digits // 2)):
                raise ContinuationError(f"endpoint residual {res:.3g} above tolerance")
            return TrackResult(ws, steps, rejected, res)

    @staticmethod
    def _min_gaps(ws: list[acb]) -> list[float]:
        cs = [to_complex(w) for w in ws]
        gaps = []
        for i, a in enumerate(cs):
            gaps.append(min((abs(a - b) for j, b in enumerate(cs) if j != i), default=math.inf))
        return gaps

    def _check_distinct(self, ws):
        if min(self._min_gaps(ws)) <= 10.0 ** (-(self.digits // 2)):
            raise ContinuationError("tracked roots coincide")

    def _track_piece(self, piece, ws, initial_step):
        t = 0.0
        length = max(piece.length, 1e-300)
        h = min(1.0, (initial_step or length / 16) / length)
        steps = rejected = 0
        while t < 1.0:
            if steps + rejected > self.max_steps:
                raise ContinuationError("step budget exhausted")
            h = min(h, 1.0 - t)
            if h < 1e-14:
                raise ContinuationError("step size underflow near a singular point")
            gaps = self._min_gaps(ws)
            pred = self._rk4(piece, t, h, ws)
            z1 = ball(piece.end if t + h >= 1.0 else piece.point(t + h))
            corr, ok = self._newton(z1, pred)
            if ok:
                moves = [abs(to_complex(a - b)) for a, b in zip(corr, ws)]
                fixes = [abs(to_complex(a - b)) for a, b in zip(corr, pred)]
                new_gaps = self._min_gaps(corr)
                ok = all(m < 0.25 * g for m, g in zip(moves, gaps)) and \
                    all(x < 0.05 * g for x, g in zip(fixes, new_gaps)) and min(new_gaps) > 0
            if not ok:
                rejected += 1
                h *= 0.5
                continue
            ws = corr
            t += h
            steps += 1
            h *= 1.5
        return ws, steps, rejected

    def _rk4(self, piece, t, h, ws):
        def rhs(tt, vals):
            return self._slope(ball(piece.point(tt)), ball(piece.velocity(tt)), vals)

        hh = arb(h)
        k1 = rhs(t, ws)
        k2 = rhs(t + h / 2, [w + k * hh / 2 for w, k in zip(ws, k1)])
        k3 = rhs(t + h / 2, [w + k * hh / 2 for w, k in zip(ws, k2)])
        k4 = rhs(t + h, [w + k * hh for w, k in zip(ws, k3)])
        out = []
        for w, a, b, c, d in zip(ws, k1, k2, k3, k4):
            v = w + (a + 2 * b + 2 * c + d) * hh / 6
            out.append(acb(v.mid()) if v.is_finite() else w)
        return out


def integrate_continuation(f: BivariatePoly, path: list[Line | Arc], values: list, digits: int = 40,
                           escalate_to: int | None = 80) -> TrackResult:
    """Continue the given root set along ``path``; retry once at higher precision on failure."""
    try:
        return RootTracker(f, digits).track(path, values)
    except ContinuationError:
        if not escalate_to or escalate_to <= digits:
            raise
        return RootTracker(f, escalate_to).track(path, values)
