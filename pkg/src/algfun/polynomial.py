"""Bivariate polynomials f(z, w) = sum a_j(z) w^j.

Two containers are provided.  :class:`BivariatePoly` stores integer
powers of both variables, with exact :class:`GaussianRational` coefficients
for user input or ball coefficients after a numeric translation.
:class:`FractionalPoly` allows rational powers of ``z`` and only ever holds
balls; it is the shape of the polygon iterates.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import flint
from flint import acb, acb_poly, fmpq, fmpq_mpoly_ctx, fmpq_poly

from .numerics import (
    GaussianRational,
    ball,
    effective_precision,
    is_effective_zero,
)

Coefficient = GaussianRational | acb


class ParseError(ValueError):
    """Malformed polynomial text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class PrecisionFloorError(RuntimeError):
    """A coefficient lost more precision than the configured floor allows."""


def _is_exact(c) -> bool:
    return isinstance(c, GaussianRational)


def _to_ball(c) -> acb:
    return c.to_ball() if isinstance(c, GaussianRational) else acb(c)


def _is_zero(c) -> bool:
    if isinstance(c, GaussianRational):
        return not c
    return is_effective_zero(c)


def _binomial_row(n: int) -> list[int]:
    return [math.comb(n, k) for k in range(n + 1)]


# ---------------------------------------------------------------------------
# integer-power polynomial
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BivariatePoly:
    """Sparse map ``(z_power, w_power) -> coefficient``; zero terms are never stored."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), c in self.coeffs.items():
            if i < 0 or j < 0:
                raise ValueError("powers must be non-negative")
            if isinstance(c, (int, Fraction, complex)):
                c = GaussianRational.coerce(c)
            if isinstance(c, GaussianRational) and not c:
                continue
            clean[(int(i), int(j))] = c
        object.__setattr__(self, "coeffs", clean)

    # -- shape ---------------------------------------------------------------
    @property
    def w_degree(self) -> int:
        return max((j for _, j in self.coeffs), default=-1)

    @property
    def z_degree(self) -> int:
        return max((i for i, _ in self.coeffs), default=-1)

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs.values())

    @property
    def is_real(self) -> bool:
        return self.is_exact and all(c.is_real for c in self.coeffs.values())

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        if self.coeffs.keys() != other.coeffs.keys():
            return False
        for k, c in self.coeffs.items():
            d = other.coeffs[k]
            if _is_exact(c) and _is_exact(d):
                if c != d:
                    return False
            elif not is_effective_zero(_to_ball(c) - _to_ball(d)):
                return False
        return True

    __hash__ = None

    def coefficient_lists(self) -> list[list[Coefficient]]:
        """a_j(z) as dense coefficient lists (low power first), indexed by j."""
        n = self.w_degree
        out = [[] for _ in range(n + 1)]
        for (i, j), c in self.coeffs.items():
            row = out[j]
            if len(row) <= i:
                row.extend([GaussianRational(0)] * (i + 1 - len(row)))
            row[i] = c
        return out

    def coefficient_polys(self) -> list[acb_poly]:
        """a_j(z) as ball polynomials at the current precision."""
        return [acb_poly([_to_ball(c) for c in row]) for row in self.coefficient_lists()]

    def exact_coefficient(self, j: int) -> list[GaussianRational]:
        return self.coefficient_lists()[j]

    # -- calculus -------------------------------------------------------------
    def derivative_w(self) -> "BivariatePoly":
        return BivariatePoly({(i, j - 1): c * j for (i, j), c in self.coeffs.items() if j > 0})

    def derivative_z(self) -> "BivariatePoly":
        return BivariatePoly({(i - 1, j): c * i for (i, j), c in self.coeffs.items() if i > 0})

    def to_numeric(self) -> "BivariatePoly":
        return BivariatePoly({k: _to_ball(c) for k, c in self.coeffs.items()})

    def evaluate(self, z, w) -> acb:
        z, w = ball(z), ball(w)
        return self.w_poly_at(z)(w)

    def w_poly_at(self, z) -> acb_poly:
        """f(z, .) as a univariate ball polynomial in w."""
        z = ball(z)
        return acb_poly([p(z) for p in self.coefficient_polys()])

    # -- serialization --------------------------------------------------------
    def to_json(self) -> str:
        terms = []
        for (i, j), c in sorted(self.coeffs.items()):
            if _is_exact(c):
                terms.append({"z": i, "w": j, "re": _frac_str(c.re), "im": _frac_str(c.im)})
            else:
                terms.append({"z": i, "w": j, "re": c.real.mid().str(radius=False),
                              "im": c.imag.mid().str(radius=False)})
        return json.dumps({"terms": terms})

    @classmethod
    def from_json(cls, text: str) -> "BivariatePoly":
        data = json.loads(text)
        coeffs = {}
        for t in data["terms"]:
            coeffs[(t["z"], t["w"])] = GaussianRational(Fraction(t["re"]), Fraction(t["im"]))
        return cls(coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (i, j), c in sorted(self.coeffs.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            mono = "*".join(s for s in (
                "" if i == 0 else ("z" if i == 1 else f"z^{i}"),
                "" if j == 0 else ("w" if j == 1 else f"w^{j}"),
            ) if s)
            cs = f"({c})" if _is_exact(c) else f"({c.str(10, radius=False)})"
            parts.append(cs if not mono else f"{cs}*{mono}")
        return " + ".join(parts)


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# rational-power polynomial
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FractionalPoly:
    """Sparse map ``(z_exponent: Fraction, w_power) -> ball``."""

    terms: dict = field(default_factory=dict)

    @classmethod
    def from_bivariate(cls, f: BivariatePoly) -> "FractionalPoly":
        return cls({(Fraction(i), j): _to_ball(c) for (i, j), c in f.coeffs.items()})

    @property
    def w_degree(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    @property
    def denominator(self) -> int:
        d = 1
        for e, _ in self.terms:
            d = math.lcm(d, e.denominator)
        return d

    def support(self) -> list[tuple[int, Fraction]]:
        return sorted((j, e) for e, j in self.terms)

    def substitute_shift(self, lam: Fraction, beta: Fraction, c: acb) -> "FractionalPoly":
        """z^(-beta) * f(z, z^lam * (w + c))."""
        out: dict = {}
        for (e, j), a in self.terms.items():
            base = e + lam * j - beta
            row = _binomial_row(j)
            cp = acb(1)
            powers = [cp]
            for _ in range(j):
                cp = cp * c
                powers.append(cp)
            for k in range(j + 1):
                key = (base, k)
                term = a * row[k] * powers[j - k]
                out[key] = out[key] + term if key in out else term
        return FractionalPoly(out)

    def substitute_scale(self, lam: Fraction, beta: Fraction) -> "FractionalPoly":
        """z^(-beta) * f(z, z^lam * w)."""
        return FractionalPoly({(e + lam * j - beta, j): a for (e, j), a in self.terms.items()})

    def to_integer_powers(self, d: int) -> "BivariatePoly":
        """f(z^d, w) with every exponent required to become a non-negative integer."""
        coeffs = {}
        for (e, j), a in self.terms.items():
            p = e * d
            if p.denominator != 1 or p < 0:
                raise ValueError(f"exponent {e} does not clear with d={d}")
            coeffs[(int(p), j)] = a
        return BivariatePoly(coeffs)

    def min_precision(self) -> int:
        return min((effective_precision(a) for a in self.terms.values()), default=flint.ctx.dps)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser:
    """Recursive-descent parser producing sparse ``{(i, j): GaussianRational}`` maps."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ParseError(message, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> dict:
        if not self.text.strip():
            self.error("empty expression")
        out = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return out

    def expr(self) -> dict:
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        acc = _scale(self.term(), sign)
        while self.peek() and self.peek() in "+-":
            op = self.text[self.pos]
            self.pos += 1
            acc = _add(acc, _scale(self.term(), -1 if op == "-" else 1))
        return acc

    def term(self) -> dict:
        acc = self.power()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                acc = _mul(acc, self.power())
            elif ch == "/":
                self.pos += 1
                start = self.pos
                den = self.power()
                if set(den) != {(0, 0)}:
                    self.pos = start
                    self.error("division by a non-constant expression")
                acc = _scale(acc, GaussianRational(1) / den[(0, 0)])
            elif ch and (ch.isalnum() or ch in "(."):
                acc = _mul(acc, self.power())  # implicit product such as "2 z"
            else:
                return acc

    def power(self) -> dict:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.error("exponent must be a non-negative integer")
            k = int(self.text[start:self.pos])
            out = {(0, 0): GaussianRational(1)}
            for _ in range(k):
                out = _mul(out, base)
            return out
        return base

    def atom(self) -> dict:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return inner
        if ch == "-" or ch == "+":
            self.pos += 1
            return _scale(self.power(), -1 if ch == "-" else 1)
        if ch.isdigit() or ch == ".":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] == "."):
                self.pos += 1
            try:
                value = Fraction(self.text[start:self.pos])
            except ValueError:
                self.pos = start
                self.error("malformed number")
            return {(0, 0): GaussianRational(value)}
        if ch in ("z", "w", "i", "I"):
            self.pos += 1
            nxt = self.text[self.pos] if self.pos < len(self.text) else ""
            if nxt.isalnum() or nxt == "_":
                self.pos -= 1
                self.error("unknown identifier")
            if ch == "z":
                return {(1, 0): GaussianRational(1)}
            if ch == "w":
                return {(0, 1): GaussianRational(1)}
            return {(0, 0): GaussianRational(0, 1)}
        if not ch:
            self.error("unexpected end of input")
        self.error(f"unexpected {ch!r}")


def _add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, GaussianRational(0)) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _scale(a: dict, s) -> dict:
    s = GaussianRational.coerce(s) if not isinstance(s, GaussianRational) else s
    return {k: v * s for k, v in a.items() if v * s}


def _mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i1, j1), v1 in a.items():
        for (i2, j2), v2 in b.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, GaussianRational(0)) + v1 * v2
    return {k: v for k, v in out.items() if v}


def parse_poly(text: str) -> BivariatePoly:
    """Parse text such as ``"(2/3+i/4) + z*w^2"`` into an exact polynomial.

    Raises :class:`ParseError` on malformed input, a zero polynomial, or an
    expression without ``w``.
    """
    coeffs = _Parser(text).parse()
    f = BivariatePoly(coeffs)
    if not f:
        raise ParseError("polynomial is identically zero", 0)
    if f.w_degree < 1:
        raise ParseError("polynomial does not depend on w", 0)
    return f


# ---------------------------------------------------------------------------
# resultant
# ---------------------------------------------------------------------------


class ResultantError(ValueError):
    """The resultant vanishes identically: f shares a factor with its w-derivative."""


def _mpoly(f: BivariatePoly, ctx):
    z, w, t = ctx.gens()
    out = ctx.from_dict({})
    terms = {}
    for (i, j), c in f.coeffs.items():
        c = GaussianRational.coerce(c)
        if c.re:
            terms[(i, j, 0)] = fmpq(c.re.numerator, c.re.denominator)
        if c.im:
            terms[(i, j, 1)] = fmpq(c.im.numerator, c.im.denominator)
    return ctx.from_dict(terms) if terms else out


def resultant_w(f: BivariatePoly, g: BivariatePoly) -> list[GaussianRational]:
    """Exact resultant of f and g with respect to w, as z-coefficients (low first).

    Complex rational coefficients are handled with an auxiliary unit ``t``
    reduced by t^2 = -1 after the elimination.
    """
    if not (f.is_exact and g.is_exact):
        raise TypeError("resultant requires exact polynomials")
    ctx = fmpq_mpoly_ctx.get(("z", "w", "t"), "lex")
    if g.w_degree < 1:
        # resultant with a w-free polynomial is g^deg_w(f)
        n = f.w_degree
        gz = [GaussianRational(0)] * (g.z_degree + 1)
        for (i, _), c in g.coeffs.items():
            gz[i] = c
        out = [GaussianRational(1)]
        for _ in range(n):
            out = _upoly_mul(out, gz)
        return _trim(out)
    r = _mpoly(f, ctx).resultant(_mpoly(g, ctx), "w")
    coeffs: dict[int, GaussianRational] = {}
    for (i, j, k), q in r.to_dict().items():
        q = Fraction(int(q.p), int(q.q))
        unit = [GaussianRational(1), GaussianRational(0, 1), GaussianRational(-1), GaussianRational(0, -1)][k % 4]
        coeffs[i] = coeffs.get(i, GaussianRational(0)) + unit * q
    deg = max(coeffs, default=-1)
    out = _trim([coeffs.get(i, GaussianRational(0)) for i in range(deg + 1)])
    if not any(out):
        raise ResultantError("resultant is identically zero (input is not squarefree in w)")
    return out


def _trim(p: list) -> list:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _upoly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [GaussianRational(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def sylvester_resultant(f: BivariatePoly, g: BivariatePoly) -> list[GaussianRational]:
    """Reference resultant: Sylvester determinant by fraction-free elimination.

    Slow but independent of flint; used to cross-check :func:`resultant_w`.
    """
    fa = [_trim(r) for r in f.coefficient_lists()]
    ga = [_trim(r) for r in g.coefficient_lists()]
    n, m = len(fa) - 1, len(ga) - 1
    size = n + m
    zero: list = []
    mat = []
    for r in range(m):
        mat.append([zero] * r + list(reversed(fa)) + [zero] * (m - 1 - r))
    for r in range(n):
        mat.append([zero] * r + list(reversed(ga)) + [zero] * (n - 1 - r))
    return _trim(_bareiss(mat, size))


def _upoly_sub(a: list, b: list) -> list:
    k = max(len(a), len(b))
    a = a + [GaussianRational(0)] * (k - len(a))
    b = b + [GaussianRational(0)] * (k - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _upoly_divexact(a: list, b: list) -> list:
    a = _trim(a)
    b = _trim(b)
    if not a:
        return []
    q = [GaussianRational(0)] * (len(a) - len(b) + 1)
    r = list(a)
    lead = b[-1]
    for k in range(len(q) - 1, -1, -1):
        c = r[k + len(b) - 1] / lead
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] = r[k + i] - c * y
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return _trim(q)


def _bareiss(mat: list, size: int) -> list:
    m = [list(row) for row in mat]
    sign = 1
    prev = [GaussianRational(1)]
    for k in range(size - 1):
        if not m[k][k]:
            swap = next((r for r in range(k + 1, size) if m[r][k]), None)
            if swap is None:
                return []
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = _upoly_sub(_upoly_mul(m[i][j], m[k][k]), _upoly_mul(m[i][k], m[k][j]))
                m[i][j] = _upoly_divexact(num, prev)
            m[i][k] = []
        prev = m[k][k]
    det = m[size - 1][size - 1]
    return det if sign > 0 else [-c for c in det]


# ---------------------------------------------------------------------------
# numeric transforms
# ---------------------------------------------------------------------------


def strip_coefficient_zeros(f, tol: float | None = None):
    """Drop effective-zero coefficients.  Returns ``(stripped, removed_positions)``."""
    if isinstance(f, FractionalPoly):
        keep, removed = {}, []
        for k, a in f.terms.items():
            if is_effective_zero(a, tol):
                removed.append(k)
            else:
                keep[k] = a
        return FractionalPoly(keep), sorted(removed)
    keep, removed = {}, []
    for k, c in f.coeffs.items():
        if _is_exact(c):
            keep[k] = c
        elif is_effective_zero(c, tol):
            removed.append(k)
        else:
            keep[k] = c
    return BivariatePoly(keep), sorted(removed)


def translate_z(f: BivariatePoly, s, floor: int = 0, tol: float | None = None) -> BivariatePoly:
    """f(z + s, w) with ball coefficients, coefficient zeros stripped.

    Raises :class:`PrecisionFloorError` when a surviving coefficient has
    fewer than ``floor`` correct digits.
    """
    s = ball(s)
    shift = acb_poly([s, 1])
    coeffs = {}
    for j, p in enumerate(f.coefficient_polys()):
        if p.degree() < 0:
            continue
        q = p(shift) if p.degree() > 0 else p
        for i, c in enumerate(q.coeffs()):
            coeffs[(i, j)] = c
    out, _ = strip_coefficient_zeros(BivariatePoly(coeffs), tol)
    if floor > 0:
        for k, c in out.coeffs.items():
            if effective_precision(c) < floor:
                raise PrecisionFloorError(
                    f"coefficient z^{k[0]} w^{k[1]} has {effective_precision(c)} digits, floor is {floor}")
    return out


def infinity_transform(f: BivariatePoly) -> BivariatePoly:
    """z^delta * f(1/z, w) with delta the largest z power of f."""
    delta = f.z_degree
    return BivariatePoly({(delta - i, j): c for (i, j), c in f.coeffs.items()})


def exact_upoly_to_flint(p: Iterable) -> fmpq_poly:
    p = list(p)
    return fmpq_poly([fmpq(GaussianRational.coerce(c).re.numerator, GaussianRational.coerce(c).re.denominator) for c in p])
