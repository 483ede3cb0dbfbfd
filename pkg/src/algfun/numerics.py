"""Multiprecision ball arithmetic helpers.

Balls are :class:`flint.arb` (real) and :class:`flint.acb` (complex) values:
a midpoint plus a radius bounding the absolute error.  Working precision is
carried by the active flint context rather than by each value, so every
computation in this package runs inside :func:`working_precision`.
"""

from __future__ import annotations

import functools
import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import flint
from flint import acb, arb, fmpq

BigRealBall = arb
BigComplexBall = acb

LOG10_2 = math.log10(2.0)
_LOCK = threading.RLock()


def digits_to_bits(digits: int) -> int:
    return int(math.ceil(digits / LOG10_2)) + 8


def current_digits() -> int:
    return int(flint.ctx.dps)


@contextmanager
def working_precision(digits: int) -> Iterator[int]:
    """Run the enclosed block with flint set to ``digits`` decimal digits."""
    if digits < 1:
        raise ValueError("working precision must be positive")
    with _LOCK:
        saved = flint.ctx.prec
        flint.ctx.prec = digits_to_bits(digits)
        try:
            yield digits
        finally:
            flint.ctx.prec = saved


# ---------------------------------------------------------------------------
# exact Gaussian rationals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(Fraction(x))

    def __add__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussianRational.coerce(o))

    def __rsub__(self, o):
        return GaussianRational.coerce(o) - self

    def __mul__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussianRational.coerce(o)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / den, num.im / den)

    def __rtruediv__(self, o):
        return GaussianRational.coerce(o) / self

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational(1) / self ** (-k)
        out, base = GaussianRational(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        try:
            o = GaussianRational.coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def to_ball(self) -> acb:
        return acb(arb(fmpq(self.re.numerator, self.re.denominator)),
                   arb(fmpq(self.im.numerator, self.im.denominator)))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        def frac(q: Fraction) -> str:
            return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"

        if self.im == 0:
            return frac(self.re)
        if self.re == 0:
            return f"{frac(self.im)}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{frac(self.re)}{sign}{frac(abs(self.im))}*i"

    def __repr__(self):
        return f"GaussianRational({self})"


Number = Union[int, Fraction, GaussianRational, complex, float, str, arb, acb]


def ball(value: Number, radius: float | str | None = None) -> acb:
    """Build a complex ball at the current working precision.

    ``radius``, when given, is attached to every nonzero component.
    """
    if isinstance(value, acb):
        out = value
    elif isinstance(value, arb):
        out = acb(value)
    elif isinstance(value, GaussianRational):
        out = value.to_ball()
    elif isinstance(value, Fraction):
        out = acb(arb(fmpq(value.numerator, value.denominator)))
    elif isinstance(value, complex):
        out = acb(value.real, value.imag)
    elif isinstance(value, str):
        out = acb(arb(value))
    else:
        out = acb(value)
    if not radius:
        return out
    re = arb(out.real.mid(), radius)
    im = arb(out.imag.mid(), radius) if out.imag != 0 else arb(0)
    return acb(re, im)


# ---------------------------------------------------------------------------
# precision accounting
# ---------------------------------------------------------------------------


def _log2_exact(x: arb) -> float:
    """log2 of an exactly representable arb (a midpoint or radius)."""
    if not x.is_finite():
        return math.inf
    man, exp = x.man_exp()
    man = abs(int(man))
    if man == 0:
        return -math.inf
    return math.log2(man) + int(exp)


def log2_abs_mid(x: acb | arb) -> float:
    if isinstance(x, arb):
        return _log2_exact(x.mid())
    lr = _log2_exact(x.real.mid())
    li = _log2_exact(x.imag.mid())
    hi, lo = max(lr, li), min(lr, li)
    if hi == -math.inf:
        return hi
    return hi + 0.5 * math.log2(1.0 + 2.0 ** (2.0 * (lo - hi)))


def log2_rad(x: acb | arb) -> float:
    if isinstance(x, arb):
        return _log2_exact(x.rad())
    return max(_log2_exact(x.real.rad()), _log2_exact(x.imag.rad()))


def log10_abs(x: acb | arb) -> float:
    """log10 of the magnitude of the midpoint (``-inf`` for zero)."""
    return log2_abs_mid(x) * LOG10_2


def magnitude_upper(x: acb | arb) -> float:
    """Upper bound on |x| as log10 (``-inf`` for exact zero)."""
    m, r = log2_abs_mid(x), log2_rad(x)
    hi = max(m, r)
    if hi == -math.inf:
        return hi
    return (hi + math.log2(1.0 + 2.0 ** (min(m, r) - hi))) * LOG10_2


def effective_precision(x: acb | arb, working: int | None = None) -> int:
    """Number of correct significant decimal digits of ``x``.

    A ball with zero radius reports the working precision; a ball whose
    radius reaches its midpoint magnitude reports 0.
    """
    if working is None:
        working = current_digits()
    lr = log2_rad(x)
    if lr == -math.inf:
        return working
    lm = log2_abs_mid(x)
    if lm == -math.inf:
        return 0
    return max(0, int(math.floor((lm - lr) * LOG10_2 + 1e-7)))


def is_effective_zero(x: acb | arb, tol: float | None = None) -> bool:
    """True when the ball contains zero, i.e. its value is indistinguishable from 0.

    ``tol`` (a residual tolerance, absolute) additionally treats any ball
    whose magnitude bound is below ``tol`` as zero.
    """
    if isinstance(x, arb):
        zero = x.contains(0)
    else:
        zero = x.real.contains(0) and x.imag.contains(0)
    if zero:
        return True
    if tol is not None and tol > 0:
        return magnitude_upper(x) <= math.log10(tol)
    return False


def with_precision(x: acb | arb, digits: int) -> acb | arb:
    """Round ``x`` to ``digits`` significant digits, widening its radius accordingly."""
    if digits < 1:
        raise ValueError("digits must be positive")
    lm = log2_abs_mid(x)
    if lm == -math.inf:
        return x
    floor_rad = arb(2) ** int(math.floor(lm - digits / LOG10_2))
    bits = digits_to_bits(digits)

    def widen(part: arb) -> arb:
        exact = part.mid()
        saved = flint.ctx.prec
        flint.ctx.prec = bits
        try:
            mid = (+exact).mid()
        finally:
            flint.ctx.prec = saved
        rad = arb(part.rad()) + abs(exact - mid)
        return arb(mid, max(rad, floor_rad).upper())

    if isinstance(x, arb):
        return widen(x)
    return acb(widen(x.real), widen(x.imag))


def common_precision(values) -> int:
    return min((effective_precision(v) for v in values), default=current_digits())


def same_value(a: acb, b: acb) -> bool:
    """Duplicate test: the difference, at the pair's common precision, is effectively zero."""
    digits = max(1, min(effective_precision(a), effective_precision(b)))
    return is_effective_zero(with_precision(a, digits) - with_precision(b, digits))


# ---------------------------------------------------------------------------
# misc
# ---------------------------------------------------------------------------


def complex_order(a: acb, b: acb) -> int:
    """Real part first, then |imag|, then imag; ties within ball radii compare equal."""
    for x, y in ((a.real, b.real), (abs(a.imag), abs(b.imag)), (a.imag, b.imag)):
        d = x - y
        if d.contains(0):
            continue
        return -1 if d < 0 else 1
    return 0


complex_key = functools.cmp_to_key(complex_order)


def principal_root(z: acb, c: int) -> acb:
    """Principal branch of z**(1/c)."""
    if c == 1:
        return z
    if z == 0:
        return acb(0)
    return (z.log() / c).exp()


def unit_root(c: int, j: int) -> acb:
    """exp(2*pi*i*j/c), exact for c in {1, 2, 4}."""
    j %= c
    if c == 1 or j == 0:
        return acb(1)
    if 2 * j == c:
        return acb(-1)
    if 4 * j == c:
        return acb(0, 1)
    if 4 * j == 3 * c:
        return acb(0, -1)
    return acb.exp_pi_i(acb(fmpq(2 * j, c)))


def to_complex(x: acb | arb) -> complex:
    if isinstance(x, arb):
        return complex(float(x.mid()), 0.0)
    return complex(float(x.real.mid()), float(x.imag.mid()))


def abs_float(x: acb) -> float:
    return abs(to_complex(x))


def format_ball(x: acb, digits: int | None = None) -> str:
    """Decimal serialization: midpoint with an explicit digit count plus a short radius."""
    if digits is None:
        digits = max(1, min(effective_precision(x), current_digits()))

    def part(p: arb) -> str:
        return p.mid().str(digits, radius=False)

    re, im = part(x.real), part(x.imag)
    lr = log2_rad(x)
    rad = "0" if lr == -math.inf else f"1e{int(math.ceil(lr * LOG10_2))}"
    return f"({re}) + ({im})*i +/- {rad}"


def parse_ball(text: str) -> acb:
    """Inverse of :func:`format_ball`."""
    body, _, rad = text.partition("+/-")
    re_s, _, im_s = body.partition(") + (")
    re_s = re_s.strip().lstrip("(")
    im_s = im_s.strip().removesuffix("*i").strip().rstrip(")")
    rad = rad.strip() or "0"
    r = arb(rad) if rad != "0" else 0
    return acb(arb(re_s, r) if r else arb(re_s), arb(im_s, r) if r else arb(im_s))


def short(x: acb | arb, sig: int = 6) -> str:
    """Human-readable value rounded to ``sig`` significant digits."""
    z = to_complex(x)
    if z.imag == 0 or abs(z.imag) < 1e-300:
        return f"{z.real:.{sig}g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.{sig}g}{sign}{abs(z.imag):.{sig}g}i"
