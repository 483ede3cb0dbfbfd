"""Series values against independently computed roots on small random instances.

Each value is compared with the package's reference roots and, as an
independent check, with mpmath's polynomial solver on the exact coefficients
of f(z0 + z_r, w).
"""

import math
import random

import mpmath
import pytest

from algfun.accuracy import reference_roots
from algfun.numerics import ball, working_precision
from algfun.polynomial import parse_poly
from algfun.puiseux import evaluate_series, expand_at, term_for_order
from algfun.singular import singular_list
from tests.helpers import random_poly_text

DIGITS = 80
ORDER = 64


def _mp(x):
    return mpmath.mpc(mpmath.mpf(x.real.mid().str(DIGITS + 5, radius=False)),
                      mpmath.mpf(x.imag.mid().str(DIGITS + 5, radius=False)))


def _mp_roots(f, z):
    coeffs = []
    for j in range(f.w_degree, -1, -1):
        a = mpmath.mpc(0)
        for (i, jj), c in f.coeffs.items():
            if jj == j:
                a += (mpmath.mpf(c.re.numerator) / c.re.denominator
                      + 1j * mpmath.mpf(c.im.numerator) / c.im.denominator) * z ** i
        coeffs.append(a)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    return mpmath.polyroots(coeffs, maxsteps=500, extraprec=400)


@pytest.mark.parametrize("seed", range(20))
def test_generators_match_reference_roots(seed):
    rng = random.Random(seed)
    f = parse_poly(random_poly_text(rng, max_w=4, max_z=4))
    with working_precision(DIGITS):
        sl = singular_list(f, DIGITS)
        p = sl[1]
        ex = expand_at(f, p.location, ORDER * f.w_degree, DIGITS)
        with mpmath.workdps(DIGITS):
            center = _mp(p.location)
            for cls in ex.classes:
                P = cls.generator
                k = term_for_order(P, ORDER)
                for _ in range(5):
                    r = p.perimeter_radius * rng.uniform(0.05, 0.95)
                    t = rng.uniform(0, 2 * math.pi)
                    zr = complex(r * math.cos(t), r * math.sin(t))
                    v = _mp(evaluate_series(P, ball(zr), k))
                    own = [_mp(x) for x in reference_roots(f, p.location + ball(zr), DIGITS)]
                    for source, roots in (("reference_roots", own),
                                          ("mpmath", _mp_roots(f, center + mpmath.mpc(zr)))):
                        err = min(abs(v - w) for w in roots)
                        digits = -mpmath.log10(err / max(1, abs(v))) if err else DIGITS
                        assert digits >= 30, \
                            f"{cls.branch_type} at |z_r|={r:.3g} vs {source}: {float(digits):.1f} digits"
