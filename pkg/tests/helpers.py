"""Random small bivariate polynomials for oracle and property tests."""

from fractions import Fraction


def random_poly_text(rng, max_w: int = 4, max_z: int = 3) -> str:
    """Monic-free random polynomial with small rational coefficients, w-degree 2..max_w."""
    n = rng.randint(2, max_w)
    terms = []
    for j in range(n + 1):
        for i in range(max_z + 1):
            if j == n and i > 0:
                continue
            if rng.random() < 0.45 or (j == n and i == 0) or (j == 0 and i == 1):
                c = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 4))
                terms.append(f"({c})*z^{i}*w^{j}")
    return "+".join(terms)
