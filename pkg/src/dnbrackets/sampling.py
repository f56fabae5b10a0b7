"""Seeded random generators for property tests and CLI spot checks.

Everything takes an explicit random.Random so that runs are reproducible
from a single seed.  Generated Scalars keep small degrees and
coefficients; the point is coverage of the algebraic laws, not stress.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .bracket import HomogeneousBracket, constant_bracket, lower_metric
from .diffpoly import DiffPoly
from .errors import DegenerateMetricError
from .scalar import Scalar


def random_fraction(rng: random.Random, span: int = 5) -> Fraction:
    num = rng.randint(-span, span)
    den = rng.randint(1, span)
    return Fraction(num, den)


def random_polynomial(rng: random.Random, n: int, terms: int = 2, deg: int = 2) -> Scalar:
    """A small polynomial in the coordinates u^1..u^n."""
    out = Scalar.zero()
    for _ in range(rng.randint(1, terms)):
        mono = Scalar.from_fraction(random_fraction(rng))
        for _ in range(rng.randint(0, deg)):
            mono = mono * Scalar.coordinate(rng.randint(1, n))
        out = out + mono
    return out


def random_scalar(rng: random.Random, n: int, terms: int = 2, deg: int = 2) -> Scalar:
    """A small rational function; denominators stay simple by design."""
    num = random_polynomial(rng, n, terms, deg)
    if rng.random() < 0.3:
        den = Scalar.zero()
        while den.is_zero:
            den = random_polynomial(rng, n, 1, deg)
        return num / den
    return num


def random_diffpoly(
    rng: random.Random,
    n: int,
    terms: int = 3,
    max_jet: int = 3,
    max_theta: int = 4,
    max_factors: int = 3,
) -> DiffPoly:
    """A small differential polynomial over random Scalars."""
    out = DiffPoly.zero()
    for _ in range(rng.randint(1, terms)):
        term = DiffPoly.from_scalar(random_scalar(rng, n))
        for _ in range(rng.randint(0, max_factors)):
            if rng.random() < 0.5:
                term = term * DiffPoly.jet(rng.randint(1, n), rng.randint(1, max_jet))
            else:
                term = term * DiffPoly.theta(rng.randint(1, n), rng.randint(0, max_theta))
        out = out + term
    return out


def random_monomial(
    rng: random.Random,
    n: int,
    k: int,
    max_degu: int = 3,
    max_theta_degree: int = 2,
) -> DiffPoly:
    """A single monomial with jet count <= max_degu, for homotopy checks.

    Theta orders run up to k + 2 so that both sides of the projection
    boundary (order k) are exercised.
    """
    term = DiffPoly.one()
    if rng.random() < 0.5:
        term = term * random_scalar(rng, n, 1, 1)
    for _ in range(rng.randint(0, max_degu)):
        term = term * DiffPoly.jet(rng.randint(1, n), rng.randint(1, 3))
    for _ in range(rng.randint(0, max_theta_degree)):
        term = term * DiffPoly.theta(rng.randint(1, n), rng.randint(0, k + 2))
    return term


def random_constant_matrix(rng: random.Random, n: int, parity: int) -> list:
    """An invertible constant matrix, symmetric (parity +1) or skew (-1).

    Skew needs n even; the base is a shifted identity / symplectic block
    so invertibility holds, then a random perturbation is kept only when
    it stays invertible.
    """
    if parity == 1:
        base = [
            [Scalar.from_fraction(Fraction(int(i == j)) * (i + 1)) for j in range(n)]
            for i in range(n)
        ]
    else:
        if n % 2:
            raise ValueError("skew invertible matrices need even size")
        base = [[Scalar.zero() for _ in range(n)] for _ in range(n)]
        half = n // 2
        for i in range(half):
            base[i][half + i] = Scalar.from_fraction(Fraction(i + 1))
            base[half + i][i] = Scalar.from_fraction(Fraction(-(i + 1)))
    pert = [[Scalar.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q = Scalar.from_fraction(random_fraction(rng, 2))
            pert[i][j] = q
            pert[j][i] = q if parity == 1 else -q
    cand = [[base[i][j] + pert[i][j] for j in range(n)] for i in range(n)]
    try:
        lower_metric(cand)
        return cand
    except DegenerateMetricError:
        return base


def random_constant_bracket(rng: random.Random, n: int, k: int) -> HomogeneousBracket:
    """Constant-coefficient bracket with the leading parity forced by k."""
    parity = 1 if k % 2 == 1 else -1
    return constant_bracket(random_constant_matrix(rng, n, parity), k)
