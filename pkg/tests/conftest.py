"""Shared generators for randomized tests.

Everything is driven by explicit random.Random seeds so failures replay.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from phasetrop.hahn import (GR_ONE, GaussianRational, HahnPoly, HahnScalar,
                            ONE, ZERO, gaussian, t_power)
from phasetrop.polys import ValuedPoly


def rand_coeff(rng: random.Random, zero_ok: bool = False) -> GaussianRational:
    while True:
        c = gaussian(Fraction(rng.randint(-4, 4), rng.choice([1, 1, 2])),
                     Fraction(rng.randint(-2, 2), 1))
        if zero_ok or not c.is_zero():
            return c


def rand_exponent(rng: random.Random, span: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice([1, 1, 2]))


def rand_scalar(rng: random.Random, max_terms: int = 2,
                fraction: bool = False, zero_ok: bool = False) -> HahnScalar:
    """Small Hahn scalar; polynomial by default, optionally a fraction."""
    def poly_part(nmin=1):
        terms = [(rand_exponent(rng), rand_coeff(rng))
                 for _ in range(rng.randint(nmin, max_terms))]
        return HahnScalar(HahnPoly.from_terms(terms))

    num = poly_part(0 if zero_ok else 1)
    if zero_ok and rng.random() < 0.1:
        num = ZERO
    if fraction and rng.random() < 0.4:
        den = poly_part()
        while den.is_zero():
            den = poly_part()
        return num / den
    return num


def rand_bounded_scalar(rng: random.Random) -> HahnScalar:
    """Scalar with valuation <= 0 (a 'bounded' coefficient)."""
    terms = [(Fraction(-abs(rng.randint(0, 3)), rng.choice([1, 2])), rand_coeff(rng))
             for _ in range(rng.randint(1, 2))]
    return HahnScalar(HahnPoly.from_terms(terms))


def rand_monomial(rng: random.Random, nvars: int, deg: int) -> tuple[int, ...]:
    u = [0] * nvars
    for _ in range(rng.randint(0, deg)):
        u[rng.randrange(nvars)] += 1
    return tuple(u)


def rand_poly(rng: random.Random, nvars: int, deg: int = 3,
              max_terms: int = 4, fraction_coeffs: bool = False) -> ValuedPoly:
    while True:
        acc = {}
        for _ in range(rng.randint(1, max_terms)):
            u = rand_monomial(rng, nvars, deg)
            acc[u] = rand_scalar(rng, fraction=fraction_coeffs)
        p = ValuedPoly.from_dict(nvars, acc)
        if not p.is_zero():
            return p


def rand_triangular(rng: random.Random, n: int) -> list[list[HahnScalar]]:
    """Upper unitriangular matrix with bounded entries above the diagonal."""
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if j == i:
                row.append(ONE)
            elif j > i and rng.random() < 0.7:
                row.append(rand_bounded_scalar(rng))
            else:
                row.append(ZERO)
        rows.append(row)
    return rows


def rand_vector(rng: random.Random, n: int) -> list[HahnScalar]:
    while True:
        v = [rand_scalar(rng, fraction=True, zero_ok=True) for _ in range(n)]
        if any(not z.is_zero() for z in v):
            return v


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240811)
