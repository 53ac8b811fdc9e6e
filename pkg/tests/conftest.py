import random
from fractions import Fraction

import pytest

from g2forge import (
    EXACT,
    FLOAT,
    G2Structure,
    KForm,
    Metric,
    parse_form,
    parse_salamon,
)
from g2forge.exterior import MONOMIALS
from g2forge import linalg

SALAMON_H = "(0,0,-37,47,2*14+57,-2*24+67,0)"
SALAMON_ABELIAN = "(0,0,0,0,0,0,0)"
SALAMON_N52 = "(0,0,0,12,13,0,0)"
MODEL_PHI = "e127 + e347 + e567 + e135 - e146 - e236 - e245"


@pytest.fixture(scope="session")
def h_exact():
    return parse_salamon(SALAMON_H, EXACT)


@pytest.fixture(scope="session")
def h_float():
    return parse_salamon(SALAMON_H, FLOAT)


@pytest.fixture(scope="session")
def abelian_exact():
    return parse_salamon(SALAMON_ABELIAN, EXACT)


@pytest.fixture(scope="session")
def n52_exact():
    return parse_salamon(SALAMON_N52, EXACT)


@pytest.fixture(scope="session")
def phi_exact():
    return parse_form(MODEL_PHI, EXACT)


@pytest.fixture(scope="session")
def phi_float():
    return parse_form(MODEL_PHI, FLOAT)


@pytest.fixture(scope="session")
def structure_exact(phi_exact):
    return G2Structure.from_phi(phi_exact)


@pytest.fixture(scope="session")
def structure_float(phi_float):
    return G2Structure.from_phi(phi_float)


def random_form(rng, degree, field, max_terms=5, denom=3):
    """Sparse random form with small rational (or float) coefficients."""
    monos = rng.sample(MONOMIALS[degree], k=min(max_terms, len(MONOMIALS[degree])))
    terms = {}
    for mono in monos:
        num = rng.randint(-6, 6)
        if num == 0:
            continue
        if field.exact:
            terms[mono] = Fraction(num, rng.randint(1, denom))
        else:
            terms[mono] = num + rng.random() - 0.5
    return KForm(degree, terms, field)


def random_vector(rng, field):
    from g2forge import Vector

    comps = [rng.randint(-4, 4) for _ in range(7)]
    return Vector(comps, field)


def random_exact_pd_metric(rng):
    """g = A^T A with integer A, so det g is a perfect square (exact star works)."""
    while True:
        a = [[rng.randint(-2, 2) for _ in range(7)] for _ in range(7)]
        for i in range(7):
            a[i][i] += 3
        if linalg.det([[Fraction(v) for v in row] for row in a], EXACT) != 0:
            break
    at = linalg.transpose(a)
    gram = linalg.mat_mul(at, a)
    return Metric([[Fraction(v) for v in row] for row in gram], EXACT)


def random_float_pd_metric(rng):
    a = [[rng.uniform(-1, 1) for _ in range(7)] for _ in range(7)]
    for i in range(7):
        a[i][i] += 3.0
    gram = linalg.mat_mul(linalg.transpose(a), a)
    return Metric(gram, FLOAT)


def seeded(seed=20240811):
    return random.Random(seed)
