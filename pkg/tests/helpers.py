"""Random builders and hypothesis strategies shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from skewformats.algebra import Polynomial, RationalMatrix, VariableSet
from skewformats.formats import random_invertible
from skewformats.skew import SkewMatrix


def random_form(vs: VariableSet, rng: random.Random, box: int = 3, density: float = 0.7) -> Polynomial:
    return Polynomial.linear(vs, [rng.randint(-box, box) if rng.random() < density else 0 for _ in vs.names])


def random_skew(n: int, nvars: int, rng: random.Random, box: int = 3, zero_rate: float = 0.2) -> SkewMatrix:
    vs = VariableSet.indexed("x", nvars)
    upper = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() >= zero_rate:
                upper[(i, j)] = random_form(vs, rng, box)
    return SkewMatrix.from_upper(vs, n, upper)


def specialize(M: SkewMatrix, nvars: int, rng: random.Random, box: int = 3) -> SkewMatrix:
    """Substitute a random linear form in ``nvars`` fresh variables for every variable of M."""
    xs = VariableSet.indexed("w", nvars)
    images = [random_form(xs, rng, box, density=1.0) for _ in M.vars.names]
    return SkewMatrix(xs, [[p.substitute(images, xs) for p in row] for row in M.rows])


# hypothesis strategies

small_ints = st.integers(min_value=-4, max_value=4)


@st.composite
def polynomials(draw, vs: VariableSet, max_terms: int = 5, max_degree: int = 3):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exp = tuple(draw(st.integers(0, max_degree)) for _ in vs.names)
        if sum(exp) > max_degree:
            continue
        num = draw(st.integers(-6, 6))
        den = draw(st.integers(1, 4))
        terms[exp] = terms.get(exp, Fraction(0)) + Fraction(num, den)
    return Polynomial(vs, {e: c for e, c in terms.items() if c})


@st.composite
def skew_matrices(draw, n: int = 6, nvars: int = 4, box: int = 3):
    vs = VariableSet.indexed("x", nvars)
    upper = {}
    for i in range(n):
        for j in range(i + 1, n):
            coeffs = [draw(st.integers(-box, box)) for _ in range(nvars)]
            upper[(i, j)] = Polynomial.linear(vs, coeffs)
    return SkewMatrix.from_upper(vs, n, upper)


@st.composite
def invertible_matrices(draw, n: int = 6, box: int = 3):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_invertible(n, random.Random(seed), box)


@st.composite
def rational_points(draw, nvars: int, box: int = 5):
    return [Fraction(draw(st.integers(-box, box))) for _ in range(nvars)]


def as_matrix(rows) -> RationalMatrix:
    return RationalMatrix([[Fraction(x) for x in r] for r in rows])
