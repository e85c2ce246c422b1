"""Rational points on projective varieties: zero-dimensional solving, hyperplane slicing, lines, grids."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator, Sequence

import sympy

from .algebra import Polynomial, VariableSet, kernel, rank, span_basis
from .groebner import Budget, GroebnerBasis, GroebnerBudgetError, buchberger, krull_dimension_monomial

_X = sympy.Symbol("x")


def rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Distinct rational roots of sum coeffs[k] x^k."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], _X, domain="QQ")
    return sorted({Fraction(int(r.p), int(r.q)) for r in poly.ground_roots()})


def univariate_gcd(polys: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Monic gcd of univariate polynomials given as ascending coefficient lists (0 -> [])."""
    g = None
    for c in polys:
        c = list(c)
        while c and c[-1] == 0:
            c.pop()
        if not c:
            continue
        p = sympy.Poly([sympy.Rational(x.numerator, x.denominator) for x in reversed(c)], _X, domain="QQ")
        g = p if g is None else sympy.gcd(g, p)
    if g is None:
        return []
    g = g.monic()
    return [Fraction(int(x.p), int(x.q)) for x in reversed(g.all_coeffs())]


def _standard_monomials(gb: GroebnerBasis, nvars: int) -> list[tuple] | None:
    """Standard monomials of a zero-dimensional ideal, or None if the quotient is infinite."""
    leads = gb.leading_monomials
    for i in range(nvars):
        if not any(l[i] > 0 and sum(l) == l[i] for l in leads):
            return None
    out = []
    frontier = [(0,) * nvars]
    seen = set(frontier)
    while frontier:
        m = frontier.pop()
        if any(all(a <= b for a, b in zip(l, m)) for l in leads):
            continue
        out.append(m)
        for i in range(nvars):
            e = list(m)
            e[i] += 1
            e = tuple(e)
            if e not in seen:
                seen.add(e)
                frontier.append(e)
    return out


def _minimal_polynomial(gb: GroebnerBasis, var: int, basis: list[tuple]) -> list[Fraction]:
    vs = gb.vars
    index = {m: k for k, m in enumerate(basis)}
    x = Polynomial.var(vs, var)
    power = Polynomial.const(vs, 1)
    rows = []
    for k in range(len(basis) + 1):
        nf = gb.normal_form(power)
        vec = [Fraction(0)] * len(basis)
        for e, c in nf.terms.items():
            vec[index[e]] = c
        rows.append(vec)
        # look for a dependency among the normal forms found so far
        cols = [list(col) for col in zip(*rows)]
        ker = kernel(cols, len(rows)) if cols else []
        if ker:
            return ker[0]
        power = power * x
    raise AssertionError("no minimal polynomial found")  # pragma: no cover


def solve_zero_dimensional(
    gens: Sequence[Polynomial], budget: Budget | None = None, max_points: int = 64
) -> list[tuple[Fraction, ...]] | None:
    """All rational solutions of an affine system, or None if it is not zero-dimensional."""
    gens = [g for g in gens if g]
    if not gens:
        return None
    vs = gens[0].vars
    n = len(vs)
    gb = buchberger(gens, budget)
    if gb.is_unit():
        return []
    basis = _standard_monomials(gb, n)
    if basis is None:
        return None
    results: list[tuple] = []
    var = 0
    mp = _minimal_polynomial(gb, var, basis)
    for r in rational_roots(mp):
        sub = list(gb.polynomials) + [Polynomial.var(vs, var) - r]
        if n == 1:
            results.append((r,))
            continue
        # eliminate the fixed variable and recurse
        rest = VariableSet(tuple(v for k, v in enumerate(vs.names) if k != var))
        images = []
        for k in range(n):
            if k == var:
                images.append(Polynomial.const(rest, r))
            else:
                images.append(Polynomial.var(rest, k - (k > var)))
        reduced = [g.substitute(images, rest) for g in sub]
        reduced = [g for g in reduced if g]
        if any(g.degree() == 0 for g in reduced):
            continue
        if not reduced:  # pragma: no cover - a zero-dimensional ideal cannot lose all equations
            continue
        tails = solve_zero_dimensional(reduced, budget, max_points)
        if tails is None:
            continue
        for t in tails:
            results.append(t[:var] + (r,) + t[var:])
        if len(results) >= max_points:
            break
    return results


def _restrict(gens: Sequence[Polynomial], basis: Sequence[Sequence[Fraction]], chart: bool) -> list[Polynomial]:
    """Pull generators back along t -> sum t_i basis_i; with ``chart`` set t_0 = 1."""
    k = len(basis)
    ts = VariableSet.indexed("_t", k)
    n = len(basis[0])
    images = [Polynomial.linear(ts, [b[i] for b in basis]) for i in range(n)]
    pulled = [g.substitute(images, ts) for g in gens]
    if not chart:
        return pulled
    aff = VariableSet.indexed("_u", k - 1)
    lin = [Polynomial.const(aff, 1)] + aff.gens()
    return [p.substitute(lin, aff) for p in pulled]


def random_vector(n: int, rng: random.Random, box: int = 10) -> list[Fraction]:
    while True:
        v = [Fraction(rng.randint(-box, box)) for _ in range(n)]
        if any(v):
            return v


def slice_points(
    gens: Sequence[Polynomial],
    codim: int,
    rng: random.Random,
    budget: Budget | None = None,
    box: int = 10,
) -> list[list[Fraction]]:
    """Rational points of V(gens) in a random linear subspace of the given codimension."""
    n = len(gens[0].vars)
    k = n - codim
    if k < 1:
        return []
    basis = [random_vector(n, rng, box) for _ in range(k)]
    if rank(basis) < k:
        return []
    if k == 1:
        v = basis[0]
        return [v] if all(g.evaluate(v) == 0 for g in gens) else []
    affine = _restrict(gens, basis, chart=True)
    affine = [p for p in affine if p]
    if not affine:
        return []
    try:
        sols = solve_zero_dimensional(affine, budget)
    except GroebnerBudgetError:
        return []
    if not sols:
        return []
    out = []
    for s in sols:
        coords = (Fraction(1),) + tuple(s)
        out.append([sum(c * b[i] for c, b in zip(coords, basis)) for i in range(n)])
    return out


def line_points(gens: Sequence[Polynomial], rng: random.Random, box: int = 10) -> list[list[Fraction]]:
    """Rational points of V(gens) on a random line: gcd of the restrictions, then rational roots."""
    n = len(gens[0].vars)
    p, q = random_vector(n, rng, box), random_vector(n, rng, box)
    if rank([p, q]) < 2:
        return []
    # points p + s q (s finite) plus q itself
    out = []
    if all(g.evaluate(q) == 0 for g in gens):
        out.append(q)
    univ = []
    one = VariableSet(("_s",))
    images = [Polynomial.linear(one, [q[i]]) + Polynomial.const(one, p[i]) for i in range(n)]
    for g in gens:
        r = g.substitute(images, one)
        coeffs = [Fraction(0)] * (r.degree() + 1 if r else 1)
        for e, c in r.terms.items():
            coeffs[e[0]] = c
        univ.append(coeffs)
    g = univariate_gcd(univ)
    if not g:  # every restriction vanishes: the whole line lies in the zero set
        return out + [p]
    for s in rational_roots(g):
        out.append([p[i] + s * q[i] for i in range(n)])
    return out


def plane_points(gens: Sequence[Polynomial], rng: random.Random, budget: Budget | None = None, box: int = 10):
    """Rational points on a random projective plane (zero-dimensional part only)."""
    n = len(gens[0].vars)
    if n < 3:
        return []
    return slice_points(gens, n - 3, rng, budget, box)


def _chord(gens: Sequence[Polynomial], rng: random.Random, budget: Budget | None, box: int):
    """Rational line through the points of a curve on a random hyperplane, as vectors spanning it.

    The hyperplane section of a degree-2 curve is a pair of points, possibly conjugate over a
    quadratic field; the affine linear polynomials in the section ideal cut out the joining line.
    """
    n = len(gens[0].vars)
    basis = [random_vector(n, rng, box) for _ in range(n - 1)]
    if rank(basis) < n - 1:
        return None
    affine = [p for p in _restrict(gens, basis, chart=True) if p]
    if not affine:
        return None
    try:
        gb = buchberger(affine, budget)
    except GroebnerBudgetError:
        return None
    if gb.is_unit():
        return None
    k = n - 2
    std = _standard_monomials(gb, k)
    if std is None or len(std) != 2:
        return None
    index = {m: i for i, m in enumerate(std)}
    vs = affine[0].vars
    # images of 1, u_1, ..., u_k in the two-dimensional quotient
    images = []
    for p in [Polynomial.const(vs, 1)] + vs.gens():
        vec = [Fraction(0)] * 2
        for e, c in gb.normal_form(p).terms.items():
            vec[index[e]] = c
        images.append(vec)
    rels = kernel([list(col) for col in zip(*images)], k + 1)
    if len(rels) != k - 1:
        return None
    # affine line {u : rels . (1, u) = 0}: chart coordinates (1, u) -> sum coords_i basis_i
    line = kernel(rels, k + 1)
    return [[sum(c * b[i] for c, b in zip(v, basis)) for i in range(n)] for v in line]


def conic_points(
    gens: Sequence[Polynomial], rng: random.Random, budget: Budget | None = None, box: int = 10, tries: int = 4
) -> tuple[list[list[Fraction]], bool]:
    """Rational points of a curve of degree 2 spanning a plane: find the plane, then solve the conic.

    Returns (points, anisotropic); the flag is set when the plane conic provably has no rational point.
    """
    from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic

    n = len(gens[0].vars)
    if n < 3:
        return []
    vectors: list = []
    for _ in range(tries):
        chord = _chord(gens, rng, budget, box)
        if chord:
            vectors += chord
        plane = span_basis(vectors)
        if len(plane) >= 3:
            break
    if len(plane) != 3:
        return [], False
    ternary = [p for p in _restrict(gens, plane, chart=False) if p]
    if not ternary or any(p.degree() != 2 for p in ternary):
        return [], False
    q = ternary[0]
    syms = sympy.symbols("_a _b _c")
    expr = sum(
        sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s**e for s, e in zip(syms, exp)])
        for exp, c in q.terms.items()
    )
    expr = sympy.together(expr)
    num, _ = sympy.fraction(expr)
    num = sympy.expand(num)
    sol = diop_ternary_quadratic(num)
    if sol is None or sol[0] is None:
        # Legendre's criterion inside sympy; only trusted for a nondegenerate conic
        hess = sympy.hessian(num, syms)
        return [], hess.det() != 0
    t = [Fraction(int(v)) for v in sol]
    if not any(t):
        return [], False
    point = [sum(t[j] * plane[j][i] for j in range(3)) for i in range(n)]
    return ([point] if all(g.evaluate(point) == 0 for g in gens) else []), False


def grid_points(n: int, height: int) -> Iterator[list[Fraction]]:
    """Integer points with entries in [-height, height], first nonzero entry positive, by increasing height."""
    for h in range(1, height + 1):
        for v in itertools.product(range(-h, h + 1), repeat=n):
            if max(abs(x) for x in v) != h:
                continue
            first = next(x for x in v if x)
            if first > 0:
                yield [Fraction(x) for x in v]


def affine_dimension(gens: Sequence[Polynomial], budget: Budget | None = None) -> int:
    vs = gens[0].vars
    gb = buchberger(gens, budget)
    return krull_dimension_monomial(gb.leading_monomials, len(vs))


def span_of_points(points: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    return span_basis(points)


__all__ = [
    "affine_dimension",
    "conic_points",
    "grid_points",
    "line_points",
    "plane_points",
    "random_vector",
    "rational_roots",
    "slice_points",
    "solve_zero_dimensional",
    "span_of_points",
    "univariate_gcd",
]
