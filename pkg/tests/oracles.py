"""Independent reference computations built on sympy and brute-force enumeration.

Nothing here calls into the package's algorithms; only plain data is converted.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import sympy


def to_sympy(p, symbols):
    """Polynomial -> sympy expression over the given symbols (one per variable)."""
    expr = sympy.Integer(0)
    for exp, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(symbols, exp):
            term *= s**e
        expr += term
    return expr


def symbols_for(vs):
    return sympy.symbols(list(vs.names)) if len(vs) > 1 else (sympy.Symbol(vs.names[0]),)


def sympy_matrix(M):
    syms = symbols_for(M.vars)
    return sympy.Matrix([[to_sympy(e, syms) for e in row] for row in M.rows]), syms


def leibniz_pfaffian(A: sympy.Matrix):
    """Pf(A) = 1/(2^k k!) sum over all permutations of sgn * prod a_{s(2i), s(2i+1)}."""
    n = A.shape[0]
    k = n // 2
    total = sympy.Integer(0)
    for perm in itertools.permutations(range(n)):
        sign = sympy.combinatorics.Permutation(list(perm)).signature()
        term = sympy.Integer(sign)
        for i in range(k):
            term *= A[perm[2 * i], perm[2 * i + 1]]
        total += term
    return sympy.expand(total / (2**k * math.factorial(k)))


def pf4(A, idx):
    a, b, c, d = idx
    return A[a, b] * A[c, d] - A[a, c] * A[b, d] + A[a, d] * A[b, c]


def span_rank(exprs, syms) -> int:
    """Dimension of the Q-span of polynomial expressions."""
    polys = [sympy.Poly(e, *syms) for e in exprs if sympy.expand(e) != 0]
    if not polys:
        return 0
    monos = sorted({m for p in polys for m in p.as_dict()})
    rows = [[p.as_dict().get(m, 0) for m in monos] for p in polys]
    return sympy.Matrix(rows).rank()


def d4_oracle(M) -> int:
    A, syms = sympy_matrix(M)
    n = A.shape[0]
    pfs = []
    for i, j in itertools.combinations(range(n), 2):
        rest = [k for k in range(n) if k not in (i, j)]
        pfs.append(sympy.expand(pf4(A, rest)))
    return span_rank(pfs, syms)


def numeric_rank(M, point) -> int:
    A = sympy.Matrix([[sum(sympy.Rational(c.numerator, c.denominator) * point[e.index(1)]
                           for e, c in entry.terms.items()) if entry.terms else 0
                       for entry in row] for row in M.rows])
    return A.rank()


# ---------------------------------------------------------------------------
# Hilbert polynomial by counting standard monomials


def _monomials(nvars: int, degree: int):
    for c in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in c:
            e[i] += 1
        yield tuple(e)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def hilbert_counts(leads, nvars: int, degrees):
    return [sum(1 for m in _monomials(nvars, d) if not any(_divides(l, m) for l in leads)) for d in degrees]


def dim_degree_from_leads(leads, nvars: int, start: int = 8, span: int = 8):
    """Projective dimension and degree from values of the Hilbert function at large degrees.

    Fits the Hilbert polynomial by finite differences; (-1, 0) when the function vanishes.
    """
    degrees = list(range(start, start + span))
    values = hilbert_counts(leads, nvars, degrees)
    if all(v == 0 for v in values):
        return -1, 0
    diffs = values
    order = 0
    while any(diffs[k] != diffs[0] for k in range(len(diffs))):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        order += 1
    # the order-th difference of a degree-order polynomial with leading coefficient deg/order! is deg
    return order, diffs[0]


def sympy_dim_degree(exprs, syms, start: int = 8, span: int = 8):
    """(projective dimension, degree) of a homogeneous ideal via sympy's grevlex basis."""
    G = sympy.groebner([e for e in exprs if e != 0], *syms, order="grevlex")
    leads = [sympy.Poly(g, *syms).monoms(order="grevlex")[0] for g in G.exprs]
    return dim_degree_from_leads(leads, len(syms), start, span)


def sympy_in_ideal(expr, gens, syms) -> bool:
    G = sympy.groebner(gens, *syms, order="grevlex")
    return G.contains(expr)


def sympy_in_radical(expr, gens, syms) -> bool:
    t = sympy.Symbol("_rab")
    G = sympy.groebner(list(gens) + [1 - t * expr], *syms, t, order="grevlex")
    return G.exprs == [1]


# ---------------------------------------------------------------------------
# squarefree monomial ideals: zero patterns


def squarefree_dim_degree(supports, nvars: int):
    """Dimension and degree of V(I) in P^{n-1} for the ideal generated by prod_{i in S} x_i, S in supports.

    A point with zero set Z lies in V iff Z meets every support; the top-dimensional pieces are the
    coordinate subspaces of the minimal such Z, each of degree one.
    """
    best, count = -1, 0
    for size in range(nvars + 1):
        for Z in itertools.combinations(range(nvars), size):
            if all(set(S) & set(Z) for S in supports):
                d = nvars - size - 1
                if d > best:
                    best, count = d, 1
                elif d == best:
                    count += 1
        if best >= 0:
            break
    return (best, count) if best >= 0 else (-1, 0)


def frac(x) -> Fraction:
    return Fraction(x)
