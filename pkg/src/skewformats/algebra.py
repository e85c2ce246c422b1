"""Exact rational arithmetic: sparse multivariate polynomials and linear algebra over Q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from gmpy2 import mpq


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


@dataclass(frozen=True)
class VariableSet:
    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")

    @classmethod
    def indexed(cls, prefix: str, count: int) -> "VariableSet":
        return cls(tuple(f"{prefix}{i}" for i in range(count)))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def extend(self, *names: str) -> "VariableSet":
        return VariableSet(self.names + tuple(names))

    def gens(self) -> list["Polynomial"]:
        return [Polynomial.var(self, i) for i in range(len(self))]


def grevlex_key(exp: tuple[int, ...]):
    # Larger key means larger monomial.
    return (sum(exp), tuple(-e for e in reversed(exp)))


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero coefficients.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables: VariableSet, terms=None, _trusted: bool = False):
        self.vars = variables
        if _trusted:
            self.terms = terms
        else:
            n = len(variables)
            clean = {}
            for exp, c in (terms or {}).items():
                exp = tuple(exp)
                if len(exp) != n:
                    raise ValueError("exponent vector has wrong length")
                c = as_rational(c)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
                    if not clean[exp]:
                        del clean[exp]
            self.terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, variables: VariableSet) -> "Polynomial":
        return cls(variables, {}, _trusted=True)

    @classmethod
    def const(cls, variables: VariableSet, c) -> "Polynomial":
        c = as_rational(c)
        if not c:
            return cls.zero(variables)
        return cls(variables, {(0,) * len(variables): c}, _trusted=True)

    @classmethod
    def var(cls, variables: VariableSet, which) -> "Polynomial":
        i = variables.index(which) if isinstance(which, str) else which
        exp = [0] * len(variables)
        exp[i] = 1
        return cls(variables, {tuple(exp): Fraction(1)}, _trusted=True)

    @classmethod
    def linear(cls, variables: VariableSet, coeffs: Sequence) -> "Polynomial":
        n = len(variables)
        if len(coeffs) != n:
            raise ValueError("coefficient vector has wrong length")
        terms = {}
        for i, c in enumerate(coeffs):
            c = as_rational(c)
            if c:
                exp = [0] * n
                exp[i] = 1
                terms[tuple(exp)] = c
        return cls(variables, terms, _trusted=True)

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_linear_form(self) -> bool:
        return all(sum(e) == 1 for e in self.terms)

    def linear_coeffs(self) -> list[Fraction]:
        """Coefficient vector of a linear form."""
        if not self.is_linear_form():
            raise ValueError(f"not a linear form: {self}")
        out = [Fraction(0)] * len(self.vars)
        for exp, c in self.terms.items():
            out[exp.index(1)] = c
        return out

    def leading(self):
        """(exponent, coefficient) of the grevlex-leading term."""
        exp = max(self.terms, key=grevlex_key)
        return exp, self.terms[exp]

    def _check(self, other: "Polynomial"):
        if self.vars != other.vars:
            raise ValueError("polynomials live over different variable sets")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.const(self.vars, other)

    # arithmetic
    def __add__(self, other) -> "Polynomial":
        other = self._lift(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp, 0) + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        return Polynomial(self.vars, terms, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.vars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._lift(other) - self

    def scale(self, c) -> "Polynomial":
        c = as_rational(c)
        if not c:
            return Polynomial.zero(self.vars)
        return Polynomial(self.vars, {e: v * c for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return Polynomial(self.vars, terms, _trusted=True)

    def __rmul__(self, other) -> "Polynomial":
        return self.scale(other)

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial.const(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def mul_term(self, exp: tuple[int, ...], c) -> "Polynomial":
        return Polynomial(
            self.vars,
            {tuple(a + b for a, b in zip(e, exp)): v * c for e, v in self.terms.items()},
            _trusted=True,
        )

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(1 / self.leading()[1])

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.const(self.vars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # calculus and evaluation
    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != len(self.vars):
            raise ValueError(f"point has length {len(point)}, expected {len(self.vars)}")
        pt = [as_rational(x) for x in point]
        total = Fraction(0)
        for exp, c in self.terms.items():
            v = c
            for x, e in zip(pt, exp):
                if e:
                    v *= x**e
            total += v
        return total

    def diff(self, which) -> "Polynomial":
        i = self.vars.index(which) if isinstance(which, str) else which
        if not 0 <= i < len(self.vars):
            raise KeyError(f"unknown variable index {i}")
        terms = {}
        for exp, c in self.terms.items():
            if exp[i]:
                e = list(exp)
                e[i] -= 1
                terms[tuple(e)] = c * exp[i]
        return Polynomial(self.vars, terms, _trusted=True)

    def substitute(self, images: Sequence["Polynomial"], target: VariableSet | None = None) -> "Polynomial":
        """Replace variable i by images[i] (all over ``target``)."""
        if len(images) != len(self.vars):
            raise ValueError("need one image per variable")
        target = target or (images[0].vars if images else self.vars)
        out = Polynomial.zero(target)
        powers: dict = {}
        for exp, c in self.terms.items():
            term = Polynomial.const(target, c)
            for i, e in enumerate(exp):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = images[i] ** e
                    term = term * powers[key]
            out = out + term
        return out

    def change_ring(self, target: VariableSet, positions: Sequence[int]) -> "Polynomial":
        """Re-embed into ``target``; variable i goes to slot positions[i]."""
        n = len(target)
        terms = {}
        for exp, c in self.terms.items():
            e = [0] * n
            for i, k in enumerate(exp):
                if k:
                    e[positions[i]] = k
            terms[tuple(e)] = c
        return Polynomial(target, terms, _trusted=True)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=grevlex_key, reverse=True):
            c = self.terms[exp]
            mono = "*".join(
                (name if e == 1 else f"{name}^{e}") for name, e in zip(self.vars.names, exp) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def normalized_linear_form(p: Polynomial) -> Polynomial:
    """Scale a linear form so its first nonzero coefficient is 1 (display only)."""
    coeffs = p.linear_coeffs()
    for c in coeffs:
        if c:
            return p.scale(1 / c)
    return p


# ---------------------------------------------------------------------------
# linear algebra over Q on lists of lists

def _frac_matrix(rows) -> list[list[Fraction]]:
    return [[as_rational(x) for x in row] for row in rows]


def rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = [[mpq(q.numerator, q.denominator) for q in map(as_rational, row)] for row in rows]
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    pivots = []
    r = 0
    for col in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if A[i][col]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][col]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][col]:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
    return [[Fraction(int(x.numerator), int(x.denominator)) for x in row] for row in A], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def bareiss_rank(rows) -> int:
    """Rank via fraction-free (Bareiss) elimination after clearing denominators."""
    A = []
    for row in rows:
        row = [as_rational(x) for x in row]
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        A.append([int(x * den) for x in row])
    if not A or not A[0]:
        return 0
    m, n = len(A), len(A[0])
    prev = 1
    r = 0
    for col in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if A[i][col]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(r + 1, m):
            A[i] = [(A[r][col] * A[i][j] - A[i][col] * A[r][j]) // prev for j in range(n)]
        prev = A[r][col]
        r += 1
    return r


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def kernel(rows, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {v : A v = 0}."""
    if not rows:
        if ncols is None:
            raise ValueError("need ncols for an empty matrix")
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    R, pivots = rref(rows)
    n = len(R[0])
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


@dataclass
class LinearSolution:
    particular: list[Fraction] | None
    kernel: list[list[Fraction]]

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def solve_linear(A, b) -> LinearSolution:
    """Solve A v = b exactly: particular solution (or None if inconsistent) plus kernel basis."""
    A = _frac_matrix(A)
    b = [as_rational(x) for x in b]
    if len(A) != len(b):
        raise ValueError("dimension mismatch between A and b")
    if not A:
        raise ValueError("empty system")
    n = len(A[0])
    if any(len(row) != n for row in A):
        raise ValueError("ragged matrix")
    R, pivots = rref([row + [bi] for row, bi in zip(A, b)])
    if n in pivots:
        return LinearSolution(None, kernel(A))
    v = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        v[p] = R[i][n]
    return LinearSolution(v, kernel(A))


def span_basis(vectors) -> list[list[Fraction]]:
    """Row-reduced basis of the span of the given vectors."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    R, pivots = rref(vectors)
    return R[: len(pivots)]


def complete_basis(vectors, n: int) -> list[list[Fraction]]:
    """Extend independent vectors to a basis of Q^n (new vectors are standard basis vectors)."""
    basis = [list(map(as_rational, v)) for v in vectors]
    if rank(basis) != len(basis) if basis else False:
        raise ValueError("vectors are dependent")
    for i in range(n):
        e = [Fraction(int(i == j)) for j in range(n)]
        if rank(basis + [e]) > len(basis):
            basis.append(e)
        if len(basis) == n:
            break
    return basis


def rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


class RationalMatrix:
    """Immutable dense matrix over Q."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(tuple(as_rational(x) for x in row) for row in rows)
        if self.rows and len({len(r) for r in self.rows}) != 1:
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int) -> "RationalMatrix":
        return cls([[0] * n for _ in range(m)])

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "RationalMatrix":
        """Row i of the result is e_{perm[i]}, so (P M P^t)[i][j] = M[perm[i]][perm[j]]."""
        n = len(perm)
        return cls([[int(j == perm[i]) for j in range(n)] for i in range(n)])

    @classmethod
    def block_diag(cls, *blocks: "RationalMatrix") -> "RationalMatrix":
        n = sum(b.nrows for b in blocks)
        out = [[Fraction(0)] * n for _ in range(n)]
        k = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    out[k + i][k + j] = b.rows[i][j]
            k += b.nrows
        return cls(out)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.rows]

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self.rows)))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows))
        return RationalMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows])

    def apply(self, v: Sequence) -> list[Fraction]:
        return [sum((a * as_rational(b) for a, b in zip(r, v)), Fraction(0)) for r in self.rows]

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c) -> "RationalMatrix":
        c = as_rational(c)
        return RationalMatrix([[a * c for a in r] for r in self.rows])

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def rank(self) -> int:
        return rank(self.rows) if self.rows else 0

    def det(self) -> Fraction:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        A = [list(r) for r in self.rows]
        n = len(A)
        d = Fraction(1)
        for c in range(n):
            p = next((i for i in range(c, n) if A[i][c]), None)
            if p is None:
                return Fraction(0)
            if p != c:
                A[c], A[p] = A[p], A[c]
                d = -d
            d *= A[c][c]
            inv = 1 / A[c][c]
            for i in range(c + 1, n):
                if A[i][c]:
                    f = A[i][c] * inv
                    A[i] = [a - f * b for a, b in zip(A[i], A[c])]
        return d

    def inverse(self) -> "RationalMatrix":
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        R, pivots = rref(aug)
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return RationalMatrix([row[n:] for row in R])

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def kernel(self) -> list[list[Fraction]]:
        return kernel(self.rows, self.ncols)

    def __repr__(self) -> str:
        return "RationalMatrix(" + repr([[str(x) for x in r] for r in self.rows]) + ")"


def coefficient_matrix(polys: Sequence[Polynomial]):
    """Rows of coefficients of the given polynomials over their joint monomial support."""
    if not polys:
        return [], []
    vs = polys[0].vars
    for p in polys:
        if p.vars != vs:
            raise ValueError("polynomials live over different variable sets")
    monos = sorted({e for p in polys for e in p.terms}, key=grevlex_key, reverse=True)
    index = {e: k for k, e in enumerate(monos)}
    rows = []
    for p in polys:
        row = [Fraction(0)] * len(monos)
        for e, c in p.terms.items():
            row[index[e]] = c
        rows.append(row)
    return rows, monos


def span_dimension(polys: Iterable[Polynomial]) -> int:
    """Dimension of the Q-linear span of the given polynomials."""
    polys = list(polys)
    rows, monos = coefficient_matrix(polys)
    if not monos:
        return 0
    return rank(rows)


def polynomial_span_basis(polys: Sequence[Polynomial]) -> list[Polynomial]:
    """A basis (row-reduced) of the span of the given polynomials."""
    polys = list(polys)
    rows, monos = coefficient_matrix(polys)
    if not monos:
        return []
    vs = polys[0].vars
    return [Polynomial(vs, {m: c for m, c in zip(monos, row) if c}, _trusted=True) for row in span_basis(rows)]


def express_in_span(target: Polynomial, basis: Sequence[Polynomial]) -> list[Fraction] | None:
    """Coefficients c with sum c_i basis_i == target, or None if target is outside the span."""
    rows, monos = coefficient_matrix(list(basis) + [target])
    if not monos:
        return [Fraction(0)] * len(basis)
    A = [list(col) for col in zip(*rows[:-1])] if basis else [[] for _ in monos]
    b = rows[-1]
    if not basis:
        return [] if not any(b) else None
    sol = solve_linear(A, b)
    return sol.particular


def divide_exact(p: Polynomial, d: Polynomial) -> Polynomial | None:
    """Quotient p / d if d divides p exactly, else None (multivariate division in grevlex)."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    p._check(d)
    lead_e, lead_c = d.leading()
    q = Polynomial.zero(p.vars)
    r = p
    while r:
        e, c = r.leading()
        shift = tuple(a - b for a, b in zip(e, lead_e))
        if any(s < 0 for s in shift):
            return None
        f = c / lead_c
        q = q + Polynomial(p.vars, {shift: f}, _trusted=True)
        r = r - d.mul_term(shift, f)
    return q
