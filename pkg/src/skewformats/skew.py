"""Matrices of linear forms, skew-symmetric matrices, Pfaffians and the congruence action."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .algebra import (
    Polynomial,
    RationalMatrix,
    VariableSet,
    as_rational,
    bareiss_rank,
)


class LinearMatrix:
    """An r x s matrix whose entries are linear forms over one variable set."""

    __slots__ = ("vars", "rows", "_coeffs")

    def __init__(self, variables: VariableSet, rows: Sequence[Sequence[Polynomial]]):
        self.vars = variables
        self.rows = tuple(tuple(r) for r in rows)
        if self.rows and len({len(r) for r in self.rows}) != 1:
            raise ValueError("ragged matrix")
        for r in self.rows:
            for p in r:
                if p.vars != variables:
                    raise ValueError("entry over a different variable set")
                if not p.is_linear_form():
                    raise ValueError(f"entry is not a linear form: {p}")
        self._coeffs = None

    @classmethod
    def zeros(cls, variables: VariableSet, m: int, n: int):
        z = Polynomial.zero(variables)
        return cls(variables, [[z] * n for _ in range(m)])

    @classmethod
    def from_coeff_matrices(cls, variables: VariableSet, mats: Sequence[RationalMatrix]):
        """Inverse of :meth:`coeff_matrices`: entry (i,j) is sum_v mats[v][i,j] * x_v."""
        if len(mats) != len(variables):
            raise ValueError("need one coefficient matrix per variable")
        m, n = mats[0].shape
        rows = [
            [Polynomial.linear(variables, [mats[v][i, j] for v in range(len(variables))]) for j in range(n)]
            for i in range(m)
        ]
        return cls(variables, rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij) -> Polynomial:
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for r in self.rows:
            yield from r

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.entries())

    def coeff_matrices(self) -> list[RationalMatrix]:
        """One constant matrix per variable: M = sum_v x_v * M_v."""
        if self._coeffs is None:
            m, n = self.shape
            k = len(self.vars)
            mats = [[[Fraction(0)] * n for _ in range(m)] for _ in range(k)]
            for i, r in enumerate(self.rows):
                for j, p in enumerate(r):
                    for exp, c in p.terms.items():
                        mats[exp.index(1)][i][j] = c
            self._coeffs = [RationalMatrix(M) for M in mats]
        return self._coeffs

    def evaluate(self, point: Sequence) -> RationalMatrix:
        if len(point) != len(self.vars):
            raise ValueError(f"point has length {len(point)}, expected {len(self.vars)}")
        return RationalMatrix([[p.evaluate(point) for p in r] for r in self.rows])

    def transpose(self) -> "LinearMatrix":
        return LinearMatrix(self.vars, list(zip(*self.rows)))

    def transform(self, S: RationalMatrix, T: RationalMatrix) -> "LinearMatrix":
        """S M T."""
        mats = [S @ Mv @ T for Mv in self.coeff_matrices()]
        return LinearMatrix.from_coeff_matrices(self.vars, mats)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "LinearMatrix":
        return LinearMatrix(self.vars, [[self.rows[i][j] for j in cols] for i in rows])

    def change_coordinates(self, images: Sequence[Polynomial]) -> "LinearMatrix":
        """Substitute variable v -> images[v] (linear forms over a possibly new variable set)."""
        target = images[0].vars
        mats = self.coeff_matrices()
        m, n = self.shape
        rows = []
        for i in range(m):
            row = []
            for j in range(n):
                acc = Polynomial.zero(target)
                for v, Mv in enumerate(mats):
                    if Mv[i, j]:
                        acc = acc + images[v].scale(Mv[i, j])
                row.append(acc)
            rows.append(row)
        return type(self)(target, rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearMatrix) and self.vars == other.vars and self.rows == other.rows

    def __hash__(self):
        return hash((self.vars, self.rows))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({[[str(p) for p in r] for r in self.rows]})"

    def pretty(self) -> str:
        cells = [[str(p) for p in r] for r in self.rows]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("  ".join(c.rjust(width) for c in r) for r in cells)


class SkewMatrix(LinearMatrix):
    """A square skew-symmetric matrix of linear forms (indices start at 0)."""

    __slots__ = ()

    def __init__(self, variables: VariableSet, rows):
        super().__init__(variables, rows)
        m, n = self.shape
        if m != n:
            raise ValueError("skew matrix must be square")
        for i in range(n):
            if self.rows[i][i]:
                raise ValueError(f"nonzero diagonal entry at {i}")
            for j in range(i + 1, n):
                if self.rows[i][j] != -self.rows[j][i]:
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) are not opposite")

    @classmethod
    def from_upper(cls, variables: VariableSet, n: int, upper: dict) -> "SkewMatrix":
        """Build from {(i, j): form} with i < j; missing entries are zero."""
        z = Polynomial.zero(variables)
        rows = [[z] * n for _ in range(n)]
        for (i, j), p in upper.items():
            if not i < j:
                raise ValueError(f"upper-triangle key expected, got {(i, j)}")
            if not isinstance(p, Polynomial):
                raise TypeError("entries must be Polynomial linear forms")
            rows[i][j] = p
            rows[j][i] = -p
        return cls(variables, rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def upper(self) -> dict:
        return {(i, j): self.rows[i][j] for i in range(self.n) for j in range(i + 1, self.n)}

    @classmethod
    def from_coeff_matrices(cls, variables, mats):
        base = LinearMatrix.from_coeff_matrices(variables, mats)
        return cls(variables, base.rows)


class Congruence(RationalMatrix):
    """An invertible rational matrix acting by M -> S M S^t."""

    __slots__ = ()

    def __init__(self, rows):
        super().__init__(rows.rows if isinstance(rows, RationalMatrix) else rows)
        if not self.is_invertible():
            raise ValueError("congruence matrix must be invertible")


# ---------------------------------------------------------------------------
# Pfaffians


@lru_cache(maxsize=None)
def perfect_matchings(n: int) -> tuple:
    """All perfect matchings of range(n) as (sign, ((i1, j1), ...)) with i_k < j_k."""

    def rec(rest):
        if not rest:
            yield ()
            return
        first = rest[0]
        for k in range(1, len(rest)):
            pair = (first, rest[k])
            for tail in rec(rest[1:k] + rest[k + 1 :]):
                yield (pair,) + tail

    out = []
    for m in rec(tuple(range(n))):
        perm = [x for pair in m for x in pair]
        out.append((_perm_sign(perm), m))
    return tuple(out)


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def _require_skew(M) -> None:
    if not isinstance(M, SkewMatrix):
        raise TypeError("expected a SkewMatrix")


def pfaffian(M: SkewMatrix) -> Polynomial:
    """Pfaffian as a signed sum over perfect matchings; Pf([[0,a],[-a,0]]) = a."""
    _require_skew(M)
    n = M.n
    if n % 2:
        raise ValueError("Pfaffian of an odd-size matrix")
    total = Polynomial.zero(M.vars)
    one = Polynomial.const(M.vars, 1)
    for sign, matching in perfect_matchings(n):
        term = one
        for i, j in matching:
            e = M.rows[i][j]
            if not e:
                term = None
                break
            term = term * e
        if term is not None:
            total = total + (term if sign > 0 else -term)
    return total


def delete_rows_cols(M: SkewMatrix, i: int, j: int) -> SkewMatrix:
    """M_{ij}: delete rows and columns i and j."""
    _require_skew(M)
    n = M.n
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"invalid index pair ({i}, {j}) for size {n}")
    keep = [k for k in range(n) if k not in (i, j)]
    return SkewMatrix(M.vars, [[M.rows[a][b] for b in keep] for a in keep])


def pfaffian_laplace(M: SkewMatrix, i: int) -> Polynomial:
    """Expansion along row i with sign exponent i + j + 1 + theta(i, j)."""
    _require_skew(M)
    n = M.n
    if n % 2:
        raise ValueError("Pfaffian of an odd-size matrix")
    if not 0 <= i < n:
        raise IndexError(f"row {i} out of range")
    if n == 0:
        return Polynomial.const(M.vars, 1)
    total = Polynomial.zero(M.vars)
    for j in range(n):
        if j == i or not M.rows[i][j]:
            continue
        theta = 0 if i <= j else 1
        minor = delete_rows_cols(M, i, j)
        sub = pfaffian_laplace(minor, 0) if minor.n else Polynomial.const(M.vars, 1)
        term = M.rows[i][j] * sub
        total = total + (term if (i + j + 1 + theta) % 2 == 0 else -term)
    return total


def pfaffians4(M: SkewMatrix) -> list[Polynomial]:
    """The fifteen 4x4 Pfaffians Pf(M_ij), 0 <= i < j <= 5, in lexicographic order."""
    _require_skew(M)
    if M.n != 6:
        raise ValueError("pfaffians4 needs a 6x6 matrix")
    return [pfaffian(delete_rows_cols(M, i, j)) for i, j in combinations(range(6), 2)]


def determinant(M: LinearMatrix) -> Polynomial:
    """Determinant by cofactor expansion along the first row (memoised on column subsets)."""
    m, n = M.shape
    if m != n:
        raise ValueError("determinant of a non-square matrix")
    one = Polynomial.const(M.vars, 1)
    cache: dict = {}

    def rec(row: int, cols: tuple) -> Polynomial:
        if row == n:
            return one
        if cols in cache:
            return cache[cols]
        total = Polynomial.zero(M.vars)
        for k, c in enumerate(cols):
            e = M.rows[row][c]
            if not e:
                continue
            term = e * rec(row + 1, cols[:k] + cols[k + 1 :])
            total = total + (term if k % 2 == 0 else -term)
        cache[cols] = total
        return total

    return rec(0, tuple(range(n)))


# ---------------------------------------------------------------------------
# the congruence action and related constructions


def apply_congruence(S: RationalMatrix, M: SkewMatrix) -> SkewMatrix:
    """S M S^t."""
    _require_skew(M)
    if not isinstance(S, Congruence):
        S = Congruence(S)
    if S.nrows != M.n:
        raise ValueError("size mismatch between S and M")
    mats = [S @ Mv @ S.T for Mv in M.coeff_matrices()]
    return SkewMatrix.from_coeff_matrices(M.vars, mats)


def reversal_matrix(n: int) -> Congruence:
    return Congruence(RationalMatrix.permutation(list(range(n - 1, -1, -1))))


def reverse(M: SkewMatrix) -> SkewMatrix:
    """M^rev with entries m_{n-i-1, n-j-1}."""
    _require_skew(M)
    n = M.n
    return SkewMatrix(M.vars, [[M.rows[n - 1 - i][n - 1 - j] for j in range(n)] for i in range(n)])


def permute(M: SkewMatrix, perm: Sequence[int]) -> SkewMatrix:
    """Entry (i, j) of the result is M[perm[i], perm[j]]."""
    return SkewMatrix(M.vars, [[M.rows[a][b] for b in perm] for a in perm])


def flipped_variables(M: LinearMatrix, prefix: str = "y") -> VariableSet:
    ys = VariableSet.indexed(prefix, M.shape[0])
    clash = set(ys.names) & set(M.vars.names)
    if clash:
        raise ValueError(f"auxiliary variables collide with matrix variables: {sorted(clash)}")
    return ys


def flipped(M: LinearMatrix, prefix: str = "y") -> LinearMatrix:
    """Row i is d/dl_i of (y_0, ..., y_{n-1}) M; the result is dim V x n over fresh y-variables."""
    ys = flipped_variables(M, prefix)
    mats = M.coeff_matrices()
    n = M.shape[1]
    rows = []
    for Mv in mats:
        rows.append([Polynomial.linear(ys, [Mv[k, j] for k in range(M.shape[0])]) for j in range(n)])
    return LinearMatrix(ys, rows)


def unflip(Mhat: LinearMatrix, variables: VariableSet) -> LinearMatrix:
    """Reconstruct M from its flipped matrix."""
    k, n = Mhat.shape
    if k != len(variables):
        raise ValueError("row count must equal the number of matrix variables")
    ymats = Mhat.coeff_matrices()
    mats = []
    for v in range(k):
        mats.append(RationalMatrix([[ymats[r][v, j] for j in range(n)] for r in range(len(ymats))]))
    return LinearMatrix.from_coeff_matrices(variables, mats)


def double_skew_decompose(M: SkewMatrix):
    """(N0, N1, N2) if all 3x3 blocks of the 6x6 matrix are skew, else None."""
    _require_skew(M)
    if M.n != 6:
        raise ValueError("double skew structure needs a 6x6 matrix")
    top, bot = range(3), range(3, 6)
    N1 = M.submatrix(top, bot)
    for i in range(3):
        if N1[i, i]:
            return None
        for j in range(i + 1, 3):
            if N1[i, j] != -N1[j, i]:
                return None
    return (
        SkewMatrix(M.vars, M.submatrix(top, top).rows),
        SkewMatrix(M.vars, N1.rows),
        SkewMatrix(M.vars, M.submatrix(bot, bot).rows),
    )


def rank_at_point(M: LinearMatrix, point: Sequence) -> int:
    """Exact rank of M evaluated at a rational point."""
    pt = [as_rational(x) for x in point]
    return bareiss_rank(M.evaluate(pt).rows)


def entry_span(M: LinearMatrix) -> list[Polynomial]:
    from .algebra import polynomial_span_basis

    return polynomial_span_basis([p for p in M.entries() if p])
