"""Zero/star format patterns, form checks, and constructive classifiers for small degenerate matrices."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (
    Polynomial,
    RationalMatrix,
    VariableSet,
    complete_basis,
    kernel,
    span_basis,
)
from .skew import (
    LinearMatrix,
    SkewMatrix,
    apply_congruence,
    determinant,
    double_skew_decompose,
    pfaffian,
)


class Kind(enum.Enum):
    PLAIN = "plain"
    SKEW = "skew"
    DOUBLE_SKEW = "double-skew"


class FormatError(ValueError):
    """Input violates a classifier's precondition or no verified witness was found."""


@dataclass(frozen=True)
class FormatPattern:
    name: str
    mask: tuple[tuple[bool, ...], ...]  # True = star
    kind: Kind = Kind.PLAIN

    def __post_init__(self):
        if not self.mask or len({len(r) for r in self.mask}) != 1:
            raise ValueError("mask must be a non-empty rectangle")
        if self.kind is not Kind.PLAIN:
            n = len(self.mask)
            if len(self.mask[0]) != n:
                raise ValueError("skew patterns must be square")
            for i in range(n):
                if self.mask[i][i]:
                    raise ValueError("skew patterns need a zero diagonal")
                for j in range(n):
                    if self.mask[i][j] != self.mask[j][i]:
                        raise ValueError("skew patterns need a symmetric mask")

    @classmethod
    def from_rows(cls, name: str, rows: Sequence[str], kind: Kind = Kind.PLAIN) -> "FormatPattern":
        return cls(name, tuple(tuple(c == "*" for c in r) for r in rows), kind)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.mask), len(self.mask[0])

    def zeros(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.mask) for j, s in enumerate(r) if not s]

    def stars(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.mask) for j, s in enumerate(r) if s]

    def grid(self) -> list[str]:
        return ["".join("*" if s else "0" for s in r) for r in self.mask]

    def to_text(self) -> str:
        return "\n".join([f"name: {self.name}", f"kind: {self.kind.value}", *self.grid()]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FormatPattern":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) < 3 or not lines[0].startswith("name: ") or not lines[1].startswith("kind: "):
            raise ValueError("pattern text needs 'name:' and 'kind:' headers followed by a 0/* grid")
        rows = lines[2:]
        if any(set(r) - {"0", "*"} for r in rows):
            raise ValueError("grid rows may only contain '0' and '*'")
        return cls.from_rows(lines[0][6:], rows, Kind(lines[1][6:]))

    def reversed(self, name: str | None = None) -> "FormatPattern":
        mask = tuple(tuple(reversed(r)) for r in reversed(self.mask))
        return FormatPattern(name or f"rev({self.name})", mask, self.kind)


def reverse_pattern(F: FormatPattern) -> FormatPattern:
    return F.reversed()


_SK, _DS, _PL = Kind.SKEW, Kind.DOUBLE_SKEW, Kind.PLAIN

_CATALOG_ROWS = [
    # 6x6 formats with vanishing Pfaffian
    ("a", _SK, ["0****0", "*0***0", "**0**0", "***0*0", "****00", "000000"]),
    ("b", _SK, ["0*****", "*0****", "**0000", "**0000", "**0000", "**0000"]),
    ("c", _SK, ["0*****", "*0**00", "**0*00", "***000", "*00000", "*00000"]),
    ("d", _DS, ["0**000", "*0*000", "**0000", "0000**", "000*0*", "000**0"]),
    ("e", _DS, ["0**0**", "*0**0*", "**0**0", "0**000", "*0*000", "**0000"]),
    ("f", _DS, ["0*00**", "*00*0*", "000**0", "0**0*0", "*0**00", "**0000"]),
    # reductions at a rank-2 point
    ("hammer", _SK, ["0*****", "*0****", "**0***", "***000", "***000", "***000"]),
    ("arrow", _SK, ["0*****", "*0****", "**0**0", "***0*0", "****00", "**0000"]),
    # not stable / not semistable
    ("NS1", _SK, ["00000*", "00****", "0*0***", "0**0**", "0***0*", "*****0"]),
    ("NS2", _SK, ["0000**", "0000**", "000***", "00*0**", "****0*", "*****0"]),
    ("NS3", _SK, ["000***", "000***", "000***", "***0**", "****0*", "*****0"]),
    ("NSS1", _SK, ["000000", "00****", "0*0***", "0**0**", "0***0*", "0****0"]),
    ("NSS2", _SK, ["00000*", "00000*", "000***", "00*0**", "00**0*", "*****0"]),
    ("NSS3", _SK, ["0000**", "0000**", "0000**", "0000**", "****0*", "*****0"]),
    # degenerate small matrices
    ("sym2", _PL, ["*0", "00"]),
    ("2x2-zero-col", _PL, ["*0", "*0"]),
    ("2x2-zero-row", _PL, ["**", "00"]),
    ("3x3-zero-col", _PL, ["**0", "**0", "**0"]),
    ("3x3-zero-row", _PL, ["***", "***", "000"]),
    ("3x3-block", _PL, ["***", "*00", "*00"]),
    ("3x3-skew", _SK, ["0**", "*0*", "**0"]),
    ("4x4-point", _SK, ["0***", "*000", "*000", "*000"]),
    ("4x4-plane", _SK, ["0**0", "*0*0", "**00", "0000"]),
]

CATALOG: dict[str, FormatPattern] = {
    name: FormatPattern.from_rows(name, rows, kind) for name, kind, rows in _CATALOG_ROWS
}

TABLE_FORMATS = ("a", "b", "c", "d", "e", "f")
NOT_STABLE = ("NS1", "NS2", "NS3")
NOT_SEMISTABLE = ("NSS1", "NSS2", "NSS3")
# congruence (not S,T) patterns among the small ones
_SYMMETRIC_ACTION = {"sym2", "4x4-point", "4x4-plane"}


def pattern(name: str) -> FormatPattern:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown pattern {name!r}; known: {', '.join(CATALOG)}") from None


# ---------------------------------------------------------------------------
# form and witness checks


def has_form(M: LinearMatrix, F: FormatPattern) -> bool:
    """Every zero cell of F holds the zero form in M (kind constraints included)."""
    if M.shape != F.shape:
        raise ValueError(f"matrix shape {M.shape} does not match pattern shape {F.shape}")
    if any(not M[i, j].is_zero() for i, j in F.zeros()):
        return False
    if F.kind is not Kind.PLAIN and not _is_skew(M):
        return False
    if F.kind is Kind.DOUBLE_SKEW and double_skew_decompose(SkewMatrix(M.vars, M.rows)) is None:
        return False
    return True


def _is_skew(M: LinearMatrix) -> bool:
    m, n = M.shape
    return m == n and all((M[i, j] + M[j, i]).is_zero() for i in range(n) for j in range(i, n))


def verify_format_witness(
    M: LinearMatrix,
    S: RationalMatrix,
    F: FormatPattern,
    T: RationalMatrix | None = None,
) -> bool:
    """Check that S M S^t (or S M T when T is given) has form F, with S (and T) invertible."""
    if not S.is_invertible() or (T is not None and not T.is_invertible()):
        return False
    if T is None:
        if not _is_skew(M) and F.name not in _SYMMETRIC_ACTION:
            return False
        image = M.transform(S, S.T)
    else:
        image = M.transform(S, T)
    try:
        return has_form(image, F)
    except ValueError:
        return False


# ---------------------------------------------------------------------------
# small-matrix classifiers


@dataclass(frozen=True)
class SmallFormat:
    """Result of a small classifier: S N T (or S N S^t when T is None) has form ``pattern``."""

    pattern: FormatPattern
    S: RationalMatrix
    T: RationalMatrix | None

    def image(self, N: LinearMatrix) -> LinearMatrix:
        return N.transform(self.S, self.S.T if self.T is None else self.T)


def _stacked_rows(mats: Sequence[RationalMatrix]) -> list[list[Fraction]]:
    return [row for Mv in mats for row in Mv.tolist()]


def constant_right_kernel(N: LinearMatrix) -> list[list[Fraction]]:
    """Basis of {v constant : N v = 0 identically}."""
    return kernel(_stacked_rows(N.coeff_matrices()), N.shape[1])


def constant_left_kernel(N: LinearMatrix) -> list[list[Fraction]]:
    return constant_right_kernel(N.transpose())


def _with_last(vectors_first: list, n: int, last: list) -> RationalMatrix:
    """Invertible matrix whose rows are a completion of ``last`` placed at the end."""
    basis = complete_basis(last, n)
    extra = basis[len(last):]
    return RationalMatrix(vectors_first + extra + last if vectors_first else extra + last)


def _checked(N: LinearMatrix, result: SmallFormat) -> SmallFormat | None:
    ok = verify_format_witness(N, result.S, result.pattern, result.T)
    return result if ok else None


def classify_2x2(N: LinearMatrix, symmetric: bool = False) -> SmallFormat:
    if N.shape != (2, 2):
        raise ValueError("need a 2x2 matrix")
    if not determinant(N).is_zero():
        raise FormatError("determinant does not vanish")
    I = RationalMatrix.identity(2)
    if symmetric:
        if not (N[0, 1] - N[1, 0]).is_zero():
            raise ValueError("matrix is not symmetric")
        if N.is_zero():
            return SmallFormat(CATALOG["sym2"], I, None)
        for Mv in N.coeff_matrices():
            cols = [c for c in Mv.T.tolist() if any(c)]
            if cols:
                v = cols[0]
                S = RationalMatrix(_completion_first([[-v[1], v[0]]], 2))
                res = _checked(N, SmallFormat(CATALOG["sym2"], S, None))
                if res:
                    return res
        raise FormatError("no verified congruence to the single-star form")
    if N.is_zero():
        return SmallFormat(CATALOG["2x2-zero-col"], I, I)
    k = constant_right_kernel(N)
    if k:
        T = _with_last([], 2, [k[0]]).T
        res = _checked(N, SmallFormat(CATALOG["2x2-zero-col"], I, T))
        if res:
            return res
    k = constant_left_kernel(N)
    if k:
        S = _with_last([], 2, [k[0]])
        res = _checked(N, SmallFormat(CATALOG["2x2-zero-row"], S, I))
        if res:
            return res
    raise FormatError("no verified zero-row or zero-column witness")


def _completion_first(last: list, n: int) -> list:
    """Complete ``last`` to a basis and put the new vectors first."""
    basis = complete_basis(last, n)
    return basis[len(last):] + [list(v) for v in last]


def _adjugate(N: LinearMatrix) -> list[list[Polynomial]]:
    n = N.shape[0]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rows = [r for r in range(n) if r != j]
            cols = [c for c in range(n) if c != i]
            minor = determinant(N.submatrix(rows, cols))
            adj[i][j] = minor if (i + j) % 2 == 0 else -minor
    return adj


def _vector_span(vectors_of_polys: list[list[Polynomial]]) -> list[list[Fraction]]:
    """Span of all coefficient vectors: for each polynomial vector and monomial, the coefficient column."""
    vecs = []
    for pv in vectors_of_polys:
        monos = set()
        for p in pv:
            monos.update(p.terms)
        for m in monos:
            vecs.append([p.terms.get(m, Fraction(0)) for p in pv])
    return span_basis(vecs)


def _skew_solutions(N: LinearMatrix) -> list[RationalMatrix]:
    """Basis of {T : N T is skew}, i.e. N_v T + T^t N_v^t = 0 for every coefficient matrix."""
    n = N.shape[0]
    rows = []
    for Mv in N.coeff_matrices():
        A = Mv.tolist()
        for i in range(n):
            for j in range(i, n):
                # (A T)[i][j] + (A T)[j][i] = sum_k A[i][k] T[k][j] + A[j][k] T[k][i]
                eq = [Fraction(0)] * (n * n)
                for k in range(n):
                    eq[k * n + j] += A[i][k]
                    eq[k * n + i] += A[j][k]
                if any(eq):
                    rows.append(eq)
    basis = kernel(rows, n * n)
    return [RationalMatrix([b[r * n:(r + 1) * n] for r in range(n)]) for b in basis]


def _random_combination(mats: list[RationalMatrix], rng: random.Random) -> RationalMatrix:
    out = mats[0].scale(rng.randint(-9, 9))
    for M in mats[1:]:
        out = out + M.scale(rng.randint(-9, 9))
    return out


def classify_3x3_detzero(N: LinearMatrix, seed: int = 0, attempts: int = 20) -> SmallFormat:
    """Put a 3x3 matrix with vanishing determinant into one of the four degenerate forms via S N T."""
    if N.shape != (3, 3):
        raise ValueError("need a 3x3 matrix")
    if not determinant(N).is_zero():
        raise FormatError("determinant does not vanish")
    I = RationalMatrix.identity(3)
    if N.is_zero():
        return SmallFormat(CATALOG["3x3-zero-col"], I, I)

    k = constant_right_kernel(N)
    if k:
        res = _checked(N, SmallFormat(CATALOG["3x3-zero-col"], I, _with_last([], 3, [k[0]]).T))
        if res:
            return res
    k = constant_left_kernel(N)
    if k:
        res = _checked(N, SmallFormat(CATALOG["3x3-zero-row"], _with_last([], 3, [k[0]]), I))
        if res:
            return res

    adj = _adjugate(N)
    right = _vector_span([[adj[i][j] for i in range(3)] for j in range(3)])
    left = _vector_span([adj[i] for i in range(3)])
    if len(right) == 2 and len(left) == 2:
        T = RationalMatrix(_completion_first(right, 3)).T
        S = RationalMatrix(_completion_first(left, 3))
        res = _checked(N, SmallFormat(CATALOG["3x3-block"], S, T))
        if res:
            return res

    sols = _skew_solutions(N)
    if sols:
        rng = random.Random(seed)
        for _ in range(attempts):
            T = _random_combination(sols, rng)
            if T.is_invertible():
                res = _checked(N, SmallFormat(CATALOG["3x3-skew"], I, T))
                if res:
                    return res
    raise FormatError(
        f"no verified witness (right kernel span {len(right)}, left {len(left)}, "
        f"skew solution space {len(sols)})"
    )


def classify_4x4_skew_pfzero(N: SkewMatrix) -> SmallFormat:
    """Congruence putting a 4x4 skew matrix with vanishing Pfaffian into one of the two forms."""
    if N.shape != (4, 4):
        raise ValueError("need a 4x4 skew matrix")
    if not isinstance(N, SkewMatrix):
        N = SkewMatrix(N.vars, N.rows)
    if not pfaffian(N).is_zero():
        raise FormatError("Pfaffian does not vanish")
    if N.is_zero():
        return SmallFormat(CATALOG["4x4-point"], RationalMatrix.identity(4), None)
    k = constant_right_kernel(N)
    if k:
        res = _checked(N, SmallFormat(CATALOG["4x4-plane"], _with_last([], 4, [k[0]]), None))
        if res:
            return res
    # common point u of all the lines: orthogonal to every kernel vector of every coefficient matrix
    kernels = [v for Mv in N.coeff_matrices() if Mv.rank() for v in Mv.kernel()]
    common = kernel(kernels, 4) if kernels else []
    for u in common:
        ann = kernel([u], 4)
        S = RationalMatrix(_completion_first(ann, 4))
        res = _checked(N, SmallFormat(CATALOG["4x4-point"], S, None))
        if res:
            return res
    raise FormatError("no verified witness for either 4x4 form")


# ---------------------------------------------------------------------------
# generic instances


def generic_instance(F: FormatPattern, prefix: str = "z") -> LinearMatrix:
    """A matrix of form F in which every independent star is a fresh variable."""
    m, n = F.shape
    if F.kind is Kind.PLAIN:
        cells = F.stars()
        vs = VariableSet(tuple(f"{prefix}{k}" for k in range(len(cells))))
        gens = vs.gens()
        rows = [[Polynomial.zero(vs)] * n for _ in range(m)]
        for k, (i, j) in enumerate(cells):
            rows[i][j] = gens[k]
        return LinearMatrix(vs, rows)
    if F.kind is Kind.SKEW:
        cells = [(i, j) for i, j in F.stars() if i < j]
        vs = VariableSet(tuple(f"{prefix}{k}" for k in range(len(cells))))
        return SkewMatrix.from_upper(vs, n, dict(zip(cells, vs.gens())))
    # double skew: each 3x3 block is skew, so the off-diagonal block has three free entries
    free: list[tuple[int, int]] = []
    for i, j in F.stars():
        if i >= j:
            continue
        if i < 3 <= j:
            bi, bj = i, j - 3
            if bi < bj:
                free.append((i, j))
        else:
            free.append((i, j))
    vs = VariableSet(tuple(f"{prefix}{k}" for k in range(len(free))))
    gens = dict(zip(free, vs.gens()))
    upper: dict = {}
    for (i, j), g in gens.items():
        upper[(i, j)] = g
        if i < 3 <= j:
            # block entry (bi, bj) with bi < bj; its mirror (bj, bi) sits at (bj, bi + 3)
            bi, bj = i, j - 3
            upper[(bj, bi + 3)] = -g
    for (i, j) in list(upper):
        if not F.mask[i][j]:
            raise ValueError(f"pattern {F.name} is not compatible with a double-skew structure")
    return SkewMatrix.from_upper(vs, n, upper)


def random_invertible(n: int, rng: random.Random, box: int = 3) -> RationalMatrix:
    while True:
        S = RationalMatrix([[rng.randint(-box, box) for _ in range(n)] for _ in range(n)])
        if S.is_invertible():
            return S


def random_congruent(M: SkewMatrix, rng: random.Random, box: int = 3) -> tuple[SkewMatrix, RationalMatrix]:
    """Return (S M S^t, S) for a random invertible integer S."""
    S = random_invertible(M.n, rng, box)
    return apply_congruence(S, M), S


__all__ = [
    "CATALOG",
    "FormatError",
    "FormatPattern",
    "Kind",
    "NOT_SEMISTABLE",
    "NOT_STABLE",
    "SmallFormat",
    "TABLE_FORMATS",
    "classify_2x2",
    "classify_3x3_detzero",
    "classify_4x4_skew_pfzero",
    "constant_left_kernel",
    "constant_right_kernel",
    "generic_instance",
    "has_form",
    "pattern",
    "random_congruent",
    "random_invertible",
    "reverse_pattern",
    "verify_format_witness",
]
