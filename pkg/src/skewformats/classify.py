"""Witness-producing classification of 6x6 skew matrices of linear forms with vanishing Pfaffian.

Every reduction returns a congruence S with S M S^t in a known zero pattern; results are
re-checked with :func:`verify_format_witness` before they are reported as verified.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    Polynomial,
    RationalMatrix,
    VariableSet,
    complete_basis,
    divide_exact,
    express_in_span,
    kernel,
    polynomial_span_basis,
    rank,
    rational_sqrt,
    solve_linear,
    span_dimension,
)
from .formats import (
    CATALOG,
    FormatError,
    FormatPattern,
    Kind,
    classify_3x3_detzero,
    classify_4x4_skew_pfzero,
    generic_instance,
    has_form,
    random_invertible,
    verify_format_witness,
)
from .groebner import EMPTY, Budget, GroebnerBudgetError, Ideal, hilbert_data
from .invariants import (
    Fingerprint,
    find_pattern_witness,
    fingerprint,
    normal_form,
    p4_fingerprint,
)
from .points import conic_points, line_points, plane_points, slice_points
from .skew import SkewMatrix, apply_congruence, delete_rows_cols, pfaffian, pfaffians4, rank_at_point


class ClassificationError(RuntimeError):
    """A reduction step failed in a way the theory rules out (internal inconsistency)."""


# Lemma form used on the way from the arrow form to (a), (b), (c)
NS1_LEMMA = FormatPattern.from_rows(
    "ns1-lemma", ["0*****", "*0***0", "**0**0", "***0*0", "****00", "*00000"], Kind.SKEW
)

HAMMER_LABELS = {"3x3-zero-col": "a", "3x3-zero-row": "b", "3x3-block": "c", "3x3-skew": "e"}


# ---------------------------------------------------------------------------
# small helpers


def _identity(n: int = 6) -> RationalMatrix:
    return RationalMatrix.identity(n)


def _elementary(entries: dict, n: int = 6) -> RationalMatrix:
    """Identity plus the given {(i, j): value} entries."""
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for (i, j), v in entries.items():
        rows[i][j] += Fraction(v)
    return RationalMatrix(rows)


def _embed(block: RationalMatrix, at: int, n: int = 6) -> RationalMatrix:
    """Identity with ``block`` placed on the diagonal starting at row ``at``."""
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    k = block.nrows
    for i in range(k):
        for j in range(k):
            rows[at + i][at + j] = block[i, j]
    return RationalMatrix(rows)


def _cross(u, v):
    return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]


def _coeff_rows(forms: Sequence[Polynomial]) -> list[list[Fraction]]:
    return [f.linear_coeffs() for f in forms]


def _clear_row(M: SkewMatrix, row: int, using: Sequence[int], cols: Sequence[int]) -> list[Fraction] | None:
    """Constants t with M[row, j] + sum_k t_k M[k, j] = 0 for every j in cols."""
    nv = len(M.vars)
    A, b = [], []
    for j in cols:
        target = M[row, j].linear_coeffs()
        srcs = [M[k, j].linear_coeffs() for k in using]
        for v in range(nv):
            A.append([s[v] for s in srcs])
            b.append(-target[v])
    sol = solve_linear(A, b)
    return sol.particular


def _isotropic_plane(block: Sequence[Polynomial]) -> RationalMatrix | None:
    """For a 3x3 skew block with dependent entries (y0, y1, y2) = (Y01, Y02, Y12), a matrix G
    with (G Y G^t)[1, 2] = 0."""
    y0, y1, y2 = block
    # s^t Y t = (y2, -y1, y0) . (s x t)
    dual = _coeff_rows([y2, -y1, y0])
    w = kernel([list(col) for col in zip(*dual)], 3)
    if not w:
        return None
    plane = kernel([w[0]], 3)
    return RationalMatrix(complete_basis(plane, 3)[2:] + plane)


def match_pattern(D: SkewMatrix, F: FormatPattern) -> RationalMatrix | None:
    """A signed permutation P with P D P^t of form F, if one exists."""
    n = D.n
    zero = [[D[i, j].is_zero() for j in range(n)] for i in range(n)]
    need = [(i, j) for i, j in F.zeros() if i < j]
    signs_all = [(1,) + s for s in itertools.product((1, -1), repeat=n - 1)]
    for perm in itertools.permutations(range(n)):
        if not all(zero[perm[i]][perm[j]] for i, j in need):
            continue
        P = RationalMatrix.permutation(perm)
        if F.kind is not Kind.DOUBLE_SKEW:
            return P
        for s in signs_all:
            ok = True
            for i in range(3):
                for j in range(i + 1, 3):
                    lhs = D[perm[i], perm[3 + j]].scale(s[i] * s[3 + j])
                    rhs = D[perm[j], perm[3 + i]].scale(s[j] * s[3 + i])
                    if lhs != -rhs:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                S = RationalMatrix([[Fraction(s[i]) * x for x in P.tolist()[i]] for i in range(n)])
                if verify_format_witness(D, S, F):
                    return S
    return None


# ---------------------------------------------------------------------------
# reports


@dataclass
class ClassificationReport:
    label: str | None
    witness: RationalMatrix | None
    verified: bool
    route: list[str] = field(default_factory=list)
    caveats: list[str] = field(default_factory=list)
    fingerprint: Fingerprint | None = None
    normal_form: str | None = None

    def as_record(self) -> dict:
        rec = {
            "label": self.label,
            "verified": self.verified,
            "route": list(self.route),
            "caveats": list(self.caveats),
        }
        if self.witness is not None:
            rec["witness"] = [[_q(x) for x in row] for row in self.witness.tolist()]
        if self.fingerprint is not None:
            rec["fingerprint"] = self.fingerprint.as_record()
        if self.normal_form is not None:
            rec["normal_form"] = self.normal_form
        return rec


def _q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _report(M: SkewMatrix, label: str, S: RationalMatrix, route: list[str], caveats=None) -> ClassificationReport:
    ok = verify_format_witness(M, S, CATALOG[label])
    return ClassificationReport(label, S, ok, list(route), list(caveats or []))


def _compose(M: SkewMatrix, inner: ClassificationReport, outer: RationalMatrix, route: list[str]) -> ClassificationReport:
    """Report for M given a report for outer M outer^t."""
    S = inner.witness @ outer
    return _report(M, inner.label, S, route + inner.route, inner.caveats)


def _require_pf_zero(M: SkewMatrix) -> None:
    if M.n != 6:
        raise ValueError("need a 6x6 skew matrix")
    pf = pfaffian(M)
    if not pf.is_zero():
        raise ValueError(f"Pfaffian does not vanish: {pf}")


# ---------------------------------------------------------------------------
# rank-2 points


class Rank2Status(enum.Enum):
    POINT = "point"
    NONE_EMPTY = "none-empty"
    UNKNOWN = "unknown"
    DEGENERATE = "degenerate"


@dataclass
class Rank2Search:
    status: Rank2Status
    point: list[Fraction] | None = None
    note: str = ""


@dataclass(frozen=True)
class Rank2SearchConfig:
    grid_support: int = 2
    grid_values: tuple = (1, -1, 2, -2, 3)
    wedge_tries: int = 40
    slice_tries: int = 4
    lines: int = 200
    planes: int = 100
    box: int = 10


def _reduced(M: SkewMatrix):
    """M written over a basis of its entry span, plus the coefficient rows of that basis."""
    basis = polynomial_span_basis([p for p in M.entries() if p])
    L = _coeff_rows(basis)
    ws = VariableSet.indexed("_w", len(basis))
    rows = []
    for i in range(M.n):
        row = []
        for j in range(M.n):
            c = express_in_span(M[i, j], basis) if M[i, j] else [Fraction(0)] * len(basis)
            row.append(Polynomial.linear(ws, c))
        rows.append(row)
    return SkewMatrix(ws, rows), L


def _lift(L: list[list[Fraction]], w: Sequence[Fraction]) -> list[Fraction]:
    sol = solve_linear(L, list(w))
    if sol.particular is None:
        raise ClassificationError("point is outside the image of the entry-span coordinates")
    return sol.particular


def _sparse_points(n: int, support: int, values: Sequence[int]):
    for k in range(1, min(support, n) + 1):
        for idx in itertools.combinations(range(n), k):
            for vals in itertools.product(values, repeat=k):
                if vals[0] < 0:
                    continue
                v = [Fraction(0)] * n
                for i, x in zip(idx, vals):
                    v[i] = Fraction(x)
                yield v


def wedge_points(M: SkewMatrix, rng: random.Random, tries: int = 40, box: int = 5):
    """Points p with M(p) = u ^ w for u in the image of M at a random point.

    For fixed u these points form a linear subspace, so the search is exact linear algebra.
    """
    n = len(M.vars)
    mats = M.coeff_matrices()
    for _ in range(tries):
        p0 = [Fraction(rng.randint(-box, box)) for _ in range(n)]
        x = [Fraction(rng.randint(-box, box)) for _ in range(6)]
        u = M.evaluate(p0).apply(x)
        if not any(u):
            continue
        G = RationalMatrix(complete_basis([u], 6)).T.inverse()  # G u = e0
        imgs = [G @ Mv @ G.T for Mv in mats]
        eqs = [[A[i, j] for A in imgs] for i in range(1, 6) for j in range(i + 1, 6)]
        for w in kernel(eqs, n):
            yield w


def find_rank2_point(
    M: SkewMatrix,
    seed: int = 0,
    budget: Budget | None = None,
    config: Rank2SearchConfig = Rank2SearchConfig(),
) -> Rank2Search:
    """A rational point where M has rank exactly 2, a certificate that none exists, or UNKNOWN."""
    if M.n != 6:
        raise ValueError("need a 6x6 skew matrix")
    if M.is_zero():
        e0 = [Fraction(int(i == 0)) for i in range(len(M.vars))]
        return Rank2Search(Rank2Status.DEGENERATE, e0, "zero matrix: every point has rank 0 < 2")
    R, L = _reduced(M)
    n = len(R.vars)
    rng = random.Random(seed)

    def found(w):
        if rank_at_point(R, w) == 2:
            return Rank2Search(Rank2Status.POINT, _lift(L, w))
        return None

    gens = [g for g in pfaffians4(R) if g]
    if not gens:
        # rank <= 2 everywhere, and on the entry span the matrix vanishes nowhere
        return found([Fraction(int(i == 0)) for i in range(n)])
    I = Ideal(R.vars, polynomial_span_basis(gens))
    try:
        h = hilbert_data(I, budget)
        dim, deg = h["dim"], h["degree"]
    except GroebnerBudgetError:
        dim = deg = None
    if dim == EMPTY:
        return Rank2Search(Rank2Status.NONE_EMPTY, None, "rank <= 2 locus is empty on the entry span")

    for w in wedge_points(R, rng, config.wedge_tries):
        hit = found(w)
        if hit:
            return hit
    for w in _sparse_points(n, config.grid_support, config.grid_values):
        if all(g.evaluate(w) == 0 for g in I.generators):
            hit = found(w)
            if hit:
                return hit
    if dim is not None:
        for _ in range(config.slice_tries):
            for w in slice_points(I.generators, dim, rng, budget, config.box):
                hit = found(w)
                if hit:
                    return hit
    if (dim, deg) == (1, 2):
        pts, anisotropic = conic_points(I.generators, rng, budget, config.box)
        for w in pts:
            hit = found(w)
            if hit:
                return hit
        if anisotropic:
            return Rank2Search(Rank2Status.UNKNOWN, None, "rank-2 locus is a plane conic without rational points")
    for _ in range(config.lines):
        for w in line_points(I.generators, rng, config.box):
            hit = found(w)
            if hit:
                return hit
    for _ in range(config.planes):
        for w in plane_points(I.generators, rng, budget, config.box):
            hit = found(w)
            if hit:
                return hit
    return Rank2Search(Rank2Status.UNKNOWN, None, "no rational rank-2 point found within the search budget")


# ---------------------------------------------------------------------------
# reduction at a rank-2 point


@dataclass
class Rank2Reduction:
    S: RationalMatrix
    branch: str  # "hammer" or "arrow"
    reduced: SkewMatrix


def reduce_at_rank2(M: SkewMatrix, point: Sequence) -> Rank2Reduction:
    _require_pf_zero(M)
    if rank_at_point(M, point) != 2:
        raise ValueError("the point is not a rank-2 point of M")
    C = M.evaluate(list(point))
    K = C.kernel()
    s0 = next(v for v in complete_basis(K, 6)[len(K):])
    r = [sum(s0[k] * C[k, j] for k in range(6)) for j in range(6)]
    norm = sum(x * x for x in r)
    s1 = [x / norm for x in r]
    S0 = RationalMatrix([s0, s1] + K)
    M1 = apply_congruence(S0, M)
    # every entry but m01 vanishes at the point, so Pf(M) = m01 Pf(M_01) + (terms free of the
    # point's coordinate) forces Pf(M_01) = 0
    N01 = delete_rows_cols(M1, 0, 1)
    small = classify_4x4_skew_pfzero(N01)
    S = _embed(small.S, 2) @ S0
    reduced = apply_congruence(S, M)
    branch = "hammer" if small.pattern.name == "4x4-point" else "arrow"
    if not has_form(reduced, CATALOG[branch]):
        raise ClassificationError(f"rank-2 reduction did not produce the {branch} form")
    return Rank2Reduction(S, branch, reduced)


# ---------------------------------------------------------------------------
# hammer, lemma and arrow classifiers


def classify_hammer(M: SkewMatrix, seed: int = 0) -> ClassificationReport:
    _require_pf_zero(M)
    if not has_form(M, CATALOG["hammer"]):
        raise ValueError("matrix is not in hammer form")
    N = M.submatrix(range(3), range(3, 6))
    small = classify_3x3_detzero(N, seed=seed)
    T = small.T if small.T is not None else small.S.T
    S = RationalMatrix.block_diag(small.S, T.T)
    label = HAMMER_LABELS[small.pattern.name]
    return _report(M, label, S, [f"hammer: block {small.pattern.name} -> ({label})"])


def classify_ns1(M: SkewMatrix) -> ClassificationReport:
    _require_pf_zero(M)
    if not has_form(M, NS1_LEMMA):
        raise ValueError("matrix is not in the lemma form")
    if M[0, 5].is_zero():
        return _report(M, "a", _identity(), ["lemma: m05 = 0 -> (a)"])
    small = classify_4x4_skew_pfzero(delete_rows_cols(M, 0, 5))
    S = _embed(small.S, 1)
    label = "b" if small.pattern.name == "4x4-point" else "c"
    return _report(M, label, S, [f"lemma: M_05 of {small.pattern.name} form -> ({label})"])


@dataclass
class _ArrowTrace:
    c: Polynomial | None = None
    lambdas: list[Fraction] | None = None


def classify_arrow(M: SkewMatrix, seed: int = 0, trace: _ArrowTrace | None = None) -> ClassificationReport:
    _require_pf_zero(M)
    if not has_form(M, CATALOG["arrow"]):
        raise ValueError("matrix is not in arrow form")
    trace = trace if trace is not None else _ArrowTrace()
    a, b = M[0, 5], M[1, 5]
    y = [M[2, 3], M[2, 4], M[3, 4]]

    if span_dimension(y) < 3:
        G = _isotropic_plane(y)
        if G is None:
            raise ClassificationError("dependent y-forms without an isotropic plane")
        h = _embed(G, 2)
        inner = classify_hammer(apply_congruence(h, M), seed)
        return _compose(M, inner, h, ["arrow: y dependent -> hammer"])

    if span_dimension([a, b]) < 2:
        if a.is_zero() and not b.is_zero():
            h = RationalMatrix.permutation([1, 0, 2, 3, 4, 5])
        elif a.is_zero():
            h = _identity()
        else:
            mu = express_in_span(b, [a])[0]
            h = _elementary({(1, 0): -mu})
        inner = classify_ns1(apply_congruence(h, M))
        return _compose(M, inner, h, ["arrow: a, b dependent -> lemma"])

    pf05 = pfaffian(delete_rows_cols(M, 0, 5))
    pf15 = pfaffian(delete_rows_cols(M, 1, 5))
    c = divide_exact(pf05, b)
    if c is None or a * c != pf15:
        raise ClassificationError("Pf(M_05) = b c and Pf(M_15) = a c have no common linear solution c")
    trace.c = c
    lam = express_in_span(c, y) if c else [Fraction(0)] * 3
    if lam is not None:
        return _arrow_case_d(M, lam, trace)
    return _arrow_case_f(M, c, trace)


def _clear_rows01(N: SkewMatrix) -> RationalMatrix:
    """H-element killing the entries (0|1, 2..4), given that both are syzygies of the y-block."""
    t1 = _clear_row(N, 1, (2, 3, 4), (2, 3, 4))
    if t1 is None:
        raise ClassificationError("row 1 is not a linear syzygy of (y0, -y1, y2)")
    h1 = _elementary({(1, 2 + k): t for k, t in enumerate(t1)})
    N1 = apply_congruence(h1, N)
    t0 = _clear_row(N1, 0, (2, 3, 4), (2, 3, 4))
    if t0 is None:
        raise ClassificationError("row 0 is not a linear syzygy of (y0, -y1, y2)")
    h0 = _elementary({(0, 2 + k): t for k, t in enumerate(t0)})
    return h0 @ h1


def _arrow_case_d(M: SkewMatrix, lam: list[Fraction], trace: _ArrowTrace) -> ClassificationReport:
    trace.lambdas = list(lam)
    l0, l1, l2 = lam
    shear = _elementary({(2, 5): -l2, (3, 5): l1, (4, 5): -l0})
    N = apply_congruence(shear, M)
    if pfaffian(delete_rows_cols(N, 0, 5)) or pfaffian(delete_rows_cols(N, 1, 5)):
        raise ClassificationError("shear did not kill Pf(N_05) and Pf(N_15)")
    h = _clear_rows01(N) @ shear
    rotate = RationalMatrix.permutation([0, 1, 5, 2, 3, 4])
    S = rotate @ h
    route = [
        "arrow: a, b independent; c from Pf(M_05) = b c",
        "c in <y0, y1, y2>: shear",
        "syzygies of (y0, -y1, y2): clear rows 1 and 0",
        "rotate the last four rows -> (d)",
    ]
    rep = _report(M, "d", S, route)
    if not rep.verified:
        fix = match_pattern(apply_congruence(h, M), CATALOG["d"])
        if fix is not None:
            rep = _report(M, "d", fix @ h, route)
    return rep


def _arrow_case_f(M: SkewMatrix, c: Polynomial, trace: _ArrowTrace) -> ClassificationReport:
    a, b = M[0, 5], M[1, 5]
    y = [M[2, 3], M[2, 4], M[3, 4]]
    # q: point with y(q) = 0 and c(q) = 1; setting c = 0 means l -> l - l(q) c
    sol = solve_linear(_coeff_rows(y + [c]), [0, 0, 0, 1])
    if sol.particular is None:
        raise ClassificationError("c is not independent of the y-forms")
    q = sol.particular
    Mq = M.evaluate(q)
    Mbar = SkewMatrix(M.vars, [[M[i, j] - c.scale(Mq[i, j]) for j in range(6)] for i in range(6)])
    if pfaffian(delete_rows_cols(Mbar, 0, 5)) or pfaffian(delete_rows_cols(Mbar, 1, 5)):
        raise ClassificationError("Pfaffians of the c = 0 specialisation do not vanish")
    h = _clear_rows01(Mbar)
    M1 = apply_congruence(h, M)
    for i in (0, 1):
        for j in (2, 3, 4):
            if express_in_span(M1[i, j], [c]) is None:
                raise ClassificationError("entries (0|1, 2..4) are not multiples of c")
    alpha = express_in_span(a, y)
    beta = express_in_span(b, y)
    if alpha is None or beta is None:
        raise ClassificationError("a or b is outside <y0, y1, y2>")
    # rows s0, s1, s2 of the y-block change with y0 -> -a and y1 -> -b
    A = [-alpha[2], alpha[1], -alpha[0]]
    B = [-beta[2], beta[1], -beta[0]]
    s0 = _cross(A, B)
    nn = sum(x * x for x in s0)
    s1 = [x / nn for x in _cross(A, s0)]
    s2 = [x / nn for x in _cross(B, s0)]
    h2 = _embed(RationalMatrix([s0, s1, s2]), 2)
    S = h2 @ h
    M2 = apply_congruence(S, M)
    lam = {}
    for i in (0, 1):
        for j in (2, 3, 4):
            lam[(i, j)] = express_in_span(M2[i, j], [c])[0] if M2[i, j] else Fraction(0)
    trace.lambdas = [lam[k] for k in sorted(lam)]
    route = [
        "arrow: a, b independent; c from Pf(M_05) = b c",
        "c not in <y0, y1, y2>: clear rows after c = 0",
        "normalise y0 = -a, y1 = -b",
    ]
    if all(lam[k] == 0 for k in ((1, 4), (1, 2), (0, 3), (0, 2))) and lam[(1, 3)] == -lam[(0, 4)]:
        route.append("coefficient comparison: only lambda = lambda_04 = -lambda_13 survives -> (f)")
    rep = _report(M, "f", S, route)
    if not rep.verified:
        fix = match_pattern(M2, CATALOG["f"])
        if fix is not None:
            rep = _report(M, "f", fix @ S, route)
    return rep


# ---------------------------------------------------------------------------
# full classification


MM_CANDIDATES = ("a", "b", "c", "d")


def classify_full(
    M: SkewMatrix,
    seed: int = 0,
    budget: Budget | None = None,
    with_fingerprint: bool = True,
    rank2: Rank2SearchConfig = Rank2SearchConfig(),
) -> ClassificationReport:
    _require_pf_zero(M)
    if M.is_zero():
        return ClassificationReport("a", _identity(), True, ["zero matrix"], ["degenerate: zero matrix has every form"])
    search = find_rank2_point(M, seed, budget, rank2)
    if search.status is Rank2Status.POINT:
        red = reduce_at_rank2(M, search.point)
        if red.branch == "hammer":
            inner = classify_hammer(red.reduced, seed)
        else:
            inner = classify_arrow(red.reduced, seed)
        rep = _compose(M, inner, red.S, [f"rank-2 point -> {red.branch}"])
    elif search.status is Rank2Status.NONE_EMPTY:
        rep = _classify_no_rank2(M, seed, budget)
    else:
        rep = _classify_by_witness_search(M, seed, budget, search.note)
    if with_fingerprint:
        _attach_invariants(M, rep, budget)
        if rep.normal_form == "f" and rep.label != "f":
            _prefer_hyperbolic(M, rep, seed)
        if rep.label is None and rep.normal_form is not None:
            rep.label = NORMAL_FORM_FORMAT[rep.normal_form]
    return rep


def _prefer_hyperbolic(M: SkewMatrix, rep: ClassificationReport, seed: int) -> None:
    """Type (f) has formats d, e and f; report f with its own witness when one is found over Q."""
    S_d = rep.witness if rep.label == "d" and rep.verified else None
    if S_d is None:
        w = find_pattern_witness(M, "d", seed)
        S_d = w.S if w is not None else None
    S = hyperbolic_witness(M, S_d) if S_d is not None else None
    if S is not None:
        new = _report(M, "f", S, rep.route + ["normal form (f): pair the two blocks hyperbolically"])
        rep.label, rep.witness, rep.verified, rep.route = new.label, new.witness, new.verified, new.route


# format reached by the constructive route for each normal form over P^4 (type (f) also has formats e and f)
NORMAL_FORM_FORMAT = {"a": "f", "b": "d", "c": "d", "d": "e", "e": "e", "f": "d"}


def _classify_by_witness_search(M: SkewMatrix, seed: int, budget: Budget | None, note: str) -> ClassificationReport:
    route = [f"rank-2 search inconclusive ({note})"] if note else ["rank-2 search inconclusive"]
    for label in MM_CANDIDATES:
        w = find_pattern_witness(M, label, seed, budget)
        if w is not None:
            return _report(M, label, w.S, route + [f"witness search: ({label})"])
    return ClassificationReport(
        None, None, False, route, ["rank-2 point search inconclusive; label from invariants only"]
    )


def _classify_no_rank2(M: SkewMatrix, seed: int, budget: Budget | None) -> ClassificationReport:
    route = ["rank-2 locus empty -> candidate formats a, b, c, d"]
    for label in MM_CANDIDATES:
        w = find_pattern_witness(M, label, seed, budget)
        if w is not None:
            return _report(M, label, w.S, route + [f"witness search: ({label})"])
    return ClassificationReport(None, None, False, route, ["witness search failed for every candidate format"])


def _attach_invariants(M: SkewMatrix, rep: ClassificationReport, budget: Budget | None) -> None:
    try:
        rep.fingerprint = fingerprint(M, with_z=False, budget=budget)
    except GroebnerBudgetError as exc:
        rep.caveats.append(f"fingerprint skipped: {exc}")
        return
    if len(M.vars) == 5:
        lab = p4_fingerprint(M, budget, rep.fingerprint)
        if lab != "NONE":
            rep.normal_form = lab


# ---------------------------------------------------------------------------
# normal forms of strictly semistable and stable matrices


def semistable_pattern(r: int) -> FormatPattern:
    """Zero pattern of the strictly semistable normal form with x_i = 0 for i > r."""
    mask = [[False] * 6 for _ in range(6)]
    for i, j in ((0, 4), (0, 5), (1, 3), (1, 5), (2, 3), (2, 4)):
        mask[i][j] = mask[j][i] = True
    for k, (i, j) in enumerate(((3, 4), (3, 5), (4, 5)), start=3):
        if k <= r:
            mask[i][j] = mask[j][i] = True
    return FormatPattern(f"semistable-r{r}", tuple(map(tuple, mask)), Kind.DOUBLE_SKEW)


@dataclass
class SemistableNormalForm:
    S: RationalMatrix
    r: int
    x: list[Polynomial]
    T: RationalMatrix
    residual_zero: bool


def _wedge2(G: RationalMatrix) -> RationalMatrix:
    pairs = ((0, 1), (0, 2), (1, 2))
    return RationalMatrix(
        [[G[i, p] * G[j, q] - G[i, q] * G[j, p] for p, q in pairs] for i, j in pairs]
    )


def _standardize_block(forms: Sequence[Polynomial]) -> RationalMatrix:
    """G with (G A G^t) entries (01, 02, 12) = independent forms followed by zeros."""
    C = _coeff_rows(forms)
    # L: rows picking a basis first, then the relations among the three entries
    rel = kernel([list(col) for col in zip(*C)], 3)
    L = RationalMatrix(complete_basis(rel, 3)[len(rel):] + rel) if rel else _identity(3)
    # wedge^2 G = Q cof(G) Q^{-1} with cof(G) proportional to G^{-T}
    Q = RationalMatrix([[0, 0, 1], [0, -1, 0], [1, 0, 0]])
    return (Q.inverse() @ L @ Q).inverse().T


def hyperbolic_witness(M: SkewMatrix, S_d: RationalMatrix) -> RationalMatrix | None:
    """Turn a block-diagonal witness diag(B1, B2) with <B1> = <B2> into a format-(f) witness [[0, B], [B, 0]].

    A 3x3 change of basis gives diag(lam B, B); the binary form diag(lam, 1) is hyperbolic over Q
    exactly when -lam is a square, and then its isotropic vectors (1, s), (1, -s) pair the blocks.
    """
    D = apply_congruence(S_d, M)
    b1 = [D[0, 1], D[0, 2], D[1, 2]]
    b2 = [D[3, 4], D[3, 5], D[4, 5]]
    if span_dimension(b1) != 3 or span_dimension(b2 + b1) != 3:
        return None
    H = RationalMatrix([express_in_span(f, b1) for f in b2])
    Q = RationalMatrix([[0, 0, 1], [0, -1, 0], [1, 0, 0]])
    # wedge^2 G = det(G) H for this G, so G B1 G^t = det(G) B2
    G = (Q.inverse() @ H @ Q).inverse().T
    lam = G.det()
    s = rational_sqrt(-lam)
    if s is None or s == 0:
        return None
    k = Fraction(-1) / (2 * s * s)
    I3 = _identity(3)
    W = RationalMatrix(
        [[I3[i, j] for j in range(3)] + [s * I3[i, j] for j in range(3)] for i in range(3)]
        + [[k * I3[i, j] for j in range(3)] + [-k * s * I3[i, j] for j in range(3)] for i in range(3)]
    )
    S = W @ RationalMatrix.block_diag(G, I3) @ S_d
    return S if verify_format_witness(M, S, CATALOG["f"]) else None


def semistable_normal_form(M: SkewMatrix, S0: RationalMatrix | None = None) -> SemistableNormalForm:
    """Normal form [[0, B], [-B^t, A'']] with A'' standard, for M (or S0 M S0^t) of the form [[0, B], [-B^t, A]]."""
    S0 = S0 if S0 is not None else _identity()
    D = apply_congruence(S0, M)
    if any(D[i, j] for i in range(3) for j in range(3)):
        raise ValueError("upper-left 3x3 block must vanish")
    Bm = D.submatrix(range(3), range(3, 6))
    b = [Bm[0, 1], Bm[0, 2], Bm[1, 2]]
    if any(Bm[i, i] for i in range(3)) or any(Bm[i, j] != -Bm[j, i] for i in range(3) for j in range(i + 1, 3)):
        raise ValueError("off-diagonal block must be skew")
    if span_dimension(b) < 3:
        raise FormatError("entries of B are dependent: M has format NSS2")
    A = [D[3, 4], D[3, 5], D[4, 5]]
    # coordinates with respect to a basis of <B> extended by A-entries
    basis = list(b)
    for f in A:
        if f and express_in_span(f, basis) is None:
            basis.append(f)
    A1, A2 = [], []
    for f in A:
        coeffs = express_in_span(f, basis) if f else [Fraction(0)] * len(basis)
        A1.append(sum((basis[k].scale(coeffs[k]) for k in range(3)), Polynomial.zero(M.vars)))
        A2.append(f - A1[-1])
    # solve T B - B^t T^t = A' (B skew, so B^t = -B) for the 9 entries of T
    nv = len(M.vars)
    Bfull = [[Bm[i, j] for j in range(3)] for i in range(3)]
    Aprime = [[Polynomial.zero(M.vars)] * 3 for _ in range(3)]
    for (i, j), f in zip(((0, 1), (0, 2), (1, 2)), A1):
        Aprime[i][j], Aprime[j][i] = f, -f
    rows, rhs = [], []
    for i in range(3):
        for j in range(3):
            target = Aprime[i][j].linear_coeffs()
            for v in range(nv):
                eq = [Fraction(0)] * 9
                # (T B)[i][j] = sum_k T[i][k] B[k][j];  (B^t T^t)[i][j] = sum_k B[k][i] T[j][k]
                for k in range(3):
                    eq[3 * i + k] += Bfull[k][j].linear_coeffs()[v] if Bfull[k][j] else 0
                    eq[3 * j + k] -= Bfull[k][i].linear_coeffs()[v] if Bfull[k][i] else 0
                rows.append(eq)
                rhs.append(target[v])
    sol = solve_linear(rows, rhs)
    if sol.particular is None:
        raise ClassificationError("T B - B^t T^t = A' has no solution")
    t = sol.particular
    T = RationalMatrix([t[0:3], t[3:6], t[6:9]])
    residual = all(
        sum((Bfull[k][j].scale(T[i, k]) for k in range(3)), Polynomial.zero(M.vars))
        - sum((Bfull[k][i].scale(T[j, k]) for k in range(3)), Polynomial.zero(M.vars))
        - Aprime[i][j]
        == Polynomial.zero(M.vars)
        for i in range(3)
        for j in range(3)
    )
    shear = RationalMatrix(
        [[Fraction(int(i == j)) for j in range(6)] for i in range(3)]
        + [[-T[i, j] for j in range(3)] + [Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    )
    G = _standardize_block(A2)
    S = RationalMatrix.block_diag(G, G) @ shear @ S0
    out = apply_congruence(S, M)
    x = [out[0, 4], out[0, 5], out[1, 5], out[3, 4], out[3, 5], out[4, 5]]
    r = span_dimension([f for f in M.entries() if f]) - 1
    if r > 5 or not verify_format_witness(M, S, semistable_pattern(r)):
        raise ClassificationError("normal form did not verify")
    if span_dimension([f for f in x[: r + 1] if f]) != r + 1:
        raise ClassificationError("x_0..x_r are not independent")
    return SemistableNormalForm(S, r, x, T, residual)


@dataclass
class StableReduction:
    status: str  # "normal", "NS3", "d", "unstable", "unresolved"
    S: RationalMatrix | None
    forms: list[Polynomial] = field(default_factory=list)
    note: str = ""


def _factor_binary(d3: Fraction, d0: Fraction, d4: Fraction):
    """Rational linear factors (p, q) with d3 X^2 + d0 X Y + d4 Y^2 = (p.(X,Y)) (q.(X,Y)), or None."""
    if d3 == 0 and d4 == 0:
        return ([Fraction(1), Fraction(0)], [Fraction(0), d0]) if d0 else None
    if d3 == 0:
        return [Fraction(0), Fraction(1)], [d0, d4]
    disc = d0 * d0 - 4 * d3 * d4
    root = rational_sqrt(disc)
    if root is None:
        return None
    # d3 (X - r1 Y)(X - r2 Y) with r = (-d0 +- root) / (2 d3)
    r1 = (-d0 + root) / (2 * d3)
    r2 = (-d0 - root) / (2 * d3)
    return [d3, -d3 * r1], [Fraction(1), -r2]


def stable_reduce_f(M: SkewMatrix, S: RationalMatrix) -> StableReduction:
    """Reduce a format-(f) matrix (witness S) to the five-variable normal form or detect a degeneration."""
    if not verify_format_witness(M, S, CATALOG["f"]):
        raise ValueError("S is not a format-(f) witness for M")
    D = apply_congruence(S, M)
    m, n = D[0, 5], D[1, 5]
    if span_dimension([m, n]) < 2:
        return StableReduction("unstable", S, note="m, n dependent: lemma form, not stable")
    perm = [0, 3, 1, 4, 5, 2]
    P = RationalMatrix.permutation(perm)
    Dp = apply_congruence(P, D)
    Aent = [Dp[0, 2], Dp[0, 3], Dp[1, 3]]  # l3, l0, l4
    basis = [m, n]
    for f in Aent:
        if f and express_in_span(f, basis) is None:
            basis.append(f)
    Am = [[Fraction(0)] * 2 for _ in range(2)]
    An = [[Fraction(0)] * 2 for _ in range(2)]
    for (i, j), f in zip(((0, 0), (0, 1), (1, 1)), Aent):
        co = express_in_span(f, basis) if f else [Fraction(0)] * len(basis)
        Am[i][j] = Am[j][i] = co[0]
        An[i][j] = An[j][i] = co[1]
    shear = _identity()
    rows = shear.tolist()
    for i in range(2):
        for j in range(2):
            rows[i][4 + j] = An[i][j]
            rows[2 + i][4 + j] = -Am[i][j]
    shear = RationalMatrix(rows)
    back = RationalMatrix.permutation([perm.index(k) for k in range(6)])
    S1 = back @ shear @ P @ S
    D1 = apply_congruence(shear, Dp)
    Ap = [D1[0, 2], D1[0, 3], D1[1, 3]]
    if span_dimension(Ap) == 3:
        out = apply_congruence(S1, M)
        forms = [out[0, 4], out[0, 5], out[1, 5], out[0, 1], out[3, 4]]
        if span_dimension(forms) != 5 or not verify_format_witness(M, S1, CATALOG["f"]):
            raise ClassificationError("normal form did not verify")
        return StableReduction("normal", S1, forms, "l0..l4 independent")
    rel = kernel([list(col) for col in zip(*_coeff_rows(Ap))], 3)
    # Ap = (a', b', c') for [[a', b'], [b', c']]; relation d3 a' + d0 b' + d4 c' = 0
    choices = list(rel) + [[x + y for x, y in zip(u, v)] for u, v in itertools.combinations(rel, 2)]
    plans = []
    for d3, d0, d4 in choices:
        fac = _factor_binary(d3, d0, d4)
        if fac is None:
            continue
        p, q = fac
        if p[0] * q[1] - p[1] * q[0] == 0:
            plans.insert(0, ("NS3", p, q))
        else:
            plans.append(("d", p, q))
    for status, p, q in plans:
        if status == "NS3":
            rows_ = complete_basis([p], 2)
            R = RationalMatrix([rows_[1], rows_[0]])
        else:
            R = RationalMatrix([p, q])
        G = RationalMatrix.block_diag(R, R, R.inverse().T)
        cand = G @ shear @ P @ S
        W = match_pattern(apply_congruence(cand, M), CATALOG[status])
        if W is not None and verify_format_witness(M, W @ cand, CATALOG[status]):
            return StableReduction(status, W @ cand, note=f"dim <A'> < 3: format {status}")
    return StableReduction("unresolved", None, note="no rational normalisation of A' found")


@dataclass
class StableDCheck:
    confirmed: bool
    l_dim: int
    m_dim: int
    witness: RationalMatrix | None = None
    pattern: str | None = None


def stable_check_d(M: SkewMatrix, S: RationalMatrix) -> StableDCheck:
    if not verify_format_witness(M, S, CATALOG["d"]):
        raise ValueError("S is not a format-(d) witness for M")
    D = apply_congruence(S, M)
    l = [D[0, 1], D[0, 2], D[1, 2]]
    m = [D[3, 4], D[3, 5], D[4, 5]]
    ld, md = span_dimension(l), span_dimension(m)
    if ld == 3 and md == 3:
        return StableDCheck(True, ld, md)
    blocks = [(l, 0), (m, 3)] if ld < 3 else [(m, 3), (l, 0)]
    forms, at = blocks[0]
    G = _isotropic_plane(forms) if any(forms) else _identity(3)
    cand = _embed(G, at) @ S
    E = apply_congruence(cand, M)
    for name in ("NSS2", "NSS3", "NSS1"):
        W = match_pattern(E, CATALOG[name])
        if W is not None:
            return StableDCheck(False, ld, md, W @ cand, name)
    return StableDCheck(False, ld, md)


# ---------------------------------------------------------------------------
# sampling


def orbit_sample(
    name: str,
    nvars: int | None = None,
    seed: int = 0,
    *,
    normal: bool = False,
    v_change: bool = False,
    box: int = 3,
) -> SkewMatrix:
    """Random congruence translate of a generic instance of a catalog pattern (or of a normal form)."""
    rng = random.Random(f"{name}/{nvars}/{seed}/{normal}/{v_change}")
    if normal:
        base = normal_form(name)
    else:
        F = CATALOG[name]
        if F.shape != (6, 6):
            raise ValueError("orbit samples are 6x6")
        base = generic_instance(F)
    k = len(base.vars)
    if nvars is not None and nvars != k:
        if nvars < 1:
            raise ValueError("need at least one variable")
        xs = VariableSet.indexed("x", nvars)
        while True:
            images = [Polynomial.linear(xs, [rng.randint(-box, box) for _ in range(nvars)]) for _ in range(k)]
            if span_dimension(images) == min(k, nvars):
                break
        base = SkewMatrix(xs, [[p.substitute(images, xs) for p in row] for row in base.rows])
    if v_change:
        nv = len(base.vars)
        G = random_invertible(nv, rng, box)
        images = [Polynomial.linear(base.vars, G.tolist()[i]) for i in range(nv)]
        base = SkewMatrix(base.vars, [[p.substitute(images, base.vars) for p in row] for row in base.rows])
    S = random_invertible(6, rng, box)
    return apply_congruence(S, base)


def semistable_instance(r: int, seed: int = 0, nvars: int = 5, box: int = 3) -> tuple[SkewMatrix, RationalMatrix]:
    """[[0, B], [-B^t, T0 B - B^t T0^t + A'']] with B skew in x0..x2 and A'' generic in x3..x_r; returns (M, T0)."""
    if not 2 <= r < nvars:
        raise ValueError("need 2 <= r < nvars")
    rng = random.Random(f"semistable/{r}/{seed}")
    vs = VariableSet.indexed("x", nvars)
    while True:
        C = [[Fraction(rng.randint(-box, box)) for _ in range(3)] for _ in range(3)]
        if rank(C) == 3:
            break
    b = [Polynomial.linear(vs, c + [0] * (nvars - 3)) for c in C]
    extra = [
        Polynomial.linear(vs, [0, 0, 0] + [rng.randint(-box, box) if 3 <= k <= r else 0 for k in range(3, nvars)])
        for _ in range(3)
    ]
    while r > 2 and span_dimension([f for f in extra if f]) != r - 2:
        extra = [
            Polynomial.linear(vs, [0, 0, 0] + [rng.randint(-box, box) if 3 <= k <= r else 0 for k in range(3, nvars)])
            for _ in range(3)
        ]
    zero = Polynomial.zero(vs)
    B = [[zero, b[0], b[1]], [-b[0], zero, b[2]], [-b[1], -b[2], zero]]
    T0 = RationalMatrix([[Fraction(rng.randint(-box, box)) for _ in range(3)] for _ in range(3)])

    def tb(i, j):  # (T0 B)[i][j]
        return sum((B[k][j].scale(T0[i, k]) for k in range(3)), zero)

    upper = {}
    for i, j in ((0, 1), (0, 2), (1, 2)):
        upper[(i, 3 + j)] = B[i][j]
        upper[(j, 3 + i)] = B[j][i]
    for idx, (i, j) in enumerate(((0, 1), (0, 2), (1, 2))):
        # (T0 B - B^t T0^t)[i][j] = (T0 B)[i][j] - (T0 B)[j][i]
        upper[(3 + i, 3 + j)] = tb(i, j) - tb(j, i) + extra[idx]
    return SkewMatrix.from_upper(vs, 6, upper), T0


def random_h_element(rng: random.Random, box: int = 3) -> RationalMatrix:
    """Random element of the group of block upper-triangular matrices fixing the arrow form."""
    S2 = random_invertible(3, rng, box)
    rows = [[Fraction(int(i == j)) for j in range(6)] for i in range(6)]
    for i in range(2):
        for j in range(2, 6):
            rows[i][j] = Fraction(rng.randint(-box, box))
    for i in range(3):
        for j in range(3):
            rows[2 + i][2 + j] = S2[i, j]
        rows[2 + i][5] = Fraction(rng.randint(-box, box))
    return RationalMatrix(rows)


def hammer_instance(block: str, seed: int = 0, box: int = 3) -> SkewMatrix:
    """Hammer-form matrix whose off-diagonal 3x3 block is a disguised generic instance of ``block``."""
    rng = random.Random(f"hammer/{block}/{seed}")
    Npat = CATALOG[block]
    nvar = 3 + len([1 for i, j in Npat.stars() if Npat.kind is Kind.PLAIN or i < j])
    vs = VariableSet.indexed("z", nvar)
    g = vs.gens()
    upper = {(0, 1): g[0], (0, 2): g[1], (1, 2): g[2]}
    k = 3
    core = [[Polynomial.zero(vs)] * 3 for _ in range(3)]
    for i, j in Npat.stars():
        if Npat.kind is Kind.PLAIN:
            core[i][j] = g[k]
            k += 1
        elif i < j:
            core[i][j], core[j][i] = g[k], -g[k]
            k += 1
    S = random_invertible(3, rng, box)
    T = random_invertible(3, rng, box)
    N = [[sum((core[p][q].scale(S[i, p] * T[q, j]) for p in range(3) for q in range(3)), Polynomial.zero(vs))
          for j in range(3)] for i in range(3)]
    for i in range(3):
        for j in range(3):
            if N[i][j]:
                upper[(i, 3 + j)] = N[i][j]
    return SkewMatrix.from_upper(vs, 6, upper)


def arrow_instance(case: str, seed: int = 0, box: int = 3) -> SkewMatrix:
    """Arrow-form matrix with vanishing Pfaffian built from one of the end states of the arrow analysis.

    ``case`` is "d" (c in <y>), "f" (c outside <y>), "lemma" (a, b dependent) or "hammer" (y dependent);
    the end state is disguised by a random element of the arrow stabiliser.
    """
    rng = random.Random(f"arrow/{case}/{seed}")
    if case == "d":
        vs = VariableSet.indexed("z", 6)
        n01, a, b, y0, y1, y2 = vs.gens()
        upper = {(0, 1): n01, (0, 5): a, (1, 5): b, (2, 3): y0, (2, 4): y1, (3, 4): y2}
    elif case == "f":
        vs = VariableSet.indexed("z", 5)
        m01, c, a, b, y2 = vs.gens()
        lam = Fraction(rng.choice([1, 2, -1, 3]))
        upper = {
            (0, 1): m01, (0, 4): c.scale(lam), (0, 5): a, (1, 3): -c.scale(lam), (1, 5): b,
            (2, 3): -a, (2, 4): -b, (3, 4): y2,
        }
    elif case == "lemma":
        vs = VariableSet.indexed("z", 8)
        g = vs.gens()
        cells = [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (2, 3), (2, 4), (3, 4)]
        upper = dict(zip(cells, g))
        # row 1 of M_05 copies row 2, so Pf(M_05) = 0
        upper[(1, 3)], upper[(1, 4)] = upper[(2, 3)], upper[(2, 4)]
        # then b = mu a by a row operation
        mu = Fraction(rng.choice([1, 2, -2]))
        base = SkewMatrix.from_upper(vs, 6, upper)
        base = apply_congruence(_elementary({(1, 0): mu}), base)
        return apply_congruence(random_h_element(rng, box), base)
    elif case == "hammer":
        vs = VariableSet.indexed("z", 8)
        g = vs.gens()
        cells = [(0, 1), (0, 2), (0, 3), (0, 5), (1, 2), (1, 3), (1, 5), (2, 3)]
        upper = dict(zip(cells, g))
        # y1 = 2 y0, y2 = 0 and the N-block columns 0, 1 proportional: det N = 0
        upper[(0, 4)] = upper[(0, 3)].scale(2)
        upper[(1, 4)] = upper[(1, 3)].scale(2)
        upper[(2, 4)] = upper[(2, 3)].scale(2)
    else:
        raise ValueError(f"unknown arrow case {case!r}")
    base = SkewMatrix.from_upper(vs, 6, {k: v for k, v in upper.items() if v})
    return apply_congruence(random_h_element(rng, box), base)


__all__ = [
    "ClassificationError",
    "ClassificationReport",
    "HAMMER_LABELS",
    "MM_CANDIDATES",
    "NORMAL_FORM_FORMAT",
    "NS1_LEMMA",
    "Rank2Reduction",
    "Rank2Search",
    "Rank2SearchConfig",
    "Rank2Status",
    "SemistableNormalForm",
    "StableDCheck",
    "StableReduction",
    "arrow_instance",
    "classify_arrow",
    "classify_full",
    "classify_hammer",
    "classify_ns1",
    "find_rank2_point",
    "hammer_instance",
    "hyperbolic_witness",
    "match_pattern",
    "orbit_sample",
    "random_h_element",
    "reduce_at_rank2",
    "semistable_instance",
    "semistable_normal_form",
    "semistable_pattern",
    "stable_check_d",
    "stable_reduce_f",
    "wedge_points",
]
