"""Congruence invariants of skew matrices of linear forms, pattern witnesses and the stability screen."""

from __future__ import annotations

import enum
import math
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from itertools import combinations
from typing import Sequence

from .algebra import (
    Polynomial,
    RationalMatrix,
    VariableSet,
    complete_basis,
    kernel,
    polynomial_span_basis,
    rank,
    span_basis,
    span_dimension,
)
from .formats import CATALOG, constant_right_kernel, pattern, verify_format_witness
from .groebner import EMPTY, Budget, Ideal, hilbert_data
from .points import rational_roots, slice_points
from .skew import LinearMatrix, SkewMatrix, entry_span, flipped, pfaffian, pfaffians4, reversal_matrix

# ---------------------------------------------------------------------------
# basic invariants


def _require6(M: SkewMatrix) -> None:
    if M.shape != (6, 6):
        raise ValueError(f"expected a 6x6 skew matrix, got shape {M.shape}")


def d4(M: SkewMatrix) -> int:
    """Dimension of the span of the fifteen 4x4 Pfaffians."""
    _require6(M)
    return span_dimension(pfaffians4(M))


def rank2_ideal(M: SkewMatrix) -> Ideal:
    """Ideal of the rank <= 2 locus, generated by a basis of the span of the 4x4 Pfaffians."""
    _require6(M)
    return Ideal(M.vars, polynomial_span_basis(pfaffians4(M)))


def entry_span_dim(M: LinearMatrix) -> int:
    """Projective dimension of the span of the entries (-1 for the zero matrix)."""
    return len(entry_span(M)) - 1


def minors(rows: Sequence[Sequence[Polynomial]], k: int) -> list[Polynomial]:
    """All k x k minors of a matrix of polynomials (Laplace expansion with shared sub-minors)."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    if k <= 0 or k > min(m, n):
        return []
    memo: dict = {}

    def minor(rs: tuple, cs: tuple) -> Polynomial:
        key = (rs, cs)
        if key in memo:
            return memo[key]
        if len(rs) == 1:
            out = rows[rs[0]][cs[0]]
        else:
            out = None
            for j, c in enumerate(cs):
                entry = rows[rs[0]][c]
                if entry.is_zero():
                    continue
                sub = minor(rs[1:], cs[:j] + cs[j + 1:])
                if sub.is_zero():
                    continue
                term = entry * sub
                if j % 2:
                    term = -term
                out = term if out is None else out + term
            if out is None:
                out = rows[rs[0]][cs[0]].scale(0)
        memo[key] = out
        return out

    return [minor(rs, cs) for rs in combinations(range(m), k) for cs in combinations(range(n), k)]


def z_locus(M: SkewMatrix, s: int, prefix: str = "y") -> Ideal:
    """Ideal of generalized rows of rank <= s: the (s+1)-minors of the flipped matrix."""
    Mh = flipped(M, prefix)
    nv, n = Mh.shape
    if s < 0 or s >= max(1, min(nv, n)):
        raise ValueError(f"s must lie in [0, {min(nv, n) - 1}]")
    return Ideal(Mh.vars, polynomial_span_basis(minors(Mh.rows, s + 1)))


def jacobian(gens: Sequence[Polynomial]) -> list[list[Polynomial]]:
    n = len(gens[0].vars)
    return [[g.diff(i) for i in range(n)] for g in gens]


# the singular locus only matters for separating the normal forms over P^4; beyond these sizes
# the Jacobian minors dominate the running time
MAX_JACOBIAN_MINORS = 8000
MAX_SINGULAR_VARS = 6


def singular_locus_dim(
    I: Ideal,
    dim: int,
    budget: Budget | None = None,
    max_minors: int | None = MAX_JACOBIAN_MINORS,
    max_vars: int | None = MAX_SINGULAR_VARS,
) -> int | None:
    """Projective dimension of the points of V(I) where the Jacobian has rank below the codimension.

    None when the computation exceeds ``max_minors`` minors or ``max_vars`` variables.
    """
    if dim == EMPTY or I.is_zero():
        return EMPTY
    n = len(I.vars)
    codim = n - 1 - dim
    gens = list(I.generators)
    if max_vars is not None and n > max_vars:
        return None
    if max_minors is not None and math.comb(len(gens), codim) * math.comb(n, codim) > max_minors:
        return None
    J = jacobian(gens)
    extra = polynomial_span_basis(minors(J, codim))
    return hilbert_data(Ideal(I.vars, gens + extra), budget)["dim"]


# ---------------------------------------------------------------------------
# fingerprint


@dataclass(frozen=True)
class Fingerprint:
    r: int
    d4: int
    rank2_dim: int
    rank2_deg: int
    rank2_sing_dim: int | None
    z_profile: tuple[tuple[int, int], ...] | None = None

    def key(self) -> tuple:
        return (self.r, self.d4, self.rank2_dim, self.rank2_deg, self.rank2_sing_dim)

    def as_record(self) -> dict:
        rec = {
            "entry_span": self.r,
            "d4": self.d4,
            "rank2_dim": self.rank2_dim,
            "rank2_empty": self.rank2_dim == EMPTY,
            "rank2_deg": self.rank2_deg,
            "rank2_sing_dim": self.rank2_sing_dim,
        }
        if self.z_profile is not None:
            rec["z_profile"] = [{"s": s, "dim": d, "empty": d == EMPTY} for s, d in self.z_profile]
        return rec


def z_profile(M: SkewMatrix, budget: Budget | None = None) -> tuple[tuple[int, int], ...]:
    nv = len(M.vars)
    out = []
    for s in range(min(4, nv, 6)):
        Z = z_locus(M, s)
        dim = 5 if Z.is_zero() else hilbert_data(Z, budget)["dim"]
        out.append((s, dim))
    return tuple(out)


def fingerprint(M: SkewMatrix, with_z: bool = True, budget: Budget | None = None) -> Fingerprint:
    _require6(M)
    I = rank2_ideal(M)
    n = len(M.vars)
    if I.is_zero():
        dim, deg = n - 1, 1
    else:
        h = hilbert_data(I, budget)
        dim, deg = h["dim"], h["degree"]
    sing = singular_locus_dim(I, dim, budget)
    return Fingerprint(
        r=entry_span_dim(M),
        d4=len(I.generators),
        rank2_dim=dim,
        rank2_deg=deg,
        rank2_sing_dim=sing,
        z_profile=z_profile(M, budget) if with_z else None,
    )


# ---------------------------------------------------------------------------
# normal forms over P^4


P4_LABELS = ("a", "b", "c", "d", "e", "f")

# upper-triangle entries as (row, col, variable index, sign)
_SHARED_BLOCK = [(0, 4, 0, 1), (0, 5, 1, 1), (1, 3, 0, -1), (1, 5, 2, 1), (2, 3, 1, -1), (2, 4, 2, -1)]
_NORMAL_FORMS = {
    "a": [(0, 1, 3, 1), (0, 4, 0, 1), (0, 5, 1, 1), (1, 3, 0, -1), (1, 5, 2, 1), (2, 3, 1, -1), (2, 4, 2, -1),
          (3, 4, 4, 1)],
    "b": [(0, 1, 0, 1), (0, 2, 1, 1), (1, 2, 2, 1), (3, 4, 2, 1), (3, 5, 3, 1), (4, 5, 4, 1)],
    "c": [(0, 1, 0, 1), (0, 2, 1, 1), (1, 2, 2, 1), (3, 4, 1, 1), (3, 5, 2, 1), (4, 5, 3, 1)],
    "d": _SHARED_BLOCK + [(3, 4, 3, 1), (3, 5, 4, 1)],
    "e": _SHARED_BLOCK + [(3, 4, 3, 1)],
    "f": list(_SHARED_BLOCK),
}

# stability of the normal forms: (verdict name, polystable?)
NORMAL_FORM_STABILITY = {
    "a": "stable",
    "b": "stable",
    "c": "stable",
    "d": "strictly semistable, not polystable",
    "e": "strictly semistable, not polystable",
    "f": "polystable",
}


def p4_variables() -> VariableSet:
    return VariableSet.indexed("l", 5)


def normal_form(label: str, variables: VariableSet | None = None) -> SkewMatrix:
    """The normal form with the given label, written in the first five variables."""
    if label not in _NORMAL_FORMS:
        raise KeyError(f"unknown normal form {label!r}")
    vs = variables or p4_variables()
    if len(vs) < 5:
        raise ValueError("normal forms need at least five variables")
    gens = vs.gens()
    upper = {(i, j): gens[v] if s > 0 else -gens[v] for i, j, v, s in _NORMAL_FORMS[label]}
    return SkewMatrix.from_upper(vs, 6, upper)


def example_f_matrix() -> SkewMatrix:
    """The type (f) matrix written in three variables l0, l1, l2."""
    vs = VariableSet.indexed("l", 3)
    g = vs.gens()
    upper = {(i, j): g[v] if s > 0 else -g[v] for i, j, v, s in _SHARED_BLOCK}
    return SkewMatrix.from_upper(vs, 6, upper)


def segre_minors(vs: VariableSet) -> list[Polynomial]:
    """2x2 minors of [[y0,y1,y2],[y3,y4,y5]]."""
    y = vs.gens()
    top, bottom = y[:3], y[3:6]
    return [top[i] * bottom[j] - top[j] * bottom[i] for i, j in combinations(range(3), 2)]


@lru_cache(maxsize=None)
def reference_fingerprints() -> dict[str, tuple]:
    return {lab: fingerprint(normal_form(lab), with_z=False).key() for lab in P4_LABELS}


def p4_fingerprint(M: SkewMatrix, budget: Budget | None = None, fp: Fingerprint | None = None) -> str:
    """Label of the normal form whose invariants match M, or 'NONE'."""
    _require6(M)
    if len(M.vars) != 5:
        raise ValueError("p4_fingerprint needs a matrix over exactly five variables")
    pf = pfaffian(M)
    if not pf.is_zero():
        raise ValueError(f"Pfaffian does not vanish: {pf}")
    fp = fp or fingerprint(M, with_z=False, budget=budget)
    for lab, key in reference_fingerprints().items():
        if fp.key() == key:
            return lab
    return "NONE"


# ---------------------------------------------------------------------------
# pattern witnesses (not stable / not semistable formats and their reverses)

# pattern name -> (k, a): a k-dimensional U of rows whose pairing with an a-dimensional A(U) vanishes
FLAG_SHAPES = {"NSS1": (1, 6), "NSS2": (2, 5), "NSS3": (4, 4), "NS1": (1, 5), "NS2": (2, 4), "NS3": (3, 3)}
REVERSED_FLAGS = {"a": "NSS1", "b": "NSS3", "c": "NSS2"}


def annihilator(M: LinearMatrix, U: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of {t : u^t M_v t = 0 for all u in U and every coefficient matrix M_v}."""
    n = M.shape[1]
    rows = [Mv.T.apply(u) for Mv in M.coeff_matrices() for u in U]
    rows = [r for r in rows if any(r)]
    return kernel(rows, n) if rows else [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def flag_witness(M: SkewMatrix, U: Sequence[Sequence], name: str) -> RationalMatrix | None:
    """Congruence putting M into the flag-shaped pattern ``name`` with U as its first rows."""
    k, a = FLAG_SHAPES[name]
    U = span_basis(U)
    if len(U) != k:
        return None
    A = annihilator(M, U)
    if len(A) < a or rank(A + U) != len(A):
        return None
    rows = [list(u) for u in U]
    for v in A:
        if len(rows) == a:
            break
        if rank(rows + [v]) > len(rows):
            rows.append(v)
    rows = complete_basis(rows, 6)
    S = RationalMatrix(rows)
    return S if verify_format_witness(M, S, pattern(name)) else None


def _kernel_span(M: SkewMatrix, rng: random.Random, samples: int = 12) -> list[list[Fraction]]:
    vecs = []
    n = len(M.vars)
    for _ in range(samples):
        x = [Fraction(rng.randint(-9, 9)) for _ in range(n)]
        vecs.extend(M.evaluate(x).kernel())
    return span_basis(vecs) if vecs else []


def z_points(
    M: SkewMatrix,
    s: int,
    rng: random.Random,
    tries: int = 4,
    budget: Budget | None = None,
    max_minors: int = 3000,
):
    """Rational generalized rows of rank <= s found by slicing the locus down to finitely many points.

    When the flipped matrix has too many rows, it is replaced by a few random combinations of its
    rows; the resulting locus contains the true one and every candidate is re-checked.
    """
    Mh = flipped(M)
    nv = Mh.shape[0]
    rows = Mh.rows
    if comb(nv, s + 1) * comb(6, s + 1) > max_minors:
        # s + 2 generic rows already cut the expected locus down to its special part
        k = s + 2
        R = [[Fraction(rng.randint(-5, 5)) for _ in range(nv)] for _ in range(k)]
        rows = [
            [sum((rows[i][j].scale(R[r][i]) for i in range(nv) if R[r][i]), Polynomial.zero(Mh.vars))
             for j in range(6)]
            for r in range(k)
        ]
    gens = polynomial_span_basis(minors(rows, s + 1))
    if not gens:
        return []
    Z = Ideal(Mh.vars, gens)
    budget = budget or Budget(max_basis=150, max_degree=10, max_pairs=20_000)
    try:
        h = hilbert_data(Z, budget)
    except Exception:  # resource limits: give up quietly, the search is best-effort
        return []
    if h["dim"] == EMPTY:
        return []
    pts = []
    for _ in range(tries):
        for p in slice_points(Z.generators, h["dim"], rng, budget):
            if Mh.evaluate(p).rank() <= s:
                pts.append(p)
    return pts


def _subspace_candidates(points: list, k: int, limit: int = 200):
    pts = list(points)
    seen = 0
    for combo in combinations(range(len(pts)), k):
        seen += 1
        if seen > limit:
            return
        yield [pts[i] for i in combo]


@dataclass(frozen=True)
class PatternWitness:
    pattern: str
    S: RationalMatrix


def find_pattern_witness(
    M: SkewMatrix,
    name: str,
    seed: int = 0,
    budget: Budget | None = None,
) -> PatternWitness | None:
    """Best-effort search for a verified congruence putting M into pattern ``name``."""
    _require6(M)
    rng = random.Random(seed)
    F = CATALOG[name]
    I6 = RationalMatrix.identity(6)
    R = reversal_matrix(6)
    for S in (I6, R):
        if verify_format_witness(M, S, F):
            return PatternWitness(name, S)
    if name in REVERSED_FLAGS:
        inner = find_pattern_witness(M, REVERSED_FLAGS[name], seed, budget)
        if inner is not None:
            S = R @ inner.S
            if verify_format_witness(M, S, F):
                return PatternWitness(name, S)
        return None
    if name == "d":
        S = block_witness(M, rng)
        return PatternWitness(name, S) if S is not None else None
    if name not in FLAG_SHAPES:
        return None
    k, a = FLAG_SHAPES[name]
    candidates: list = []
    if name == "NSS1":
        candidates = [[v] for v in constant_right_kernel(M)]
    elif name == "NSS3":
        ks = _kernel_span(M, rng)
        if len(ks) == 4:
            candidates = [ks]
    for U in candidates:
        S = flag_witness(M, U, name)
        if S is not None:
            return PatternWitness(name, S)
    if name in ("NSS1",):
        return None
    pts = z_points(M, 6 - a, rng, budget=budget)
    if not pts:
        return None
    for U in _subspace_candidates(pts, k):
        S = flag_witness(M, U, name)
        if S is not None:
            return PatternWitness(name, S)
    return None


def block_witness(M: SkewMatrix, rng: random.Random, attempts: int = 10) -> RationalMatrix | None:
    """Congruence to block-diagonal form via a self-adjoint operator with two 3-dimensional eigenspaces."""
    n = 6
    eqs = []
    for Mv in M.coeff_matrices():
        A = Mv.tolist()
        # (X^t A - A X)[i][j] = sum_k X[k][i] A[k][j] - A[i][k] X[k][j]
        for i in range(n):
            for j in range(n):
                eq = [Fraction(0)] * (n * n)
                for k in range(n):
                    eq[k * n + i] += A[k][j]
                    eq[k * n + j] -= A[i][k]
                if any(eq):
                    eqs.append(eq)
    sols = kernel(eqs, n * n)
    if len(sols) < 2:
        return None
    # small combinations first: a random element of a split algebra rarely has rational eigenvalues,
    # but the eigenvalue discriminant is a square for many small coefficient vectors
    trials = [[int(i == k) for i in range(len(sols))] for k in range(len(sols))]
    if len(sols) <= 4:
        trials += [list(c) for c in itertools.product(range(-2, 3), repeat=len(sols)) if any(c)]
    trials += [[rng.randint(-9, 9) for _ in sols] for _ in range(attempts)]
    for coeffs in trials:
        x = [sum(c * s[t] for c, s in zip(coeffs, sols)) for t in range(n * n)]
        X = RationalMatrix([x[r * n:(r + 1) * n] for r in range(n)])
        # rows of the witness are eigenvectors of X for rational eigenvalues
        charpoly = _charpoly(X)
        spaces = []
        for lam in rational_roots(charpoly):
            sp = (X - RationalMatrix.identity(n).scale(lam)).kernel()
            if len(sp) == 3:
                spaces.append(sp)
        for U1, U2 in combinations(spaces, 2):
            S = RationalMatrix(U1 + U2)
            if S.is_invertible() and verify_format_witness(M, S, CATALOG["d"]):
                return S
    for _ in range(3):
        S = _orthogonal_kernel_witness(M, rng)
        if S is not None:
            return S
    return None


def _orthogonal_kernel_witness(M: SkewMatrix, rng: random.Random, points: int = 8) -> RationalMatrix | None:
    """Block witness when both blocks carry the same 3x3 matrix.

    Then M = I_2 (x) B in a suitable basis, every kernel is Q^2 (x) kappa(p), and kernel vectors
    orthogonal to a fixed kernel vector w (x) kappa all lie in the block w^perp (x) Q^3.
    """
    n = len(M.vars)
    mats = [Mv.tolist() for Mv in M.coeff_matrices()]

    def kernel_at():
        while True:
            p = [Fraction(rng.randint(-9, 9)) for _ in range(n)]
            K = M.evaluate(p).kernel()
            if len(K) == 2:
                return K

    def orth(vec):
        # u with vec^t A_v u = 0 for every coefficient matrix
        eqs = [[sum(vec[k] * A[k][j] for k in range(6)) for j in range(6)] for A in mats]
        return kernel(eqs, 6)

    def meet(K, C):
        # K and C as row bases: vectors in both spans
        sol = kernel([list(col) for col in zip(*(K + C))], len(K) + len(C))
        return [[sum(s[i] * K[i][j] for i in range(len(K))) for j in range(6)] for s in sol]

    K1 = kernel_at()
    k1 = [a + 2 * b for a, b in zip(*K1)]
    C1 = orth(k1)
    other = []
    for _ in range(points):
        other += meet(kernel_at(), C1)
    U2 = span_basis(other) if other else []
    if len(U2) != 3:
        return None
    C2 = orth(U2[0])
    same = [k1]
    for _ in range(points):
        same += meet(kernel_at(), C2)
    U1 = span_basis(same)
    if len(U1) != 3:
        return None
    S = RationalMatrix(U1 + U2)
    return S if S.is_invertible() and verify_format_witness(M, S, CATALOG["d"]) else None


def _charpoly(X: RationalMatrix) -> list[Fraction]:
    """Characteristic polynomial coefficients (ascending) via Faddeev-LeVerrier."""
    n = X.nrows
    I = RationalMatrix.identity(n)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = RationalMatrix.zeros(n, n)
    c = Fraction(1)
    for k in range(1, n + 1):
        Mk = X @ Mk + I.scale(c)
        XM = X @ Mk
        c = -sum(XM[i, i] for i in range(n)) / k
        coeffs[n - k] = c
    return coeffs


# ---------------------------------------------------------------------------
# stability screen


class Stability(enum.Enum):
    UNSTABLE = "unstable"
    SEMISTABLE = "semistable"  # at least semistable, stability undecided
    STRICTLY_SEMISTABLE = "strictly semistable"
    STABLE = "stable"
    POLYSTABLE = "polystable"
    UNKNOWN = "unknown"


@dataclass
class StabilityVerdict:
    verdict: Stability
    evidence: list[tuple[str, str]] = field(default_factory=list)
    not_stable: bool = False
    polystable: bool | None = None
    witness: PatternWitness | None = None
    label: str | None = None

    def describe(self) -> str:
        if self.verdict is Stability.STRICTLY_SEMISTABLE and self.polystable is False:
            return "strictly semistable, not polystable"
        return self.verdict.value

    def as_record(self) -> dict:
        rec = {
            "verdict": self.verdict.value,
            "summary": self.describe(),
            "not_stable": self.not_stable,
            "polystable": self.polystable,
            "evidence": [{"criterion": c, "reason": r} for c, r in self.evidence],
        }
        if self.witness is not None:
            rec["witness"] = {
                "pattern": self.witness.pattern,
                "S": [[f"{x.numerator}/{x.denominator}" for x in row] for row in self.witness.S.tolist()],
            }
        if self.label is not None:
            rec["normal_form"] = self.label
        return rec


def stability_screen(
    M: SkewMatrix,
    seed: int = 0,
    search: bool = True,
    budget: Budget | None = None,
) -> StabilityVerdict:
    _require6(M)
    ev: list[tuple[str, str]] = []
    d = d4(M)
    if d >= 13:
        ev.append(("d4 >= 13", f"d4 = {d}: the 4x4 Pfaffians span at least 13 dimensions, so M is stable"))
        return StabilityVerdict(Stability.STABLE, ev, polystable=True)

    if search:
        for name in ("NSS1", "NSS3", "NSS2"):
            w = find_pattern_witness(M, name, seed, budget)
            if w is not None:
                ev.append((f"pattern {name}", f"verified congruence into the not-semistable format {name}"))
                return StabilityVerdict(Stability.UNSTABLE, ev, not_stable=True, polystable=False, witness=w)

    verdict = StabilityVerdict(Stability.UNKNOWN, ev)
    if d >= 8:
        ev.append(("d4 >= 8", f"d4 = {d}: the 4x4 Pfaffians span at least 8 dimensions, so M is semistable"))
        verdict.verdict = Stability.SEMISTABLE

    label = "NONE"
    if len(M.vars) == 5 and pfaffian(M).is_zero():
        label = p4_fingerprint(M, budget)

    if search and label == "NONE":
        for name in ("NS1", "NS2", "NS3"):
            w = find_pattern_witness(M, name, seed, budget)
            if w is not None:
                ev.append((f"pattern {name}", f"verified congruence into the not-stable format {name}"))
                verdict.not_stable = True
                verdict.witness = w
                break

    if label != "NONE":
        verdict.label = label
        ev.append(
            (
                f"normal form {label}",
                "invariants (entry span, d4, rank-2 locus dimension/degree/singular locus) "
                f"match normal form ({label}) and no other",
            )
        )
        if label in ("a", "b", "c"):
            verdict.verdict = Stability.STABLE
            verdict.polystable = True
            ev.append(
                (
                    "semistable, not strictly",
                    "strictly semistable matrices with vanishing Pfaffian have normal form (d), (e) or (f)",
                )
            )
        elif label in ("d", "e"):
            verdict.verdict = Stability.STRICTLY_SEMISTABLE
            verdict.polystable = False
            ev.append(("orbit closure", "the orbit closure contains normal form (f), so it is not closed"))
        else:
            Z1 = z_locus(M, 1)
            z1 = hilbert_data(Z1, budget)["dim"]
            Z2 = hilbert_data(z_locus(M, 2), budget)
            if z1 == EMPTY:
                ev.append(("Z1 empty", "no generalized row of rank <= 1, so neither NSS1 nor NSS2"))
            ev.append(
                (
                    "Z2",
                    f"rank <= 2 generalized rows form a locus of dimension {Z2['dim']} and degree "
                    f"{Z2['degree']}, matching the Segre threefold rather than a linear P^3",
                )
            )
            ev.append(("minimal d4", "d4 = 6 is minimal, so no orbit in the closure can be smaller"))
            verdict.verdict = Stability.POLYSTABLE
            verdict.polystable = True
        return verdict
    if verdict.not_stable and verdict.verdict is Stability.SEMISTABLE:
        verdict.verdict = Stability.STRICTLY_SEMISTABLE
    return verdict


__all__ = [
    "FLAG_SHAPES",
    "Fingerprint",
    "P4_LABELS",
    "PatternWitness",
    "Stability",
    "StabilityVerdict",
    "annihilator",
    "block_witness",
    "d4",
    "entry_span_dim",
    "example_f_matrix",
    "find_pattern_witness",
    "fingerprint",
    "flag_witness",
    "minors",
    "normal_form",
    "p4_fingerprint",
    "rank2_ideal",
    "reference_fingerprints",
    "segre_minors",
    "singular_locus_dim",
    "stability_screen",
    "z_locus",
    "z_profile",
]
