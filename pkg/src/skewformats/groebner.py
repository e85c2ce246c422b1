"""A small exact Groebner-basis engine (grevlex, Buchberger with the normal strategy).

Covers what the rank-locus computations need: membership, radical membership,
projective dimension and degree via the Hilbert series of the leading-term ideal,
and a check for linear subspaces contained in a zero set.
"""

from __future__ import annotations

import enum
import heapq
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from gmpy2 import mpq

from .algebra import Polynomial, VariableSet, grevlex_key

EMPTY = -1  # projective dimension of the empty set


class GroebnerBudgetError(RuntimeError):
    """Raised when a Groebner computation exceeds its configured resource budget."""


@dataclass(frozen=True)
class Budget:
    max_basis: int = 400
    max_degree: int = 12
    max_pairs: int = 200_000

    @classmethod
    def from_env(cls) -> "Budget":
        d = cls()
        return cls(
            max_basis=int(os.environ.get("SKEWFORMATS_MAX_BASIS", d.max_basis)),
            max_degree=int(os.environ.get("SKEWFORMATS_MAX_DEGREE", d.max_degree)),
            max_pairs=int(os.environ.get("SKEWFORMATS_MAX_PAIRS", d.max_pairs)),
        )


DEFAULT_BUDGET = Budget.from_env()


# internal representation: dict exponent -> mpq, plus cached leading exponent

def _to_internal(p: Polynomial) -> dict:
    return {e: mpq(c.numerator, c.denominator) for e, c in p.terms.items()}


def _to_poly(vs: VariableSet, d: dict) -> Polynomial:
    return Polynomial(vs, {e: Fraction(int(c.numerator), int(c.denominator)) for e, c in d.items()}, _trusted=True)


def _lead(d: dict):
    return max(d, key=grevlex_key)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _sub_scaled_shift(p: dict, g: dict, shift, c) -> None:
    """p -= c * x^shift * g, in place."""
    for e, v in g.items():
        k = tuple(a + b for a, b in zip(e, shift))
        nv = p.get(k, 0) - c * v
        if nv:
            p[k] = nv
        else:
            p.pop(k, None)


def _reduce(f: dict, basis: list, full: bool = True) -> dict:
    """Normal form of f modulo basis entries (lead, monic poly)."""
    p = dict(f)
    r = {}
    while p:
        e = _lead(p)
        c = p[e]
        for lead, g in basis:
            if _divides(lead, e):
                shift = tuple(a - b for a, b in zip(e, lead))
                _sub_scaled_shift(p, g, shift, c)
                break
        else:
            if not full:
                r.update(p)
                return r
            r[e] = c
            del p[e]
    return r


def _monic(d: dict) -> tuple:
    lead = _lead(d)
    inv = 1 / d[lead]
    return lead, {e: v * inv for e, v in d.items()}


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _spoly(f, g) -> dict:
    (lf, pf), (lg, pg) = f, g
    l = _lcm(lf, lg)
    sf = tuple(x - y for x, y in zip(l, lf))
    sg = tuple(x - y for x, y in zip(l, lg))
    out: dict = {}
    _sub_scaled_shift(out, pf, sf, -1)
    _sub_scaled_shift(out, pg, sg, 1)
    return out


class GroebnerBasis:
    """A reduced, monic Groebner basis in grevlex order."""

    def __init__(self, variables: VariableSet, elements: list):
        self.vars = variables
        self._elems = sorted(elements, key=lambda lg: grevlex_key(lg[0]))

    @property
    def polynomials(self) -> list[Polynomial]:
        return [_to_poly(self.vars, g) for _, g in self._elems]

    @property
    def leading_monomials(self) -> list[tuple]:
        return [lead for lead, _ in self._elems]

    def __len__(self) -> int:
        return len(self._elems)

    def is_unit(self) -> bool:
        return any(sum(lead) == 0 for lead in self.leading_monomials)

    def normal_form(self, p: Polynomial) -> Polynomial:
        if p.vars != self.vars:
            raise ValueError("polynomial over a different variable set")
        return _to_poly(self.vars, _reduce(_to_internal(p), self._elems))

    def contains(self, p: Polynomial) -> bool:
        return self.normal_form(p).is_zero()

    def spolys_reduce_to_zero(self) -> bool:
        return all(not _reduce(_spoly(f, g), self._elems) for f, g in combinations(self._elems, 2))


def buchberger(generators: Sequence[Polynomial] | "Ideal", budget: Budget | None = None) -> GroebnerBasis:
    """Reduced Groebner basis; pairs are processed by smallest lcm degree, ties by index."""
    if isinstance(generators, Ideal):
        generators = generators.generators
    gens = [g for g in generators if g]
    if not gens:
        raise ValueError("need at least one generator (use Ideal for the zero ideal)")
    vs = gens[0].vars
    for g in gens:
        if g.vars != vs:
            raise ValueError("generators over different variable sets")
    budget = budget or DEFAULT_BUDGET

    basis: list = []  # (lead, monic dict)
    alive: list[bool] = []
    pairs: list = []
    counter = 0

    def add(h: dict):
        nonlocal counter
        lead, g = _monic(h)
        if sum(lead) > budget.max_degree:
            raise GroebnerBudgetError(f"basis element of degree {sum(lead)} exceeds max_degree={budget.max_degree}")
        k = len(basis)
        basis.append((lead, g))
        alive.append(True)
        if len(basis) > budget.max_basis:
            raise GroebnerBudgetError(f"basis size exceeds max_basis={budget.max_basis}")
        for i in range(k):
            if alive[i]:
                l = _lcm(basis[i][0], lead)
                heapq.heappush(pairs, (sum(l), i, k, l))
        counter += 1

    # inter-reduce the input first (cheap and keeps things small)
    work = sorted((_to_internal(g) for g in gens), key=lambda d: grevlex_key(_lead(d)))
    for d in work:
        r = _reduce(d, [b for b, a in zip(basis, alive) if a])
        if r:
            add(r)

    done: set = set()
    processed = 0
    while pairs:
        deg, i, j, l = heapq.heappop(pairs)
        done.add((i, j))
        if not (alive[i] and alive[j]):
            continue
        li, lj = basis[i][0], basis[j][0]
        # product criterion
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or not alive[k]:
                continue
            if _divides(basis[k][0], l):
                a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
                if a in done and b in done:
                    skip = True
                    break
        if skip:
            continue
        processed += 1
        if processed > budget.max_pairs:
            raise GroebnerBudgetError(f"more than max_pairs={budget.max_pairs} S-pairs reduced")
        active = [basis[k] for k in range(len(basis)) if alive[k]]
        r = _reduce(_spoly(basis[i], basis[j]), active, full=False)
        if r:
            if all(sum(e) == 0 for e in r):
                return GroebnerBasis(vs, [((0,) * len(vs), {(0,) * len(vs): mpq(1)})])
            add(_reduce(r, active))

    # keep elements with minimal leading terms, then auto-reduce
    final = []
    for k, (lead, g) in enumerate(basis):
        if any(_divides(b[0], lead) and (b[0] != lead or m < k) for m, b in enumerate(basis) if m != k):
            continue
        final.append((lead, g))
    reduced = []
    for idx, (lead, g) in enumerate(final):
        others = [final[m] for m in range(len(final)) if m != idx]
        reduced.append(_monic(_reduce(g, others)))
    return GroebnerBasis(vs, reduced)


class Ideal:
    """An ideal given by generators over one variable set; zero generators are dropped."""

    def __init__(self, variables: VariableSet, generators: Sequence[Polynomial] = ()):
        self.vars = variables
        for g in generators:
            if g.vars != variables:
                raise ValueError("generator over a different variable set")
        self.generators = [g for g in generators if g]
        self._gb: GroebnerBasis | None = None
        self._gb_budget = None

    def is_zero(self) -> bool:
        return not self.generators

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def groebner(self, budget: Budget | None = None) -> GroebnerBasis:
        if self._gb is None:
            if self.is_zero():
                self._gb = GroebnerBasis(self.vars, [])
            else:
                self._gb = buchberger(self.generators, budget)
        return self._gb

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.vars != self.vars:
            raise ValueError("ideals over different variable sets")
        return Ideal(self.vars, self.generators + other.generators)

    def __repr__(self) -> str:
        return f"Ideal({len(self.generators)} generators over {self.vars.names})"


def ideal_member(p: Polynomial, I: Ideal, budget: Budget | None = None) -> bool:
    if p.vars != I.vars:
        raise ValueError("polynomial and ideal over different variable sets")
    if p.is_zero():
        return True
    if I.is_zero():
        return False
    return I.groebner(budget).contains(p)


def radical_member(p: Polynomial, I: Ideal, budget: Budget | None = None) -> bool:
    """p in rad(I), via 1 in I + (1 - t p) over the ring extended by a fresh variable t."""
    if p.vars != I.vars:
        raise ValueError("polynomial and ideal over different variable sets")
    if p.is_zero():
        return True
    name = "_t"
    while name in I.vars.names:
        name += "_"
    ext = I.vars.extend(name)
    pos = list(range(len(I.vars)))
    lift = lambda q: q.change_ring(ext, pos)  # noqa: E731
    t = Polynomial.var(ext, name)
    gens = [lift(g) for g in I.generators] + [Polynomial.const(ext, 1) - t * lift(p)]
    return buchberger(gens, budget).is_unit()


# ---------------------------------------------------------------------------
# Hilbert series of monomial ideals


def _minimalize(gens: list) -> list:
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return out


def _poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a: list, b: list, shift: int = 0, sign: int = 1) -> list:
    n = max(len(a), len(b) + shift)
    out = a + [0] * (n - len(a))
    for j, y in enumerate(b):
        out[j + shift] += sign * y
    return out


def hilbert_numerator(gens: Sequence[tuple]) -> list[int]:
    """K(t) with HS(S/I) = K(t) / (1-t)^n for the monomial ideal generated by ``gens``."""
    gens = _minimalize([tuple(g) for g in gens])
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return [0]
    # pairwise coprime generators: product formula
    support = [set(i for i, x in enumerate(g) if x) for g in gens]
    if all(not (support[a] & support[b]) for a, b in combinations(range(len(gens)), 2)):
        out = [1]
        for g in gens:
            d = sum(g)
            out = _poly_mul(out, [1] + [0] * (d - 1) + [-1])
        return out
    # pivot on the variable occurring in most generators
    n = len(gens[0])
    counts = [sum(1 for g in gens if g[i]) for i in range(n)]
    i = max(range(n), key=lambda k: counts[k])
    pivot = tuple(int(k == i) for k in range(n))
    with_pivot = gens + [pivot]
    colon = [tuple(max(x - y, 0) for x, y in zip(g, pivot)) for g in gens]
    # HS(S/I) = HS(S/(I + x_i)) + t * HS(S/(I : x_i))
    return _poly_add(hilbert_numerator(with_pivot), hilbert_numerator(colon), shift=1)


def _dimension_and_degree(numerator: list[int], nvars: int) -> tuple[int, int]:
    K = list(numerator)
    while K and K[-1] == 0:
        K.pop()
    if not K:
        return EMPTY - 0, 0  # the unit ideal
    c = 0
    while sum(K) == 0:
        # divide by (1 - t)
        q = []
        acc = 0
        for x in K[:-1]:
            acc += x
            q.append(acc)
        K = q
        c += 1
    return nvars - c, sum(K)


def krull_dimension_monomial(leads: Sequence[tuple], nvars: int) -> int:
    """Largest set of variables containing the support of no leading monomial."""
    supports = [frozenset(i for i, x in enumerate(l) if x) for l in leads]
    if any(not s for s in supports):
        return -1
    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            S = set(subset)
            if not any(s <= S for s in supports):
                return size
    return 0


def _require_homogeneous(I: Ideal):
    if not I.is_homogeneous():
        raise ValueError("projective invariants need a homogeneous ideal")


def projective_dimension(I: Ideal, budget: Budget | None = None) -> int:
    """Dimension of V(I) in projective space, or EMPTY (-1)."""
    _require_homogeneous(I)
    n = len(I.vars)
    if I.is_zero():
        return n - 1
    gb = I.groebner(budget)
    affine = krull_dimension_monomial(gb.leading_monomials, n)
    return max(affine - 1, EMPTY)


def projective_degree(I: Ideal, budget: Budget | None = None) -> int:
    """Degree of the top-dimensional part, read off the Hilbert series of the leading-term ideal."""
    _require_homogeneous(I)
    n = len(I.vars)
    if I.is_zero():
        return 1
    gb = I.groebner(budget)
    affine, deg = _dimension_and_degree(hilbert_numerator(gb.leading_monomials), n)
    if affine <= 0:
        raise ValueError("degree of an empty projective scheme")
    return deg


def hilbert_data(I: Ideal, budget: Budget | None = None) -> dict:
    """Projective dimension, degree and the Hilbert numerator of S/I."""
    _require_homogeneous(I)
    n = len(I.vars)
    leads = [] if I.is_zero() else I.groebner(budget).leading_monomials
    K = hilbert_numerator(leads)
    affine, deg = _dimension_and_degree(K, n)
    while len(K) > 1 and K[-1] == 0:
        K.pop()
    return {
        "dim": max(affine - 1, EMPTY),
        "degree": deg if affine > 0 else 0,
        "numerator": K,
    }


def hilbert_function(leads: Sequence[tuple], nvars: int, degree: int) -> int:
    """Number of standard monomials of a given degree (brute force; used as an oracle)."""
    count = 0

    def rec(prefix, remaining, k):
        nonlocal count
        if k == nvars - 1:
            e = prefix + (remaining,)
            if not any(_divides(l, e) for l in leads):
                count += 1
            return
        for a in range(remaining + 1):
            rec(prefix + (a,), remaining - a, k + 1)

    rec((), degree, 0)
    return count


# ---------------------------------------------------------------------------
# linear subspaces inside zero sets


class SubspaceSearch(enum.Enum):
    FOUND = "found"
    NOT_FOUND = "not-found"
    UNKNOWN = "unknown"


@dataclass
class SubspaceResult:
    status: SubspaceSearch
    basis: list = field(default_factory=list)
    checked: int = 0


def vanishes_on_span(I: Ideal, vectors: Sequence[Sequence]) -> bool:
    """True iff every generator of I vanishes identically on span(vectors)."""
    k = len(vectors)
    ts = VariableSet.indexed("_s", k)
    images = []
    for i in range(len(I.vars)):
        images.append(Polynomial.linear(ts, [v[i] for v in vectors]))
    return all(g.substitute(images, ts).is_zero() for g in I.generators)


def contains_linear_subspace(
    I: Ideal,
    k: int,
    candidates: Sequence[Sequence[Sequence]] = (),
    coordinate: bool = True,
    max_checks: int = 5000,
) -> SubspaceResult:
    """Search for a P^k inside V(I) among candidate spans and coordinate subspaces."""
    n = len(I.vars)
    if k >= n:
        return SubspaceResult(SubspaceSearch.NOT_FOUND)
    checked = 0
    for basis in candidates:
        checked += 1
        if vanishes_on_span(I, basis):
            return SubspaceResult(SubspaceSearch.FOUND, [list(v) for v in basis], checked)
    if coordinate:
        for subset in combinations(range(n), k + 1):
            if checked >= max_checks:
                return SubspaceResult(SubspaceSearch.UNKNOWN, checked=checked)
            checked += 1
            basis = [[int(i == j) for i in range(n)] for j in subset]
            if vanishes_on_span(I, basis):
                return SubspaceResult(SubspaceSearch.FOUND, basis, checked)
    return SubspaceResult(SubspaceSearch.NOT_FOUND, checked=checked)
