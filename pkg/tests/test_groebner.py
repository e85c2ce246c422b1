import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from skewformats.algebra import Polynomial, VariableSet
from skewformats.formats import CATALOG, generic_instance
from skewformats.groebner import (
    EMPTY,
    Budget,
    GroebnerBudgetError,
    Ideal,
    SubspaceSearch,
    buchberger,
    contains_linear_subspace,
    hilbert_data,
    hilbert_function,
    ideal_member,
    projective_degree,
    projective_dimension,
    radical_member,
)
from skewformats.invariants import example_f_matrix, segre_minors, z_locus

Y = VariableSet.indexed("y", 6)
y = Y.gens()
V3 = VariableSet.indexed("x", 3)
x = V3.gens()


def test_buchberger_examples():
    assert buchberger([x[0]]).polynomials == [x[0]]
    gens = [x[0] * x[1], x[0] * x[2], x[1] * x[2]]
    gb = buchberger(gens)
    assert set(gb.polynomials) == set(gens)
    assert gb.spolys_reduce_to_zero()


def test_z1_of_example_has_pure_powers():
    Z1 = z_locus(example_f_matrix(), 1)
    leads = Z1.groebner().leading_monomials
    n = len(Z1.vars)
    for i in range(n):
        assert any(sum(m) == m[i] and m[i] > 0 for m in leads), i


def test_ideal_member_examples():
    assert ideal_member(Polynomial.zero(V3), Ideal(V3, [x[0]]))
    assert not ideal_member(x[0], Ideal(V3, [x[0] * x[1]]))
    Z2 = z_locus(example_f_matrix(), 2)
    assert all(radical_member(q, Z2) for q in segre_minors(Z2.vars))


def test_radical_member_examples():
    I = Ideal(V3, [x[0] * x[1]])
    assert radical_member(x[0] * x[1] * x[2], I)
    assert radical_member(x[0], Ideal(V3, [x[0] ** 2]))
    assert not ideal_member(x[0], Ideal(V3, [x[0] ** 2]))
    assert not radical_member(x[0], Ideal(V3, [x[1]]))


def test_projective_dimension_examples():
    assert projective_dimension(Ideal(Y, y)) == EMPTY
    assert projective_dimension(z_locus(example_f_matrix(), 1)) == EMPTY
    assert projective_dimension(z_locus(example_f_matrix(), 2)) == 3
    with pytest.raises(ValueError):
        projective_dimension(Ideal(V3, [x[0] + 1]))


def test_projective_degree_examples():
    segre = Ideal(Y, segre_minors(Y))
    assert (projective_dimension(segre), projective_degree(segre)) == (3, 3)
    assert (projective_dimension(Ideal(Y, [y[0]])), projective_degree(Ideal(Y, [y[0]]))) == (4, 1)
    assert (projective_dimension(Ideal(Y, [y[0] * y[1]])), projective_degree(Ideal(Y, [y[0] * y[1]]))) == (4, 2)
    with pytest.raises(ValueError):
        projective_degree(Ideal(Y, y))


def test_segre_dimension_matches_sympy_and_slices():
    syms = sympy.symbols("y0:6")
    exprs = [oracles.to_sympy(q, syms) for q in segre_minors(Y)]
    assert oracles.sympy_dim_degree(exprs, syms) == (3, 3)
    # a general P^2 slice meets the Segre threefold in 3 points: a linear section with 3 hyperplanes
    rng = random.Random(1)
    hyper = [Polynomial.linear(Y, [rng.randint(-5, 5) for _ in range(6)]) for _ in range(3)]
    h = hilbert_data(Ideal(Y, segre_minors(Y) + hyper))
    assert (h["dim"], h["degree"]) == (0, 3)


def test_budget_is_enforced():
    Z2 = z_locus(example_f_matrix(), 2)
    with pytest.raises(GroebnerBudgetError):
        buchberger(Z2.generators, Budget(max_basis=2))


def test_contains_linear_subspace_examples():
    F = generic_instance(CATALOG["NSS3"])
    assert contains_linear_subspace(z_locus(F, 2), 3).status is SubspaceSearch.FOUND
    N = generic_instance(CATALOG["NS2"])
    assert contains_linear_subspace(z_locus(N, 2), 1).status is SubspaceSearch.FOUND
    Z2 = z_locus(example_f_matrix(), 2)
    assert contains_linear_subspace(Z2, 3).status is SubspaceSearch.NOT_FOUND


def test_hilbert_function_oracle_agrees():
    leads = buchberger(segre_minors(Y)).leading_monomials
    for d in range(1, 6):
        assert hilbert_function(leads, 6, d) == oracles.hilbert_counts(leads, 6, [d])[0]


# properties


def _normalize(polys):
    return {p.monic() for p in polys}


quadrics = st.lists(
    st.lists(st.integers(-3, 3), min_size=6, max_size=6), min_size=1, max_size=3
)
MONOS2 = [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]


def _quadric(coeffs):
    return Polynomial(V3, dict(zip(MONOS2, coeffs)))


@settings(max_examples=25)
@given(quadrics)
def test_reduced_basis_matches_sympy(coeff_lists):
    gens = [q for q in map(_quadric, coeff_lists) if q]
    if not gens:
        return
    gb = buchberger(gens)
    assert gb.spolys_reduce_to_zero()
    syms = sympy.symbols("x0:3")
    G = sympy.groebner([oracles.to_sympy(g, syms) for g in gens], *syms, order="grevlex")
    theirs = {(e / sympy.Poly(e, *syms).LC(order="grevlex")) for e in G.exprs}
    ours = {oracles.to_sympy(p, syms) for p in _normalize(gb.polynomials)}
    assert {sympy.expand(e) for e in ours} == {sympy.expand(e) for e in theirs}


@settings(max_examples=25)
@given(quadrics, st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_membership_consistency(coeff_lists, mult):
    gens = [q for q in map(_quadric, coeff_lists) if q]
    if not gens:
        return
    I = Ideal(V3, gens)
    p = gens[0] * Polynomial.linear(V3, mult)
    assert ideal_member(p, I)
    assert radical_member(p, I)
    gb = I.groebner()
    nf = gb.normal_form(x[0] ** 3)
    assert gb.normal_form(nf) == nf


supports = st.lists(
    st.frozensets(st.integers(0, 4), min_size=1, max_size=3), min_size=1, max_size=5
)
V5 = VariableSet.indexed("x", 5)


def _monomial_ideal(sups):
    gens = []
    for S in sups:
        p = Polynomial.const(V5, 1)
        for i in S:
            p = p * V5.gens()[i]
        gens.append(p)
    return Ideal(V5, gens)


@given(supports)
def test_squarefree_dimension_and_degree_match_enumeration(sups):
    h = hilbert_data(_monomial_ideal(sups))
    assert (h["dim"], h["degree"] if h["dim"] >= 0 else 0) == oracles.squarefree_dim_degree(sups, 5)


@given(supports, supports)
def test_dimension_is_monotone(a, b):
    small, big = _monomial_ideal(a), _monomial_ideal(a + b)
    assert projective_dimension(small) >= projective_dimension(big)


@settings(max_examples=15)
@given(quadrics)
def test_dimension_degree_match_standard_monomial_count(coeff_lists):
    gens = [q for q in map(_quadric, coeff_lists) if q]
    if not gens:
        return
    I = Ideal(V3, gens)
    h = hilbert_data(I)
    dim, deg = oracles.dim_degree_from_leads(I.groebner().leading_monomials, 3)
    assert (h["dim"], h["degree"]) == (dim, deg)


def test_pair_products_all_coordinates():
    gens = [x[i] * x[j] for i, j in itertools.combinations(range(3), 2)]
    h = hilbert_data(Ideal(V3, gens))
    assert (h["dim"], h["degree"]) == (0, 3)
