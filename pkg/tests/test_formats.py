import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewformats.algebra import Polynomial, RationalMatrix, VariableSet
from skewformats.formats import (
    CATALOG,
    FormatError,
    FormatPattern,
    Kind,
    NOT_SEMISTABLE,
    TABLE_FORMATS,
    classify_2x2,
    classify_3x3_detzero,
    classify_4x4_skew_pfzero,
    generic_instance,
    has_form,
    random_congruent,
    random_invertible,
    reverse_pattern,
    verify_format_witness,
)
from skewformats.skew import LinearMatrix, SkewMatrix, determinant, pfaffian

VS = VariableSet(("x", "y"))
X, Y = VS.gens()
ZERO = Polynomial.zero(VS)
ZERO_COL = CATALOG["2x2-zero-col"]


def lin(rows, vs=VS):
    return LinearMatrix(vs, rows)


def test_has_form_examples():
    assert has_form(lin([[X, ZERO], [Y, ZERO]]), ZERO_COL)
    assert not has_form(lin([[X, X], [Y, Y]]), ZERO_COL)
    for name in ("a", "NSS2", "3x3-block"):
        F = CATALOG[name]
        zero = LinearMatrix.zeros(VS, *F.shape)
        if F.kind is Kind.PLAIN:
            assert has_form(zero, F)
        else:
            assert has_form(SkewMatrix(VS, zero.rows), F)
    with pytest.raises(ValueError):
        has_form(lin([[X, ZERO], [Y, ZERO]]), CATALOG["a"])


def test_verify_format_witness_examples():
    M = lin([[X, X], [Y, Y]])
    T = RationalMatrix([[1, -1], [0, 1]])
    assert verify_format_witness(M, RationalMatrix.identity(2), ZERO_COL, T)
    assert not verify_format_witness(M, RationalMatrix.identity(2), ZERO_COL, RationalMatrix.identity(2))

    D = generic_instance(CATALOG["d"])
    assert verify_format_witness(D, RationalMatrix.identity(6), CATALOG["d"])
    M2, S = random_congruent(D, random.Random(4))
    assert verify_format_witness(M2, S.inverse(), CATALOG["d"])
    assert not verify_format_witness(M2, RationalMatrix.zeros(6, 6), CATALOG["d"])


def test_reverse_pattern_examples():
    assert reverse_pattern(CATALOG["NSS1"]).mask == CATALOG["a"].mask
    assert reverse_pattern(CATALOG["NSS2"]).mask == CATALOG["c"].mask
    assert reverse_pattern(CATALOG["NSS3"]).mask == CATALOG["b"].mask
    assert reverse_pattern(CATALOG["e"]).kind is Kind.DOUBLE_SKEW


def test_reverse_pattern_is_an_involution():
    for F in CATALOG.values():
        assert reverse_pattern(reverse_pattern(F)).mask == F.mask


def test_catalog_round_trips_through_text():
    for F in CATALOG.values():
        G = FormatPattern.from_text(F.to_text())
        assert (G.name, G.mask, G.kind) == (F.name, F.mask, F.kind)
    with pytest.raises(ValueError):
        FormatPattern.from_text("name: x\nkind: plain\n0*x\n")


def test_pattern_validation():
    with pytest.raises(ValueError):
        FormatPattern.from_rows("bad", ["0*", "00"], Kind.SKEW)
    with pytest.raises(ValueError):
        FormatPattern.from_rows("bad", ["*0", "00"], Kind.SKEW)


def test_table_formats_have_vanishing_pfaffian():
    for name in TABLE_FORMATS:
        assert pfaffian(generic_instance(CATALOG[name])).is_zero()
    for name in NOT_SEMISTABLE:
        # not-semistable patterns force a vanishing Pfaffian as well
        assert pfaffian(generic_instance(CATALOG[name])).is_zero()


# 2x2


def test_classify_2x2_examples():
    res = classify_2x2(lin([[X, ZERO], [ZERO, ZERO]]), symmetric=True)
    assert res.pattern.name == "sym2" and res.S == RationalMatrix.identity(2)
    res = classify_2x2(lin([[X, X], [Y, Y]]))
    assert res.pattern.name == "2x2-zero-col" and has_form(res.image(lin([[X, X], [Y, Y]])), res.pattern)
    N = lin([[X, Y], [X, Y]])
    res = classify_2x2(N)
    assert res.pattern.name == "2x2-zero-row" and has_form(res.image(N), res.pattern)
    with pytest.raises(FormatError):
        classify_2x2(lin([[X, ZERO], [ZERO, Y]]))


def test_classify_2x2_symmetric_translate():
    rng = random.Random(8)
    for _ in range(10):
        G = random_invertible(2, rng)
        N = lin([[X, ZERO], [ZERO, ZERO]]).transform(G, G.T)
        res = classify_2x2(N, symmetric=True)
        assert verify_format_witness(N, res.S, res.pattern)


# 3x3


def test_classify_3x3_examples():
    vs = VariableSet.indexed("x", 6)
    g = vs.gens()
    z = Polynomial.zero(vs)
    N = LinearMatrix(vs, [[g[0], g[1], g[0] + g[1]], [g[2], g[3], g[2] + g[3]], [g[4], g[5], g[4] + g[5]]])
    res = classify_3x3_detzero(N)
    assert res.pattern.name == "3x3-zero-col"
    assert has_form(res.image(N), res.pattern)

    K = LinearMatrix(vs, [[z, g[0], g[1]], [-g[0], z, g[2]], [-g[1], -g[2], z]])
    res = classify_3x3_detzero(K)
    assert res.pattern.name == "3x3-skew"
    assert res.S == RationalMatrix.identity(3)

    with pytest.raises(FormatError):
        classify_3x3_detzero(LinearMatrix(vs, [[g[0], z, z], [z, g[1], z], [z, z, g[2]]]))


@pytest.mark.parametrize("name", ["3x3-zero-col", "3x3-zero-row", "3x3-block", "3x3-skew"])
def test_classify_3x3_orbit_round_trip(name):
    base = generic_instance(CATALOG[name])
    rng = random.Random(name)
    for k in range(50):
        S0, T0 = random_invertible(3, rng), random_invertible(3, rng)
        N = base.transform(S0, T0)
        assert determinant(N).is_zero()
        res = classify_3x3_detzero(N, seed=k)
        assert verify_format_witness(N, res.S, res.pattern, res.T)


# 4x4


def test_classify_4x4_examples():
    vs = VariableSet.indexed("x", 3)
    a, b, c = vs.gens()
    K = SkewMatrix.from_upper(vs, 4, {(0, 1): a, (0, 2): b, (1, 2): c})
    res = classify_4x4_skew_pfzero(K)
    assert res.pattern.name == "4x4-plane"
    assert verify_format_witness(K, res.S, res.pattern)

    Z = SkewMatrix.from_upper(vs, 4, {})
    res = classify_4x4_skew_pfzero(Z)
    assert res.S == RationalMatrix.identity(4)

    with pytest.raises(FormatError):
        classify_4x4_skew_pfzero(SkewMatrix.from_upper(vs, 4, {(0, 1): a, (2, 3): b}))


def test_classify_4x4_point_translates():
    vs = VariableSet.indexed("x", 3)
    a, b, c = vs.gens()
    W = SkewMatrix.from_upper(vs, 4, {(0, 1): a, (0, 2): b, (0, 3): c})
    rng = random.Random(44)
    for _ in range(50):
        N, _ = random_congruent(W, rng)
        res = classify_4x4_skew_pfzero(N)
        assert res.pattern.name == "4x4-point"
        assert verify_format_witness(N, res.S, res.pattern)


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["4x4-point", "4x4-plane"]))
def test_classify_4x4_orbit_property(seed, name):
    N, _ = random_congruent(generic_instance(CATALOG[name]), random.Random(seed))
    res = classify_4x4_skew_pfzero(N)
    assert verify_format_witness(N, res.S, res.pattern)
