import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from helpers import invertible_matrices, random_skew, skew_matrices
from skewformats.algebra import VariableSet
from skewformats.formats import CATALOG, NOT_SEMISTABLE, generic_instance, random_congruent
from skewformats.groebner import EMPTY, Ideal, hilbert_data, ideal_member, radical_member
from skewformats.invariants import (
    P4_LABELS,
    Stability,
    d4,
    entry_span_dim,
    fingerprint,
    normal_form,
    p4_fingerprint,
    rank2_ideal,
    stability_screen,
    z_locus,
)
from skewformats.skew import SkewMatrix, apply_congruence, pfaffian, pfaffians4, rank_at_point

ZERO6 = SkewMatrix.from_upper(VariableSet.indexed("x", 3), 6, {})


def test_d4_examples():
    assert [d4(normal_form(lab)) for lab in P4_LABELS] == [10, 9, 8, 9, 8, 6]
    assert d4(ZERO6) == 0
    got = [d4(generic_instance(CATALOG[n])) for n in ("NS1", "NS2", "NS3", "NSS1", "NSS2", "NSS3")]
    assert got == [11, 10, 12, 5, 7, 6]


@pytest.mark.parametrize("label", P4_LABELS)
def test_d4_matches_sympy_oracle(label):
    M = normal_form(label)
    assert d4(M) == oracles.d4_oracle(M)


def test_d4_oracle_on_a_not_stable_format():
    G = generic_instance(CATALOG["NS2"])
    assert d4(G) == oracles.d4_oracle(G) == 10


def test_rank2_ideal_examples():
    assert rank2_ideal(ZERO6).is_zero()
    F = normal_form("f")
    I = rank2_ideal(F)
    assert hilbert_data(I)["dim"] == 1
    l = F.vars.gens()
    assert all(radical_member(l[i], I) for i in range(3))


def test_rank2_locus_of_b_is_two_skew_lines():
    B = normal_form("b")
    I = rank2_ideal(B)
    l = B.vars.gens()
    L1 = Ideal(B.vars, [l[0], l[1], l[2]])
    L2 = Ideal(B.vars, [l[2], l[3], l[4]])
    # V(I) lies in both lines' union and contains both lines
    for p in pfaffians4(B):
        assert ideal_member(p, L1) and ideal_member(p, L2)
    for g1 in L1.generators:
        for g2 in L2.generators:
            assert radical_member(g1 * g2, I)
    h = hilbert_data(I)
    assert (h["dim"], h["degree"]) == (1, 2)


def test_z_locus_examples():
    assert all(z_locus(ZERO6, s).is_zero() for s in range(3))
    from skewformats.invariants import example_f_matrix

    E = example_f_matrix()
    assert hilbert_data(z_locus(E, 1))["dim"] == EMPTY
    h = hilbert_data(z_locus(E, 2))
    assert (h["dim"], h["degree"]) == (3, 3)


def test_entry_span_dim_examples():
    assert entry_span_dim(ZERO6) == -1
    assert entry_span_dim(normal_form("f")) == 2
    assert entry_span_dim(normal_form("d")) == 4


def test_fingerprints_separate_normal_forms():
    keys = [fingerprint(normal_form(lab), with_z=False).key() for lab in P4_LABELS]
    assert len(set(keys)) == 6
    for lab in P4_LABELS:
        assert p4_fingerprint(normal_form(lab)) == lab


def test_p4_fingerprint_preconditions():
    rng = random.Random(3)
    M = random_skew(6, 5, rng, zero_rate=0.0)
    assert not pfaffian(M).is_zero()
    with pytest.raises(ValueError):
        p4_fingerprint(M)
    with pytest.raises(ValueError):
        p4_fingerprint(generic_instance(CATALOG["d"]))


def test_stability_screen_examples():
    v = stability_screen(generic_instance(CATALOG["NSS3"]))
    assert v.verdict is Stability.UNSTABLE
    assert v.witness is not None and v.evidence
    v = stability_screen(normal_form("a"))
    assert any(c == "d4 >= 8" for c, _ in v.evidence)
    assert v.verdict is Stability.STABLE


def test_stability_screen_d4_thirteen_is_stable():
    rng = random.Random(13)
    for _ in range(2000):
        M = random_skew(6, 5, rng, box=2, zero_rate=0.45)
        if d4(M) == 13:
            break
    else:
        pytest.fail("no matrix with d4 = 13 sampled")
    v = stability_screen(M, search=False)
    assert v.verdict is Stability.STABLE and v.evidence


@pytest.mark.parametrize("name", NOT_SEMISTABLE)
def test_not_semistable_translates_are_unstable(name):
    M, _ = random_congruent(generic_instance(CATALOG[name]), random.Random(name))
    v = stability_screen(M)
    assert v.verdict is Stability.UNSTABLE and v.witness is not None


def test_every_verdict_has_evidence():
    for lab in P4_LABELS:
        v = stability_screen(normal_form(lab))
        assert v.verdict is not Stability.UNKNOWN and v.evidence


# properties


@settings(max_examples=25)
@given(skew_matrices(nvars=4), invertible_matrices())
def test_d4_is_a_congruence_invariant(M, S):
    assert d4(apply_congruence(S, M)) == d4(M)


@settings(max_examples=8)
@given(skew_matrices(nvars=3, box=2), invertible_matrices())
def test_z_locus_dimensions_are_congruence_invariant(M, S):
    N = apply_congruence(S, M)
    for s in range(3):
        a, b = z_locus(M, s), z_locus(N, s)
        da = 5 if a.is_zero() else hilbert_data(a)["dim"]
        db = 5 if b.is_zero() else hilbert_data(b)["dim"]
        assert da == db


@settings(max_examples=10)
@given(st.sampled_from(P4_LABELS), st.integers(0, 2**32 - 1))
def test_rank_two_points_lie_on_the_rank2_locus(label, seed):
    M = normal_form(label)
    I = rank2_ideal(M)
    rng = random.Random(seed)
    for _ in range(100):
        pt = [rng.randint(-1, 1) for _ in M.vars]
        if rank_at_point(M, pt) <= 2:
            assert all(g.evaluate(pt) == 0 for g in I.generators)


@settings(max_examples=10)
@given(skew_matrices(nvars=3, box=2))
def test_z_loci_are_nested(M):
    # rank <= s implies rank <= s + 1, so larger minors lie in the ideal of smaller ones
    for s in range(2):
        small = z_locus(M, s)
        for g in z_locus(M, s + 1).generators:
            assert ideal_member(g, small)


@settings(max_examples=10)
@given(st.sampled_from(("NS1", "NS2", "NS3", "NSS1", "NSS2", "NSS3")), st.integers(0, 2**32 - 1))
def test_specialization_never_raises_d4(name, seed):
    from helpers import specialize

    G = generic_instance(CATALOG[name])
    rng = random.Random(seed)
    assert d4(specialize(G, rng.randint(1, 6), rng)) <= d4(G)
