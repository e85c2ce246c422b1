import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewformats.algebra import Polynomial, RationalMatrix, VariableSet, span_dimension
from skewformats.classify import (
    NS1_LEMMA,
    Rank2Status,
    _ArrowTrace,
    arrow_instance,
    classify_arrow,
    classify_full,
    classify_hammer,
    classify_ns1,
    find_rank2_point,
    hammer_instance,
    orbit_sample,
    reduce_at_rank2,
    semistable_instance,
    semistable_normal_form,
    semistable_pattern,
    stable_check_d,
    stable_reduce_f,
)
from skewformats.formats import CATALOG, FormatError, generic_instance, has_form, random_congruent, verify_format_witness
from skewformats.invariants import Stability, d4, example_f_matrix, normal_form, stability_screen
from skewformats.skew import SkewMatrix, apply_congruence, delete_rows_cols, pfaffian, rank_at_point

I6 = RationalMatrix.identity(6)


def substitute(M, images):
    return SkewMatrix(M.vars, [[p.substitute(images, M.vars) for p in row] for row in M.rows])


def assert_sound(M, rep):
    if rep.verified:
        assert verify_format_witness(M, rep.witness, CATALOG[rep.label])


# rank-2 points


def test_find_rank2_point_zero_matrix_is_degenerate():
    Z = SkewMatrix.from_upper(VariableSet.indexed("x", 3), 6, {})
    res = find_rank2_point(Z)
    assert res.status is Rank2Status.DEGENERATE
    assert rank_at_point(Z, res.point) == 0


def test_find_rank2_point_on_format_d_normal_form():
    D = normal_form("d")
    res = find_rank2_point(D)
    assert res.status is Rank2Status.POINT
    assert rank_at_point(D, res.point) == 2


def test_find_rank2_point_empty_locus():
    # entries spanning a plane with rank >= 4 everywhere
    assert find_rank2_point(example_f_matrix()).status is Rank2Status.NONE_EMPTY


def test_reduce_at_rank2_branches():
    # the top skew block alone is a rank-2 point of a hammer-form matrix
    H = hammer_instance("3x3-block", 1)
    pt = [1] + [0] * (len(H.vars) - 1)
    for M in (H, random_congruent(H, random.Random(0))[0]):
        red = reduce_at_rank2(M, pt)
        assert red.branch == "hammer" and has_form(red.reduced, CATALOG["hammer"])

    A, _ = random_congruent(arrow_instance("d", 2), random.Random(1))
    res = find_rank2_point(A)
    red = reduce_at_rank2(A, res.point)
    assert red.branch == "arrow" and has_form(red.reduced, CATALOG["arrow"])

    E = generic_instance(CATALOG["e"])
    res = find_rank2_point(E)
    red = reduce_at_rank2(E, res.point)
    # either branch is legitimate; which one applies depends on the point found
    assert red.branch in ("hammer", "arrow")
    assert has_form(red.reduced, CATALOG[red.branch])

    with pytest.raises(ValueError):
        reduce_at_rank2(normal_form("d"), [1, 0, 0, 0, 0])


# hammer, lemma, arrow


@pytest.mark.parametrize(
    "block,label", [("3x3-zero-col", "a"), ("3x3-zero-row", "b"), ("3x3-block", "c"), ("3x3-skew", "e")]
)
def test_classify_hammer_labels(block, label):
    for seed in range(10):
        M = hammer_instance(block, seed)
        rep = classify_hammer(M, seed)
        assert rep.label == label and rep.verified
        assert_sound(M, rep)


def test_classify_hammer_rejects_wrong_form():
    with pytest.raises(ValueError):
        classify_hammer(normal_form("a"))


def test_classify_ns1_branches():
    G = generic_instance(NS1_LEMMA)
    imgs = list(G.vars.gens())
    imgs[G[0, 5].linear_coeffs().index(1)] = Polynomial.zero(G.vars)
    # with m05 = 0 the last row vanishes
    M = substitute(G, imgs)
    rep = classify_ns1(M)
    assert rep.label == "a" and rep.verified

    vs = VariableSet.indexed("z", 8)
    z = vs.gens()
    # M_05 of the first 4x4 pattern (all stars in its row 0) -> (b)
    upper = {(0, 1): z[0], (0, 2): z[1], (0, 3): z[2], (0, 4): z[3], (0, 5): z[4],
             (1, 2): z[5], (1, 3): z[6], (1, 4): z[7]}
    M = SkewMatrix.from_upper(vs, 6, upper)
    assert pfaffian(M).is_zero()
    rep = classify_ns1(M)
    assert rep.label == "b" and rep.verified
    # M_05 of the second pattern (zero last row) -> (c)
    upper = {(0, 1): z[0], (0, 2): z[1], (0, 3): z[2], (0, 4): z[3], (0, 5): z[4],
             (1, 2): z[5], (1, 3): z[6], (2, 3): z[7]}
    M = SkewMatrix.from_upper(vs, 6, upper)
    assert pfaffian(M).is_zero()
    rep = classify_ns1(M)
    assert rep.label == "c" and rep.verified


@pytest.mark.parametrize("case,labels", [("d", {"d"}), ("f", {"f"}), ("lemma", {"a", "b", "c"}), ("hammer", {"a", "b", "c", "e"})])
def test_classify_arrow_end_states(case, labels):
    for seed in range(8):
        M = arrow_instance(case, seed)
        rep = classify_arrow(M, seed)
        assert rep.label in labels and rep.verified
        assert_sound(M, rep)


def test_arrow_routes_follow_the_flowchart():
    rep = classify_arrow(arrow_instance("d", 3))
    assert rep.route[0].startswith("arrow: a, b independent")
    assert rep.route[1].startswith("c in <y0, y1, y2>")
    assert rep.route[-1].endswith("(d)")
    rep = classify_arrow(arrow_instance("f", 3))
    assert rep.route[1].startswith("c not in <y0, y1, y2>")
    assert rep.route[-1].endswith("(f)")
    assert classify_arrow(arrow_instance("hammer", 3)).route[0] == "arrow: y dependent -> hammer"
    assert classify_arrow(arrow_instance("lemma", 3)).route[0] == "arrow: a, b dependent -> lemma"


@pytest.mark.parametrize("case", ["d", "f"])
def test_arrow_divisions_are_exact(case):
    M = arrow_instance(case, 5)
    trace = _ArrowTrace()
    classify_arrow(M, trace=trace)
    a, b = M[0, 5], M[1, 5]
    assert b * trace.c == pfaffian(delete_rows_cols(M, 0, 5))
    assert a * trace.c == pfaffian(delete_rows_cols(M, 1, 5))


# full classification


def test_classify_full_zero_matrix():
    Z = SkewMatrix.from_upper(VariableSet.indexed("x", 2), 6, {})
    rep = classify_full(Z)
    assert rep.label == "a" and rep.verified
    assert any("degenerate" in c for c in rep.caveats)


def test_classify_full_rejects_nonzero_pfaffian():
    vs = VariableSet.indexed("l", 3)
    l = vs.gens()
    M = SkewMatrix.from_upper(vs, 6, {(0, 1): l[0], (2, 3): l[1], (4, 5): l[2]})
    with pytest.raises(ValueError, match="Pfaffian does not vanish"):
        classify_full(M)


def test_classify_full_empty_rank2_locus():
    M, _ = random_congruent(example_f_matrix(), random.Random(6))
    rep = classify_full(M)
    assert rep.route[0].startswith("rank-2 locus empty")
    assert rep.label in {"a", "b", "c", "d"} and rep.verified
    assert_sound(M, rep)


@pytest.mark.parametrize("label", ["a", "b", "c", "d", "e", "f"])
def test_classify_full_orbit_samples(label):
    for seed in range(6):
        M = orbit_sample(label, nvars=5, seed=seed)
        rep = classify_full(M, seed=seed)
        assert rep.verified, (label, seed, rep.route, rep.caveats)
        assert_sound(M, rep)


@pytest.mark.parametrize("label,expected", [("a", "f"), ("b", "d"), ("c", "d"), ("d", "e"), ("e", "e"), ("f", "f")])
def test_classify_full_normal_form_translates(label, expected):
    M, _ = random_congruent(normal_form(label), random.Random(f"nf/{label}"))
    rep = classify_full(M)
    assert rep.normal_form == label
    assert rep.label == expected and rep.verified
    assert_sound(M, rep)


@settings(max_examples=10)
@given(st.sampled_from(["3x3-zero-col", "3x3-zero-row", "3x3-block", "3x3-skew"]), st.integers(0, 10**6))
def test_hammer_translates_keep_their_label(block, seed):
    base = hammer_instance(block, seed)
    M, _ = random_congruent(base, random.Random(seed))
    rep = classify_full(M, seed=seed, with_fingerprint=False)
    assert_sound(M, rep)
    if rep.route[0].startswith("rank-2 point"):
        assert rep.verified


# semistable normal form


def test_semistable_normal_form_already_normal():
    F = normal_form("f")
    res = semistable_normal_form(F)
    assert res.r == 2 and res.S == I6 and res.residual_zero


def test_semistable_normal_form_recovers_r4():
    M, _ = semistable_instance(4, seed=1)
    res = semistable_normal_form(M)
    assert res.r == 4 and res.residual_zero
    assert verify_format_witness(M, res.S, semistable_pattern(4))


def test_semistable_normal_form_r5_needs_six_variables():
    M, _ = semistable_instance(5, seed=2, nvars=6)
    assert semistable_normal_form(M).r == 5
    with pytest.raises(ValueError):
        semistable_instance(5, seed=2, nvars=5)


def test_semistable_normal_form_dependent_b():
    vs = VariableSet.indexed("x", 5)
    x = vs.gens()
    upper = {(0, 4): x[0], (0, 5): x[1], (1, 3): -x[0], (1, 5): x[0] + x[1], (2, 3): -x[1], (2, 4): -x[0] - x[1],
             (3, 4): x[3]}
    with pytest.raises(FormatError, match="NSS2"):
        semistable_normal_form(SkewMatrix.from_upper(vs, 6, upper))


@settings(max_examples=20)
@given(st.sampled_from([2, 3, 4]), st.integers(0, 10**6))
def test_semistable_normal_form_shape(r, seed):
    M, _ = semistable_instance(r, seed=seed)
    res = semistable_normal_form(M)
    out = apply_congruence(res.S, M)
    assert all(out[i, j].is_zero() for i in range(3) for j in range(3))
    assert span_dimension(res.x[: r + 1]) == r + 1
    A = [out[3, 4], out[3, 5], out[4, 5]]
    assert [f.is_zero() for f in A] == [k > r for k in (3, 4, 5)]


# stable normal forms


def test_stable_reduce_f_on_normal_form_a():
    red = stable_reduce_f(normal_form("a"), I6)
    assert red.status == "normal"


def test_stable_reduce_f_translate():
    N = normal_form("a")
    M, S = random_congruent(N, random.Random(21))
    red = stable_reduce_f(M, S.inverse())
    assert red.status == "normal"
    assert verify_format_witness(M, red.S, CATALOG["f"])
    assert span_dimension(red.forms) == 5


def test_stable_reduce_f_degenerations():
    A = normal_form("a")
    g = A.vars.gens()
    zero = Polynomial.zero(A.vars)
    # A' spanning only two dimensions with rational factors -> format (d)
    red = stable_reduce_f(substitute(A, g[:4] + [g[3]]), I6)
    assert red.status == "d"
    assert verify_format_witness(substitute(A, g[:4] + [g[3]]), red.S, CATALOG["d"])
    # a square relation -> not stable
    M = substitute(A, g[:4] + [zero])
    red = stable_reduce_f(M, I6)
    assert red.status == "NS3" and verify_format_witness(M, red.S, CATALOG["NS3"])


def test_stable_check_d():
    res = stable_check_d(normal_form("b"), I6)
    assert res.confirmed and (res.l_dim, res.m_dim) == (3, 3)

    vs = VariableSet.indexed("l", 5)
    l = vs.gens()
    shared = SkewMatrix.from_upper(vs, 6, {(0, 1): l[0], (0, 2): l[1], (1, 2): l[0] + l[1],
                                           (3, 4): l[2], (3, 5): l[3], (4, 5): l[4]})
    res = stable_check_d(shared, I6)
    assert not res.confirmed and res.l_dim == 2
    assert res.witness is not None and verify_format_witness(shared, res.witness, CATALOG[res.pattern])

    lone = SkewMatrix.from_upper(vs, 6, {(0, 1): l[0], (0, 2): l[1], (1, 2): l[2]})
    res = stable_check_d(lone, I6)
    assert not res.confirmed and res.m_dim == 0


# sampling


def test_orbit_sample_examples():
    M = orbit_sample("d", nvars=6, seed=1)
    assert pfaffian(M).is_zero()
    assert d4(M) == d4(generic_instance(CATALOG["d"]))
    N = orbit_sample("NSS3", nvars=8, seed=2)
    assert stability_screen(N).verdict is Stability.UNSTABLE
    assert orbit_sample("c", nvars=5, seed=9) == orbit_sample("c", nvars=5, seed=9)
    with pytest.raises(ValueError):
        orbit_sample("3x3-block", seed=0)
