from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from btsteinberg import InvalidInput
from btsteinberg.rootdata import all_types, build_root_datum, cominuscule_index, root_datum
from btsteinberg.weyl import (
    AffineWeylElement,
    affine_reflection,
    extended_dynkin_exponents,
    group,
    length,
    length_extended,
    longest_element,
    reduced_word,
    translation_element,
)

SMALL = all_types(4)
TYPES = all_types(8)


def test_affine_reflection_basics():
    rd = root_datum("B", 3)
    G = group(rd)
    for a in rd.positive_roots:
        s = affine_reflection(rd, a, 0)
        assert s.is_linear
        for r in (-1, 0, 2):
            s = G.reflection(a, r)
            assert s * s == G.identity
            # a point on H_{a,r}: r/2 * coroot pairs to r
            x = tuple(Fraction(r, 2) * c for c in rd.coroot(a))
            assert rd.pair(x, a) == r and s(x) == x
    with pytest.raises(InvalidInput):
        G.reflection((1, -1, 0), 0)


@pytest.mark.parametrize("t", SMALL, ids=str)
def test_hyperplane_length_matches_bfs(t):
    G = group(build_root_datum(t))
    for w, L in G.bfs_lengths(6).items():
        assert G.length(w) == L


@pytest.mark.parametrize("t", SMALL, ids=str)
def test_reduced_words(t):
    G = group(build_root_datum(t))
    for w, L in G.bfs_lengths(4).items():
        word = G.reduced_word(w)
        assert len(word) == L and G.word(word) == w


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_longest_elements(t):
    rd = build_root_datum(t)
    G = group(rd)
    w0 = G.longest_element()
    assert w0 * w0 == G.identity
    assert G.length(w0) == len(rd.positive_roots)
    assert w0.determinant() == (-1) ** len(rd.positive_roots)
    for i in range(1, rd.rank + 1):
        wi = G.longest_element(omit=i)
        assert wi * wi == G.identity
        # positive roots of the parabolic subsystem: i-th coordinate zero
        assert G.length(wi) == sum(1 for r in rd.positive_roots if r[i - 1] == 0)


def test_small_examples():
    a1 = root_datum("A", 1)
    G = group(a1)
    assert length(a1, G.identity) == 0
    assert length(a1, G.generators[0]) == 1
    assert length(a1, AffineWeylElement.translation_by(a1.coroot((1,)))) == 2
    assert longest_element(a1) == G.generators[1]
    assert len(reduced_word(a1, G.word([0, 1, 0]))) == 3
    assert reduced_word(a1, G.identity) == []
    a2 = root_datum("A", 2)
    assert length(a2, longest_element(a2)) == 3
    assert longest_element(a2, omit=1) == group(a2).generators[2]
    for t in SMALL:
        G = group(build_root_datum(t))
        for s, g in enumerate(G.generators):
            assert G.reduced_word(g) == [s]


def test_extended_elements_rejected():
    rd = root_datum("A", 2)
    t1 = translation_element(rd, 1)
    with pytest.raises(InvalidInput):
        length(rd, t1)
    with pytest.raises(InvalidInput):
        reduced_word(rd, t1)
    assert length_extended(rd, t1) == 2


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_stabilizing_elements(t):
    rd = build_root_datum(t)
    G = group(rd)
    verts = set(G.vertices())
    w0 = G.longest_element()
    for i in sorted(rd.special_set_J):
        e = G.stabilizing_element(i)
        assert G.length_extended(e) == 0
        assert {e(v) for v in verts} == verts
        assert G.length_extended(G.translation_element(i)) == G.length(G.longest_element(omit=i) * w0)
    for i in range(1, rd.rank + 1):
        if i not in rd.special_set_J:
            # special automorphism: t_i maps C_0 onto a W_a-translate, and lies in W_a iff integral
            t_i = G.translation_element(i)
            wa, om = G.stabilizer_part(t_i)
            assert G.in_affine_weyl(wa)


@pytest.mark.parametrize("t", [t for t in TYPES if t.family != "A"], ids=str)
def test_highest_root_translation(t):
    rd = build_root_datum(t)
    G = group(rd)
    i0 = cominuscule_index(rd)
    lhs = G.reflection(rd.highest_root, 1) * G.reflection(rd.highest_root, 0)
    assert lhs == AffineWeylElement.translation_by(rd.highest_coroot)
    assert lhs == G.translation_element(i0)


@pytest.mark.parametrize("t", SMALL, ids=str)
def test_coxeter_relations(t):
    rd = build_root_datum(t)
    G = group(rd)
    m = extended_dynkin_exponents(rd)
    for i, gi in enumerate(G.generators):
        for j, gj in enumerate(G.generators):
            x = gi * gj
            if m[i, j] is None:
                assert all(x**k != G.identity for k in range(1, 13))
            else:
                assert x ** m[i, j] == G.identity
                assert all(x**k != G.identity for k in range(1, m[i, j]))


def test_affine_a1_has_infinite_bond():
    m = extended_dynkin_exponents(root_datum("A", 1))
    assert m[0, 1] is None


def words(t, max_len=8):
    l = t.rank
    return st.lists(st.integers(0, l), max_size=max_len)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL).flatmap(lambda t: st.tuples(st.just(t), words(t), words(t))))
def test_length_properties(data):
    t, u, v = data
    G = group(build_root_datum(t))
    x, y = G.word(u), G.word(v)
    L = G.length(x)
    assert L <= len(u) and L % 2 == len(u) % 2
    assert G.length(x.inverse()) == L
    assert G.length(x * y) <= L + G.length(y)
    assert x.determinant() == (-1) ** L
    # action is a group action on points
    p = G.x0
    assert (x * y)(p) == x(y(p))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(TYPES).flatmap(lambda t: st.tuples(st.just(t), st.lists(st.integers(1, t.rank), max_size=6))))
def test_finite_elements_permute_roots(data):
    t, letters = data
    rd = build_root_datum(t)
    G = group(rd)
    w = G.word(letters)
    roots = set(rd.positive_roots) | {tuple(-x for x in r) for r in rd.positive_roots}
    # w acts on coweights; its transpose action on roots must preserve Phi:
    # <w x, alpha> = <x, w^-1 alpha>, test by pairing against fundamental coweights
    winv = w.inverse()
    for a in rd.positive_roots:
        image = tuple(rd.pair(winv(wv), a) for wv in rd.fundamental_coweights)
        assert tuple(int(c) for c in image) in roots
