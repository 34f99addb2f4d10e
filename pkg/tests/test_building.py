from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from btsteinberg import InvalidInput, MarginError, ResourceLimitError, padic
from btsteinberg.acceptance import counting_violations, lattice_tree_ball
from btsteinberg.building import (
    MAX_CHAMBERS_ENV,
    Building,
    PointedChamber,
    build_ball,
    canonical_form,
    iwahori_contains,
    panel_neighbors,
    point_chamber,
    translation_matrix,
    weyl_distance,
)


def m(rows):
    return padic.mat(rows)


def test_iwahori_examples():
    I = padic.identity(2)
    assert iwahori_contains(I, 2, 2)
    assert not iwahori_contains(m([[1, 0], [0, 2]]), 2, 2)
    assert not iwahori_contains(m([[1, 0], [1, 1]]), 2, 2)
    assert iwahori_contains(m([[1, 0], [2, 1]]), 2, 2)
    assert iwahori_contains(m([[1, 5], [0, 1]]), 2, 2)
    # scalars are trivial in PGL
    assert iwahori_contains(m([[4, 0], [0, 4]]), 2, 2)
    with pytest.raises(InvalidInput):
        iwahori_contains(m([[1, 1], [1, 1]]), 2, 2)


def test_building_rejects_bad_input():
    with pytest.raises(InvalidInput):
        Building(1, 2)
    with pytest.raises(InvalidInput):
        Building(2, 4)
    with pytest.raises(InvalidInput):
        Building(3, 2).panel_neighbors(padic.identity(3), 3)
    with pytest.raises(InvalidInput):
        translation_matrix(3, 2, 0)
    with pytest.raises(InvalidInput):
        build_ball(2, 2, -1)


def test_iwahori_generators_fix_base_vertices():
    for n, p in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        B = Building(n, p)
        base = [B.vertex_lattice(B.identity, k) for k in range(n)]
        for g in B.iwahori_generators():
            assert B.contains(g)
            assert [B.vertex_lattice(g, k) for k in range(n)] == base
            assert B.canonical(g)[0] == B.canonical(B.identity)[0]


def test_omega_normalizes_iwahori():
    for n, p in [(2, 3), (3, 2)]:
        B = Building(n, p)
        for j, om in B.omega.items():
            for g in B.iwahori_generators():
                conj = padic.matmul(padic.matmul(om, g), B.omega_inv[j])
                assert B.contains(conj)


def test_translation_matrix_valuations():
    n, p = 3, 5
    for i in (1, 2):
        t = translation_matrix(n, p, i)
        vals = [padic.vp(t[r][r], p) for r in range(n)]
        assert vals == [-1] * i + [0] * (n - i)
        B = Building(n, p)
        assert B.pointing_of(t) == i


def invertible(n, lo=-4, hi=4):
    return (
        st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)
        .map(m)
        .filter(lambda g: padic.det(g) != 0)
    )


@settings(max_examples=60, deadline=None)
@given(invertible(2), invertible(2), st.sampled_from([2, 3]))
def test_same_coset_iff_quotient_in_iwahori(g, h, p):
    same = canonical_form(g, p)[0] == canonical_form(h, p)[0]
    assert same == iwahori_contains(padic.matmul(padic.inverse(g), h), 2, p)


@settings(max_examples=40, deadline=None)
@given(invertible(3, -3, 3), st.lists(st.integers(0, 50), min_size=1, max_size=4))
def test_right_iwahori_action_preserves_coset(g, picks):
    B = Building(3, 2)
    gens = B.iwahori_generators()
    h = g
    for k in picks:
        h = padic.matmul(h, gens[k % len(gens)])
    assert B.canonical(g)[0] == B.canonical(h)[0]
    # the representative is itself in the coset
    key, rep = B.canonical(g)
    assert B.canonical(m(rep))[0] == key


def test_panel_neighbors():
    for n, p in [(2, 2), (2, 5), (3, 3)]:
        B = Building(n, p)
        for i in range(n):
            keys = panel_neighbors(B.identity, i, n, p)
            assert len(keys) == p + 1
            assert len(set(keys)) == p + 1
            # every member of the panel sees the same panel
            _, rep = canonical_form(
                padic.matmul(padic.matmul(B.identity, B.u(i, 1)), B.sdot[i]), p
            )
            assert set(B.panel_neighbors(m(rep), i)) == set(keys)


def test_ball_sizes():
    assert len(build_ball(2, 2, 1)) == 5
    assert len(build_ball(2, 2, 2)) == 13
    assert len(build_ball(2, 3, 1)) == 7
    assert len(build_ball(3, 2, 1)) == 7
    assert len(build_ball(3, 2, 0)) == 1


@pytest.mark.parametrize("n,p,r", [(2, 2, 4), (2, 3, 3), (3, 2, 3), (3, 3, 2)])
def test_ball_size_matches_poincare_series(n, p, r):
    ball = build_ball(n, p, r)
    G = ball.building.weyl
    lengths = G.bfs_lengths(r).values()
    assert len(ball) == sum(p**L for L in lengths)
    for d in range(r + 1):
        assert ball.distances.count(d) == sum(p**L for L in lengths if L == d)


@pytest.mark.parametrize("p,r", [(2, 3), (3, 2)])
def test_tree_ball_matches_lattice_enumeration(p, r):
    ball = build_ball(2, p, r)
    edges, _ = lattice_tree_ball(p, r)
    assert len(edges) == len(ball)
    vertices = {v for e in edges for v in e}
    assert len(vertices) == len(edges) + 1  # connected, so a tree


def test_rank_one_words():
    ball = build_ball(2, 2, 2)
    G = ball.building.weyl
    s0, s1 = G.generators
    assert len(ball.chambers_at(s0 * s1)) == 4
    assert len(ball.chambers_at(s1 * s0)) == 4
    assert len(ball.chambers_at(s0)) == 2


def test_translation_chamber():
    ball = build_ball(3, 2, 2)
    B = ball.building
    for i in (1, 2):
        c, label = ball.chamber_of_matrix(B.translation_matrix(i))
        assert ball.distances[c] == 2  # l(w_0 w_i) for n = 3
        assert label == i
    c, label = ball.chamber_of_matrix(B.omega[1])
    assert (c, label) == (0, 1)


def test_weyl_distances_consistent_with_words():
    ball = build_ball(3, 2, 2)
    G = ball.building.weyl
    for c in range(len(ball)):
        w = weyl_distance(ball, c)
        assert G.length(w) == ball.distances[c]
        assert G.word(ball.weyl_words[c]) == w


def test_relative_positions_from_base():
    ball = build_ball(2, 3, 3)
    pos = ball.relative_positions(0, 3)
    assert len(pos) == len(ball)
    assert all(pos[c] == ball.weyl_distances[c] for c in pos)


def test_counting_laws():
    for args in [(2, 2, 3), (3, 2, 2)]:
        assert counting_violations(build_ball(*args)) == []


def test_boundary_panel_raises_margin():
    ball = build_ball(2, 2, 1)
    outer = ball.distances.index(1)
    missing = [i for i in range(2) if ball.chamber_panels[outer][i] is None]
    assert missing
    with pytest.raises(MarginError) as e:
        ball.panel(outer, missing[0])
    assert e.value.required == 2
    far = padic.matmul(translation_matrix(2, 2, 1), translation_matrix(2, 2, 1))
    with pytest.raises(MarginError):
        ball.chamber_of_matrix(far)


def test_point_chamber():
    ball = build_ball(3, 2, 1)
    assert point_chamber(ball, 3, 2) == PointedChamber(3, 2)
    assert point_chamber(ball, 0) == PointedChamber(0, 0)
    with pytest.raises(InvalidInput):
        point_chamber(ball, len(ball))
    with pytest.raises(InvalidInput):
        point_chamber(ball, 0, 3)


def test_resource_limit(monkeypatch):
    monkeypatch.setenv(MAX_CHAMBERS_ENV, "10")
    with pytest.raises(ResourceLimitError):
        build_ball(2, 2, 3)
    with pytest.raises(ResourceLimitError):
        build_ball(2, 2, 3, limit=12)
    assert len(build_ball(2, 2, 1)) == 5


def test_ids_are_deterministic():
    a, b = build_ball(3, 2, 2), build_ball(3, 2, 2)
    assert a.keys == b.keys
    assert a.panels == b.panels
    assert a.to_json() == b.to_json()


def test_chamber_vertices_are_lattice_chains():
    # the vertices of gB are g M_k Z_p^n with M_k = diag(1^k, p^(n-k)),
    # a chain p L_0 < L_1 < ... < L_{n-1} < L_0 with every step of index p
    n, p = 3, 2
    ball = build_ball(n, p, 2)
    B = ball.building
    seen = set()
    for rep in ball.reps:
        g = m(rep)
        assert len({B.vertex_lattice(g, k) for k in range(n)}) == n
        seen.add(tuple(B.vertex_lattice(g, k) for k in range(n)))
        L = [padic.matmul(g, m([[1 if r == s < k else p if r == s else 0 for s in range(n)] for r in range(n)])) for k in range(n)]
        L.append(padic.scale(L[0], Fraction(1, p)))
        for a, b in zip(L, L[1:]):
            q = padic.matmul(padic.inverse(b), a)
            assert padic.min_valuation(q, p) >= 0
            assert padic.vp(padic.det(q), p) == 1
    assert len(seen) == len(ball)
