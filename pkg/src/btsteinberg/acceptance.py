"""The ten exact acceptance checks, shared by ``verify-all`` and the test suite.

Each check returns a dict with ``name``, ``expected``, ``got`` and ``pass``
(pass iff expected == got).  ``quick=True`` shrinks the instances so the whole
run takes a few seconds; the full run is what the acceptance test executes.
"""

from __future__ import annotations

import random
import time
from collections import Counter, deque

from . import flagmodel as fm
from . import harmonic as hm
from . import padic
from .apartment import apply, fundamental_chamber, verify_lemma_tec
from .building import build_ball
from .linalg import GF, QQ, rank
from .rootdata import all_types, build_root_datum, cominuscule_index
from .weyl import AffineWeylElement, group

DEFAULT_SEED = 20240601


def _report(name, expected, got, **extra):
    return {"name": name, "expected": expected, "got": got, "pass": expected == got, **extra}


# -- 1-3: apartment level, all types of rank <= 8 -----------------------------


def check_lemma_tec(quick=False):
    bad = []
    count = 0
    for t in all_types(4 if quick else 8):
        rd = build_root_datum(t)
        for row in verify_lemma_tec(rd):
            count += 1
            if not row["match"]:
                bad.append((str(t), row["i"]))
    return _report("lemma_tec_signs", [], bad, cases=count)


def check_stabilizer(quick=False):
    bad = []
    count = 0
    for t in all_types(4 if quick else 8):
        rd = build_root_datum(t)
        G = group(rd)
        C0 = fundamental_chamber(rd)
        for i in sorted(rd.special_set_J):
            count += 1
            e = G.stabilizing_element(i)
            image = apply(rd, e, C0)
            if image.vertex_set() != C0.vertex_set() or G.length_extended(e) != 0:
                bad.append((str(t), i))
    return _report("stabilizer_fixes_alcove", [], bad, cases=count)


def check_highest_root_translation(quick=False):
    bad = []
    count = 0
    for t in all_types(4 if quick else 8):
        if t.family == "A":
            continue
        count += 1
        rd = build_root_datum(t)
        G = group(rd)
        i0 = cominuscule_index(rd)
        lhs = G.reflection(rd.highest_root, 1) * G.reflection(rd.highest_root, 0)
        rhs = AffineWeylElement.translation_by(rd.fundamental_coweights[i0 - 1])
        if lhs != rhs or i0 in rd.special_set_J:
            bad.append(str(t))
    return _report("highest_root_translation", [], bad, cases=count)


# -- 4: counting laws ----------------------------------------------------------


def counting_violations(ball):
    """Panel sizes (checked on lattice vertices) and Bruhat cell sizes."""
    B = ball.building
    n, p, r = ball.n, ball.p, ball.radius
    verts = [tuple(B.vertex_lattice(padic.mat(rep), k) for k in range(n)) for rep in ball.reps]
    faces = {}
    for c, vs in enumerate(verts):
        for i in range(n):
            faces.setdefault(frozenset(vs[:i] + vs[i + 1 :]), set()).add(c)
    bad = []
    for c in range(len(ball)):
        if ball.distances[c] >= r:
            continue
        for i in range(n):
            members = faces[frozenset(verts[c][:i] + verts[c][i + 1 :])]
            pid = ball.chamber_panels[c][i]
            if len(members) != p + 1 or pid is None or set(ball.panels[pid]) != members:
                bad.append(("panel", c, i))
    for members in ball.panels:
        if len(members) != p + 1:
            bad.append(("panel_size", members))
    G = B.weyl
    cells = Counter(ball.weyl_distances)
    for w, L in G.bfs_lengths(r - 1).items():
        if cells.get(w, 0) != p**L:
            bad.append(("cell", G.reduced_word(w), cells.get(w, 0)))
    return bad


def check_counting(quick=False):
    cases = [(2, 2, 4), (3, 2, 2)] if quick else [(2, 2, 6), (2, 3, 6), (3, 2, 3), (3, 3, 3)]
    bad = {}
    sizes = {}
    for n, p, r in cases:
        ball = build_ball(n, p, r)
        sizes[f"{n},{p},{r}"] = len(ball)
        v = counting_violations(ball)
        if v:
            bad[f"{n},{p},{r}"] = v[:5]
    return _report("building_counting_laws", {}, bad, chambers=sizes)


# -- 5: telescoping identity in C_c(G/B) ---------------------------------------


def random_bwb_case(ball, rng, max_length=3):
    """A random (chamber, label, w) with dist(chamber) + l(w) <= radius."""
    G = ball.building.weyl
    n = ball.n
    while True:
        w = G.word([rng.randrange(n) for _ in range(rng.randint(0, max_length))])
        L = G.length(w)
        if L <= max_length:
            break
    pool = [c for c in range(len(ball)) if ball.distances[c] + L <= ball.radius]
    return rng.choice(pool), rng.randrange(n), w


def check_lemma_bwb(seed=DEFAULT_SEED, quick=False):
    rng = random.Random(seed)
    plan = [(2, 2, 4, 20), (3, 2, 2, 5)] if quick else [(2, 2, 6, 100), (3, 2, 3, 25)]
    bad = []
    total = 0
    for n, p, r, count in plan:
        ball = build_ball(n, p, r)
        G = ball.building.weyl
        for _ in range(count):
            c, m, w = random_bwb_case(ball, rng)
            total += 1
            if not hm.verify_lemma_bwb(ball, c, w, m):
                bad.append((n, c, m, G.reduced_word(w)))
    return _report("lemma_bwb_telescoping", [], bad, cases=total, seed=seed)


# -- 6: main vanishing ----------------------------------------------------------


def check_main_vanishing(quick=False):
    cases = [(2, 2, 3), (3, 2, 1)] if quick else [(2, 2, 4), (3, 2, 2)]
    got = {}
    detail = {}
    for n, p, r in cases:
        ball = build_ball(n, p, r)
        for K in (QQ, GF(5)):
            res = hm.verify_main_vanishing(ball, K)
            tag = f"{n},{p},{r},{K}"
            got[tag] = len(res["failures"])
            detail[tag] = {k: res[k] for k in ("dimension", "parahoric_generators", "relation_generators")}
    return _report("main_vanishing", {k: 0 for k in got}, got, instances=detail)


# -- 7: HC1 ----------------------------------------------------------------------


def check_hc1(quick=False):
    cases = [(2, 2, 2), (3, 2, 1)] if quick else [(2, 2, 4), (3, 2, 2)]
    got = {}
    for n, p, r in cases:
        ball = build_ball(n, p, r)
        viol = 0
        for h in hm.solve_harmonic(ball):
            viol += len(hm.check_hc1(h))
        got[f"{n},{p},{r}"] = viol
    return _report("hc1_cycles", {k: 0 for k in got}, got)


# -- 8-9: flag side --------------------------------------------------------------


def check_steinberg_dimensions(quick=False):
    cases = [(2, 2), (2, 3), (3, 2)] if quick else [(2, 2), (2, 3), (3, 2), (3, 3)]
    expected = {f"{n},{p}": p ** (n * (n - 1) // 2) for n, p in cases}
    got = {f"{n},{p}": fm.steinberg_dimension_level1(n, p) for n, p in cases}
    return _report("steinberg_dimensions", expected, got)


def random_bwp_case(n, p, k, rng, max_length=3):
    """g = h * (pointed chamber within distance k-1), h random in GL_n(Z_p);
    w a random reduced word in the finite simple reflections."""
    ball = _ball(n, p, k - 1)
    B = ball.building
    while True:
        h = [[rng.randrange(-p, p + 1) for _ in range(n)] for _ in range(n)]
        if padic.det(padic.mat(h)) % p:
            break
    c = rng.randrange(len(ball))
    m = rng.randrange(n)
    g = padic.matmul(padic.mat(h), padic.matmul(padic.mat(ball.reps[c]), B.omega[m]))
    G = B.weyl
    w = G.word([rng.randrange(1, n) for _ in range(rng.randint(0, max_length))])
    return g, G.reduced_word(w)


_BALLS = {}


def _ball(n, p, r):
    if (n, p, r) not in _BALLS:
        _BALLS[(n, p, r)] = build_ball(n, p, r)
    return _BALLS[(n, p, r)]


def check_flags_partition_bwp(seed=DEFAULT_SEED, quick=False):
    cases = [(2, 2, 1), (2, 3, 1)] if quick else [(2, 2, 1), (2, 3, 1), (3, 2, 2)]
    bad = []
    for n, p, k in cases:
        for i in range(1, n):
            if not fm.verify_partition_BiP(n, p, k, i):
                bad.append(("partition", n, p, k, i))
    rng = random.Random(seed)
    count = 5 if quick else 20
    for _ in range(count):
        g, word = random_bwp_case(3, 2, 2, rng)
        if not fm.verify_lemma_bwp(3, 2, 2, g, word):
            bad.append(("bwp", [[str(x) for x in r] for r in g], word))
    return _report("partition_and_lemma_bwp", [], bad, random_cases=count, seed=seed)


# -- 10: the tree ------------------------------------------------------------------


def lattice_tree_ball(p, radius):
    """Edges of the Bruhat-Tits tree of PGL_2(Q_p) within gallery distance
    ``radius`` of the standard edge, built from lattices alone.

    Returns (edges, label) with each edge a pair (label-0 vertex, label-1
    vertex) of lattice class keys, and label the parity of v_p(det).
    """
    key = lambda M: padic.lattice_class_key(M, p)
    label = {}
    basis = {}

    def add(M):
        k = key(M)
        if k not in basis:
            basis[k] = M
            label[k] = padic.vp(padic.det(M), p) % 2
        return k

    def neighbours(k):
        M = basis[k]
        subs = [padic.mat([[1, 0], [0, p]])] + [padic.mat([[p, a], [0, 1]]) for a in range(p)]
        return [add(padic.matmul(M, s)) for s in subs]

    def edge(a, b):
        return (a, b) if label[a] == 0 else (b, a)

    v0 = add(padic.identity(2))
    v1 = add(padic.mat([[1, 0], [0, p]]))
    start = edge(v0, v1)
    dist = {start: 0}
    todo = deque([start])
    while todo:
        e = todo.popleft()
        if dist[e] == radius:
            continue
        for v in e:
            for u in neighbours(v):
                f = edge(v, u)
                if f not in dist:
                    dist[f] = dist[e] + 1
                    todo.append(f)
    return sorted(dist), label


def tree_comparison(p, radius):
    """Compare solve_harmonic with classical edge cocycles on the lattice tree."""
    ball = build_ball(2, p, radius)
    B = ball.building
    edges, label = lattice_tree_ball(p, radius)
    # chamber -> oriented edge (label-0 vertex, label-1 vertex)
    ch_edge = [tuple(B.vertex_lattice(padic.mat(rep), k) for k in range(2)) for rep in ball.reps]
    same_edges = sorted(ch_edge) == edges
    # forest: vertices - edges = number of components, and connected
    verts = sorted({v for e in edges for v in e})
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    cycles = 0
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            cycles += 1
        parent[ra] = rb
    # classical space: zero edge sums at every vertex all of whose p+1 edges are present
    inc = {v: [] for v in verts}
    for idx, (a, b) in enumerate(edges):
        inc[a].append(idx)
        inc[b].append(idx)
    rows = []
    for v in verts:
        if len(inc[v]) == p + 1:
            r = [0] * len(edges)
            for idx in inc[v]:
                r[idx] = 1
            rows.append(r)
    classical_dim = len(edges) - rank(rows, len(edges))
    eidx = {e: i for i, e in enumerate(edges)}
    basis = hm.solve_harmonic(ball)
    transported_ok = True
    for h in basis:
        vec = [0] * len(edges)
        for c in range(len(ball)):
            vec[eidx[ch_edge[c]]] = h.value(c, 0)
            if h.value(c, 1) != -h.value(c, 0):
                transported_ok = False
        if any(sum(a * b for a, b in zip(r, vec)) != 0 for r in rows):
            transported_ok = False
    return {
        "same_edges": same_edges,
        "cycles": cycles,
        "harmonic_dim": len(basis),
        "classical_dim": classical_dim,
        "transported_ok": transported_ok,
    }


def check_tree(quick=False):
    radii = [1, 2] if quick else [1, 2, 3, 4]
    got = {}
    expected = {}
    for p in (2, 3):
        for r in radii:
            if p == 3 and r > 3:
                continue
            t = tree_comparison(p, r)
            tag = f"p={p},r={r}"
            got[tag] = t
            expected[tag] = {
                "same_edges": True,
                "cycles": 0,
                "harmonic_dim": t["classical_dim"],
                "classical_dim": t["classical_dim"],
                "transported_ok": True,
            }
    return _report("tree_sanity", expected, got)


CHECKS = [
    ("1", check_lemma_tec),
    ("2", check_stabilizer),
    ("3", check_highest_root_translation),
    ("4", check_counting),
    ("5", check_lemma_bwb),
    ("6", check_main_vanishing),
    ("7", check_hc1),
    ("8", check_steinberg_dimensions),
    ("9", check_flags_partition_bwp),
    ("10", check_tree),
]

SEEDED = {check_lemma_bwb, check_flags_partition_bwp}


def run_check(number, seed=DEFAULT_SEED, quick=False):
    fn = dict(CHECKS)[str(number)]
    t = time.perf_counter()
    res = fn(seed=seed, quick=quick) if fn in SEEDED else fn(quick=quick)
    res["criterion"] = int(number)
    res["seconds"] = round(time.perf_counter() - t, 3)
    return res


def run_all(seed=DEFAULT_SEED, quick=False):
    return [run_check(k, seed, quick) for k, _ in CHECKS]
