"""The Bruhat-Tits building of PGL_n over Q_p, realised by Iwahori cosets.

Chambers are cosets gB of the Iwahori subgroup B (matrices in GL_n(Z_p)
that are upper triangular mod p), with g in the type-preserving subgroup
G^0 = {v_p(det g) = 0 mod n}.  A pointed chamber is a pair
(chamber, pointer label); the coset g * Omega_m * B of G/B corresponds to
the chamber gB pointed at its vertex of label m, where Omega_m is the
matrix lift of t_m w_m w_0.

Vertex of label k of the chamber gB is the lattice class of g M_k with
M_k = Z_p e_1 + ... + Z_p e_k + p Z_p^n.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

from . import padic
from .errors import InvalidInput, MarginError, ResourceLimitError
from .rootdata import root_datum
from .weyl import group

MAX_CHAMBERS_ENV = "BTSTEINBERG_MAX_CHAMBERS"
DEFAULT_MAX_CHAMBERS = 100_000


def _elementary(n, i, j, c):
    """I + c E_{ij} (1-based indices)."""
    return tuple(
        tuple(Fraction(int(r == s)) + (Fraction(c) if (r, s) == (i - 1, j - 1) else 0) for s in range(n))
        for r in range(n)
    )


def _diag(entries):
    n = len(entries)
    return tuple(tuple(Fraction(entries[r]) if r == s else Fraction(0) for s in range(n)) for r in range(n))


# -- Iwahori membership and canonical cosets --------------------------------


def iwahori_contains(g, n, p):
    """Is the projective class of g in the Iwahori subgroup?"""
    if len(g) != n:
        raise InvalidInput("dimension mismatch")
    if padic.det(g) == 0:
        raise InvalidInput("singular matrix")
    h = padic.primitive(g, p)
    if padic.vp(padic.det(h), p) != 0:
        return False
    return all(padic.vp(h[r][c], p) >= 1 for r in range(n) for c in range(r))


def canonical_form(g, p):
    """(key, representative) for the coset g B modulo scalars.

    key = (Hermite form of the lattice g Z_p^n, canonical mod-p flag of
    H^{-1} g); representative = H * flag.
    """
    gi = padic.integral_scaling(g)
    H = padic.lattice_hnf(gi, p)
    m = padic.min_valuation(H, p)
    q = p**m
    H = tuple(tuple(x // q for x in row) for row in H)
    k = padic.matmul(padic.inverse(H), padic.scale(gi, Fraction(1, q)))
    F = padic.canonical_flag(k, p, 1)
    rep = padic.matmul(H, F)
    key = (H, F)
    return key, tuple(tuple(int(x) for x in r) for r in rep)


class Building:
    """Generators and coset arithmetic for PGL_n over Q_p."""

    def __init__(self, n, p):
        if n < 2:
            raise InvalidInput("n must be at least 2")
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise InvalidInput(f"{p} is not prime")
        self.n, self.p = n, p
        self.rd = root_datum("A", n - 1)
        self.weyl = group(self.rd)
        self.identity = padic.identity(n)
        self.sdot = [self._sdot(i) for i in range(n)]
        self.omega = {0: self.identity}
        for j in range(1, n):
            self.omega[j] = padic.matmul(self.translation_matrix(j), self.weyl_matrix(self._w_j_w0(j)))
        self.omega_inv = {j: padic.inverse(m) for j, m in self.omega.items()}

    def _w_j_w0(self, j):
        G = self.weyl
        return G.longest_element(omit=j) * G.longest_element()

    def _sdot(self, i):
        n, p = self.n, self.p
        if i == 0:
            rows = [[Fraction(int(r == s)) for s in range(n)] for r in range(n)]
            rows[0][0] = rows[n - 1][n - 1] = Fraction(0)
            rows[0][n - 1] = Fraction(1, p)
            rows[n - 1][0] = Fraction(p)
            return tuple(tuple(r) for r in rows)
        rows = [[Fraction(int(r == s)) for s in range(n)] for r in range(n)]
        rows[i - 1], rows[i] = rows[i], rows[i - 1]
        return tuple(tuple(r) for r in rows)

    def u(self, i, a):
        """Root-group element u_i(a) in B used to enumerate B s_i B / B."""
        if i == 0:
            return _elementary(self.n, self.n, 1, a * self.p)
        return _elementary(self.n, i, i + 1, a)

    def translation_matrix(self, i):
        """diag(p^{-1} 1_i, 1_{n-i}), whose valuation image is varpi_i."""
        if not 1 <= i <= self.n - 1:
            raise InvalidInput(f"label {i} outside 1..{self.n - 1}")
        return _diag([Fraction(1, self.p)] * i + [1] * (self.n - i))

    def weyl_matrix(self, w):
        """Monomial lift of an element of W_a via a reduced word."""
        g = self.identity
        for s in self.weyl.reduced_word(w):
            g = padic.matmul(g, self.sdot[s])
        return g

    def extended_matrix(self, w):
        """Monomial lift of an element of the extended affine Weyl group."""
        wa, om = self.weyl.stabilizer_part(w)
        label = next(j for j, x in self.weyl.alcove_stabilizer().items() if x == om)
        return padic.matmul(self.weyl_matrix(wa), self.omega[label])

    def iwahori_generators(self):
        """Topological generators of B (used for orbit enumeration)."""
        n, p = self.n, self.p
        gens = []
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                if a < b:
                    gens.append(_elementary(n, a, b, 1))
                elif a > b:
                    gens.append(_elementary(n, a, b, p))
        units = [-1, _primitive_root_mod_square(p)] if p > 2 else [-1, 5]
        for a in range(n):
            for u in units:
                gens.append(_diag([u if r == a else 1 for r in range(n)]))
        return gens

    def contains(self, g):
        return iwahori_contains(g, self.n, self.p)

    def canonical(self, g):
        return canonical_form(g, self.p)

    def pointing_of(self, g):
        """Pointer label m of the coset gB: m = -v_p(det g) mod n."""
        return int(-padic.vp(padic.det(g), self.p)) % self.n

    def pointed_coset(self, g):
        """(chamber key, pointer label) of the pointed chamber g(C_0, v_0)."""
        m = self.pointing_of(g)
        key, _ = canonical_form(padic.matmul(g, self.omega_inv[m]), self.p)
        return key, m

    def panel_neighbors(self, g, i):
        """The q+1 chamber keys sharing the type-i panel of the chamber gB (g in G^0)."""
        if not 0 <= i < self.n:
            raise InvalidInput(f"panel label {i} outside 0..{self.n - 1}")
        out = [canonical_form(g, self.p)[0]]
        for a in range(self.p):
            h = padic.matmul(padic.matmul(g, self.u(i, a)), self.sdot[i])
            out.append(canonical_form(h, self.p)[0])
        return out

    def vertex_lattice(self, g, k):
        """Lattice class key of the label-k vertex of the chamber gB (g in G^0)."""
        t = _diag([1] * k + [self.p] * (self.n - k))
        return padic.lattice_class_key(padic.matmul(g, t), self.p)


def _primitive_root_mod_square(p):
    m = p * p
    order = p * (p - 1)
    for g in range(2, m):
        if g % p == 0:
            continue
        x, k = g, 1
        while x != 1:
            x = x * g % m
            k += 1
        if k == order:
            return g
    raise AssertionError("no primitive root")


def translation_matrix(n, p, i):
    return Building(n, p).translation_matrix(i)


def panel_neighbors(g, i, n, p):
    return Building(n, p).panel_neighbors(g, i)


# -- balls -------------------------------------------------------------------


@dataclass
class ChamberBall:
    building: Building
    radius: int
    keys: list = field(default_factory=list)
    reps: list = field(default_factory=list)
    distances: list = field(default_factory=list)
    weyl_distances: list = field(default_factory=list)
    weyl_words: list = field(default_factory=list)
    chamber_panels: list = field(default_factory=list)
    panels: list = field(default_factory=list)
    index: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.building.n

    @property
    def p(self):
        return self.building.p

    def __len__(self):
        return len(self.keys)

    def id_of(self, key):
        try:
            return self.index[key]
        except KeyError:
            raise MarginError("chamber lies outside the ball", required=self.radius + 1) from None

    def chamber_of_matrix(self, g):
        """Pointed chamber (id, label) of g(C_0, v_0)."""
        key, m = self.building.pointed_coset(g)
        return self.id_of(key), m

    def panel(self, c, i):
        """Chamber ids of the type-i panel of chamber c; MarginError at the boundary."""
        pid = self.chamber_panels[c][i]
        if pid is None:
            raise MarginError(f"panel {i} of chamber {c} is not interior", required=self.distances[c] + 1)
        return self.panels[pid]

    def interior_panels(self):
        return list(range(len(self.panels)))

    def panel_type(self, pid):
        c = self.panels[pid][0]
        return self.chamber_panels[c].index(pid)

    def relative_positions(self, h, depth):
        """Weyl distance delta(h, D) for every chamber D within gallery distance depth of h."""
        G = self.building.weyl
        out = {h: G.identity}
        frontier = [h]
        for _ in range(depth):
            nxt = []
            for c in frontier:
                for i in range(self.n):
                    for d in self.panel(c, i):
                        if d not in out:
                            out[d] = out[c] * G.generators[i]
                            nxt.append(d)
            frontier = nxt
        return out

    def chambers_at(self, w):
        """Chamber ids at Weyl distance w from the base chamber."""
        return [c for c, x in enumerate(self.weyl_distances) if x == w]

    def to_json(self):
        return {
            "n": self.n,
            "p": self.p,
            "radius": self.radius,
            "num_chambers": len(self),
            "chambers": [[list(r) for r in m] for m in self.reps],
            "distances": self.distances,
            "weyl_words": self.weyl_words,
            "panels": [list(ps) for ps in self.panels],
            "chamber_panels": self.chamber_panels,
        }


@dataclass(frozen=True)
class PointedChamber:
    chamber_id: int
    pointer_label: int


def weyl_distance(ball: ChamberBall, c):
    """delta(C_0, c), folded along the BFS geodesic at construction time."""
    return ball.weyl_distances[c]


def point_chamber(ball: ChamberBall, c, label=0) -> PointedChamber:
    """In type A every vertex is special, so any label 0..n-1 may be the pointer."""
    if not 0 <= c < len(ball):
        raise InvalidInput(f"chamber {c} is not in the ball")
    if label not in range(ball.n):
        raise InvalidInput(f"label {label} is not a special label for n={ball.n}")
    return PointedChamber(c, label)


def max_chambers():
    return int(os.environ.get(MAX_CHAMBERS_ENV, DEFAULT_MAX_CHAMBERS))


def build_ball(n, p, radius, limit=None) -> ChamberBall:
    """Gallery-distance ball around the base chamber, in deterministic order."""
    if radius < 0:
        raise InvalidInput("radius must be nonnegative")
    limit = max_chambers() if limit is None else limit
    B = Building(n, p)
    G = B.weyl
    ball = ChamberBall(B, radius)
    layer = {canonical_form(B.identity, p)[0]: (None, None, B.identity)}
    parent_info = {}
    neighbor_keys = []
    for d in range(radius + 2):
        # id assignment: by distance, then canonical key
        order = sorted(layer)
        if d <= radius:
            for key in order:
                parent, i, rep = layer[key]
                cid = len(ball.keys)
                ball.index[key] = cid
                ball.keys.append(key)
                ball.reps.append(canonical_form(rep, p)[1])
                ball.distances.append(d)
                if parent is None:
                    ball.weyl_distances.append(G.identity)
                    ball.weyl_words.append([])
                else:
                    ball.weyl_distances.append(ball.weyl_distances[parent] * G.generators[i])
                    ball.weyl_words.append(ball.weyl_words[parent] + [i])
                parent_info[cid] = (parent, i)
                if len(ball.keys) > limit:
                    raise ResourceLimitError(f"ball exceeds {limit} chambers", bound=limit)
        if d == radius:
            break
        nxt = {}
        for key in order:
            cid = ball.index[key]
            rep = ball.reps[cid]
            rows = []
            for i in range(n):
                nb = []
                for a in range(p):
                    h = padic.matmul(padic.matmul(rep, B.u(i, a)), B.sdot[i])
                    k2 = canonical_form(h, p)[0]
                    nb.append(k2)
                    if k2 not in ball.index and k2 not in nxt:
                        nxt[k2] = (cid, i, h)
                rows.append(nb)
            neighbor_keys.append(rows)
        layer = nxt
    # neighbours of the outermost layer, needed only to decide panel completeness
    for cid in range(len(neighbor_keys), len(ball.keys)):
        rep = ball.reps[cid]
        rows = []
        for i in range(n):
            rows.append(
                [canonical_form(padic.matmul(padic.matmul(rep, B.u(i, a)), B.sdot[i]), p)[0] for a in range(p)]
            )
        neighbor_keys.append(rows)
    panel_ids = {}
    for cid, rows in enumerate(neighbor_keys):
        cp = []
        for i, nb in enumerate(rows):
            members = [ball.keys[cid]] + nb
            if all(k in ball.index for k in members):
                ids = tuple(sorted(ball.index[k] for k in members))
                pid = panel_ids.get(ids)
                if pid is None:
                    pid = panel_ids[ids] = len(ball.panels)
                    ball.panels.append(ids)
                cp.append(pid)
            else:
                cp.append(None)
        ball.chamber_panels.append(cp)
    return ball
