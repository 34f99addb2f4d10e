"""Harmonic cochains on pointed chambers of a finite building ball.

A cochain stores one value per chamber, its value at the pointing of label
0; values at other pointings follow from the re-pointing sign rule, so the
first harmonicity condition holds by construction and only the panel sums
need solving.  Functions on G/B (pointed chambers) are dictionaries keyed by
``(chamber_id, pointer_label)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from . import padic
from .apartment import compose, invert, permutation_sign, pointing_order
from .building import ChamberBall
from .errors import InvalidInput, MarginError
from .linalg import QQ, kernel_basis, rank

# -- re-pointing signs ---------------------------------------------------------


@lru_cache(maxsize=None)
def _orders(rd):
    return {j: pointing_order(rd, j) for j in sorted({0} | rd.special_set_J)}


def pointing_permutation(rd, a, b):
    """sigma with (pointing b ordering) = (pointing a ordering) o sigma."""
    o = _orders(rd)
    return compose(invert(o[a]), o[b])


def repointing_sign(rd, a, b):
    return permutation_sign(pointing_permutation(rd, a, b))


# -- functions on pointed chambers ------------------------------------------------


@dataclass
class IwahoriFunction:
    """Finitely supported function on pointed chambers of a ball."""

    values: dict = field(default_factory=dict)

    def __add__(self, other):
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = out.get(k, 0) + v
        return IwahoriFunction({k: v for k, v in out.items() if v != 0})

    def __neg__(self):
        return IwahoriFunction({k: -v for k, v in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return IwahoriFunction({k: c * v for k, v in self.values.items() if c * v != 0})

    def __eq__(self, other):
        return isinstance(other, IwahoriFunction) and self.values == other.values

    @property
    def support(self):
        return set(self.values)

    @classmethod
    def indicator(cls, keys):
        return cls({k: 1 for k in keys})


# -- cochains -------------------------------------------------------------------


class Cochain:
    def __init__(self, ball: ChamberBall, values, field=QQ):
        self.ball = ball
        self.field = field
        self.values = [field(v) for v in values]
        if len(self.values) != len(ball):
            raise InvalidInput("one value per chamber expected")

    @classmethod
    def zero(cls, ball, field=QQ):
        return cls(ball, [0] * len(ball), field)

    def value(self, c, label=0):
        s = repointing_sign(self.ball.building.rd, 0, label)
        return self.field(s * self.values[c])

    def __repr__(self):
        return f"Cochain({self.field}, support={sum(1 for v in self.values if v != 0)})"


def check_hc2(h: Cochain, ball: ChamberBall = None):
    """Interior panels whose chamber values do not sum to zero."""
    ball = ball or h.ball
    K = h.field
    bad = []
    for pid, members in enumerate(ball.panels):
        s = K(sum(h.values[c] for c in members))
        if s != 0:
            bad.append(pid)
    return bad


def check_hc1(h: Cochain, max_cycle=None):
    """Walk every closed chain of re-pointings on every chamber.

    Returns the list of (chamber, chain) where either an intermediate value
    disagrees with the accessor or the chain does not return to the start.
    """
    rd = h.ball.building.rd
    labels = sorted({0} | rd.special_set_J)
    max_cycle = max_cycle or len(labels)
    bad = []
    for c in range(len(h.ball)):
        for k in range(1, max_cycle + 1):
            for chain in itertools.product(labels, repeat=k):
                path = chain + (chain[0],)
                val = h.value(c, path[0])
                for a, b in zip(path, path[1:]):
                    # HC1: h(C_a) = sign(sigma) h(C_b) with C_b = (C_a)_sigma
                    val = h.field(repointing_sign(rd, a, b) * val)
                    if val != h.value(c, b):
                        bad.append((c, path))
                        break
    return bad


def constraint_rows(ball: ChamberBall):
    rows = []
    for members in ball.panels:
        r = [0] * len(ball)
        for c in members:
            r[c] = 1
        rows.append(r)
    return rows


def solve_harmonic(ball: ChamberBall, field=QQ):
    """Basis of cochains whose interior panel sums vanish (reduced form)."""
    basis = kernel_basis(constraint_rows(ball), len(ball), field)
    return [Cochain(ball, v, field) for v in basis]


def harmonic_dimension(ball, field=QQ):
    return len(ball) - rank(constraint_rows(ball), len(ball), field)


def pair(h: Cochain, phi: IwahoriFunction):
    K = h.field
    total = K.zero
    for (c, m), v in phi.values.items():
        total = K(total + K(v) * h.value(c, m))
    return total


# -- generators of the relation module ------------------------------------------


def parahoric_indicator(ball: ChamberBall, c, i, label=0):
    """g chi_{B_i} for g = the pointed chamber (c, label): its type-sigma(i) panel."""
    rd = ball.building.rd
    j = pointing_order(rd, label)[i]
    pid = ball.chamber_panels[c][j]
    if pid is None:
        raise MarginError(f"panel {j} of chamber {c} is not interior", required=ball.distances[c] + 1)
    return IwahoriFunction.indicator((d, label) for d in ball.panels[pid])


def double_coset_indicator(ball: ChamberBall, c, label, y):
    """g chi_{B y B} for g the pointed chamber (c, label), y in the extended group."""
    B = ball.building
    G = B.weyl
    om = G.alcove_stabilizer()[label]
    wa, om2 = G.stabilizer_part(om * y)
    m = next(k for k, x in G.alcove_stabilizer().items() if x == om2)
    L = G.length(wa)
    need = ball.distances[c] + L
    if need > ball.radius:
        raise MarginError(f"support needs radius {need}", required=need)
    pos = ball.relative_positions(c, L)
    return IwahoriFunction.indicator((d, m) for d, x in pos.items() if x == wa)


def relation_generator(ball: ChamberBall, c, i, label=0):
    """g (chi_{B t_i B} - chi_B) for g the pointed chamber (c, label), i in J."""
    rd = ball.building.rd
    if i not in rd.special_set_J:
        raise InvalidInput(f"{i} not in J")
    t = ball.building.weyl.translation_element(i)
    return double_coset_indicator(ball, c, label, t) - IwahoriFunction.indicator([(c, label)])


def relation_margin(ball, i):
    G = ball.building.weyl
    return G.length(G.longest_element(omit=i) * G.longest_element())


# -- telescoping identity in C_c(G/B) --------------------------------------------


def bruhat_cell(ball: ChamberBall, cid, label):
    """chi_{BxB} where x(C_0, v_0) is the pointed chamber (cid, label)."""
    w = ball.weyl_distances[cid]
    return IwahoriFunction.indicator((d, label) for d in ball.chambers_at(w))


def is_parahoric_invariant(ball: ChamberBall, f: IwahoriFunction, j):
    """Is f constant on every fibre of G/B -> G/B_j (pointed type-j panels)?"""
    rd = ball.building.rd
    for (c, m), v in f.values.items():
        jj = pointing_order(rd, m)[j]
        pid = ball.chamber_panels[c][jj]
        if pid is None:
            return False
        if any(f.values.get((d, m), 0) != v for d in ball.panels[pid]):
            return False
    return True


def verify_lemma_bwb(ball: ChamberBall, g, w, label=0, detail=False, literal=False):
    """Telescoping identity for g (chi_B - (-1)^{l(w)} chi_{BwB}) in sum_j C_c(G/B_j).

    g is a chamber id with pointer label, w an element of W_a with reduced
    word u_1...u_d.  The k-th summand g chi_{B u_1..u_{k-1} B} + g chi_{B u_1..u_k B}
    must be right B_{u_k}-invariant.

    With ``literal=True`` the cells are the double cosets B x B of the
    matrices x = g u_1...u_k instead of the translates g B u_1...u_k B; that
    variant only holds when lengths add along the word.
    """
    B = ball.building
    G = B.weyl
    word = G.reduced_word(w)
    if literal:
        X = padic.matmul(padic.mat(ball.reps[g]), B.omega[label])
        cells = [bruhat_cell(ball, *ball.chamber_of_matrix(X))]
        for s in word:
            X = padic.matmul(X, B.sdot[s])
            cells.append(bruhat_cell(ball, *ball.chamber_of_matrix(X)))
    else:
        cells = [double_coset_indicator(ball, g, label, G.word(word[:k])) for k in range(len(word) + 1)]
    d = len(word)
    lhs = cells[0] - ((-1) ** d) * cells[d]
    rhs = IwahoriFunction()
    summands_ok = True
    for k in range(1, d + 1):
        summand = cells[k - 1] + cells[k]
        rhs = rhs + ((-1) ** (k - 1)) * summand
        if not is_parahoric_invariant(ball, summand, word[k - 1]):
            summands_ok = False
    ok = lhs == rhs and summands_ok
    if detail:
        return {"word": word, "identity": lhs == rhs, "summands_invariant": summands_ok, "ok": ok}
    return ok


# -- vanishing of the pairing on a ball ------------------------------------------


def all_parahoric_indicators(ball):
    rd = ball.building.rd
    labels = sorted({0} | rd.special_set_J)
    out = []
    for members in ball.panels:
        for m in labels:
            out.append(IwahoriFunction.indicator((d, m) for d in members))
    return out


def all_relation_generators(ball):
    rd = ball.building.rd
    labels = sorted({0} | rd.special_set_J)
    out = []
    for i in sorted(rd.special_set_J):
        L = relation_margin(ball, i)
        for c in range(len(ball)):
            if ball.distances[c] + L > ball.radius:
                continue
            for m in labels:
                out.append(((c, m, i), relation_generator(ball, c, i, m)))
    return out


def verify_main_vanishing(ball, field=QQ):
    basis = solve_harmonic(ball, field)
    par = all_parahoric_indicators(ball)
    rel = all_relation_generators(ball)
    failures = []
    for k, h in enumerate(basis):
        for f in par:
            if pair(h, f) != 0:
                failures.append(("parahoric", k))
        for tag, f in rel:
            if pair(h, f) != 0:
                failures.append(("relation", k, tag))
    return {
        "dimension": len(basis),
        "parahoric_generators": len(par),
        "relation_generators": len(rel),
        "failures": failures,
        "ok": not failures,
    }
