"""Alcoves of the fundamental apartment as labelled vertex tuples."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyError, InvalidInput
from .rootdata import RootDatum, special_vertex_labels
from .weyl import AffineWeylElement, group


@dataclass(frozen=True)
class ApartmentAlcove:
    vertices: tuple
    labels: tuple

    def vertex_set(self):
        return frozenset(self.vertices)

    def vertex_with_label(self, k):
        return self.vertices[self.labels.index(k)]


@dataclass(frozen=True)
class PointedApartmentChamber:
    alcove: ApartmentAlcove
    pointer_index: int
    ordered_vertices: tuple


def fundamental_chamber(rd: RootDatum) -> ApartmentAlcove:
    vs = tuple(group(rd).vertices())
    return ApartmentAlcove(vs, tuple(range(rd.rank + 1)))


def fold_to_fundamental(rd: RootDatum, x):
    """Move x into the closed fundamental alcove by affine simple reflections."""
    G = group(rd)
    x = tuple(Fraction(c) for c in x)
    simple_pv = [rd.pairing_vector(rd.simple_root(i)) for i in range(1, rd.rank + 1)]
    high_pv = rd.pairing_vector(rd.highest_root)
    while True:
        for i, a in enumerate(simple_pv):
            if sum(xi * ai for xi, ai in zip(x, a)) < 0:
                x = G.generators[i + 1](x)
                break
        else:
            if sum(xi * ai for xi, ai in zip(x, high_pv)) > 1:
                x = G.generators[0](x)
            else:
                return x


def vertex_label(rd: RootDatum, x):
    """Label (type) of a vertex of the alcove complex; raises if x is not a vertex."""
    y = fold_to_fundamental(rd, x)
    for k, v in enumerate(group(rd).vertices()):
        if v == y:
            return k
    raise InvalidInput(f"{x} is not a vertex of the alcove complex")


def apply(rd: RootDatum, w: AffineWeylElement, c: ApartmentAlcove) -> ApartmentAlcove:
    vs = tuple(w(v) for v in c.vertices)
    return ApartmentAlcove(vs, tuple(vertex_label(rd, v) for v in vs))


def preserves_labels(rd, w):
    c0 = fundamental_chamber(rd)
    return apply(rd, w, c0).labels == c0.labels


def sigma_permutation(rd: RootDatum, i):
    """sigma_i with t_i w_i w_0 (v_k) = v_{sigma_i(k)}, by exact vertex matching."""
    if i not in rd.special_set_J:
        raise InvalidInput(f"label {i} is not in J = {sorted(rd.special_set_J)}")
    u = group(rd).stabilizing_element(i)
    return permutation_of_stabilizer(rd, u)


def permutation_of_stabilizer(rd, u):
    vs = group(rd).vertices()
    index = {v: k for k, v in enumerate(vs)}
    try:
        return tuple(index[u(v)] for v in vs)
    except KeyError:
        raise ConsistencyError("element does not stabilise the fundamental alcove") from None


def permutation_sign(perm):
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        k, cycle = start, 0
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            cycle += 1
        if cycle % 2 == 0:
            sign = -sign
    return sign


def compose(p, q):
    """(p o q)(k) = p[q[k]]."""
    return tuple(p[k] for k in q)


def invert(p):
    out = [0] * len(p)
    for k, v in enumerate(p):
        out[v] = k
    return tuple(out)


def pointing_order(rd, label):
    """Vertex-label order of C_0 pointed at a special label (sigma of that label)."""
    if label == 0:
        return tuple(range(rd.rank + 1))
    return sigma_permutation(rd, label)


def point(rd, c: ApartmentAlcove, label) -> PointedApartmentChamber:
    if label not in special_vertex_labels(rd):
        raise InvalidInput(f"label {label} is not special")
    order = pointing_order(rd, label)
    ordered = tuple(c.vertex_with_label(k) for k in order)
    return PointedApartmentChamber(c, c.labels.index(label), ordered)


def verify_lemma_tec(rd: RootDatum):
    """Per i in J: (sign of sigma_i, (-1)^{l(w_i w_0)}, match)."""
    G = group(rd)
    w0 = G.longest_element()
    rows = []
    for i in sorted(rd.special_set_J):
        s = permutation_sign(sigma_permutation(rd, i))
        e = (-1) ** G.length(G.longest_element(omit=i) * w0)
        rows.append({"i": i, "sign_sigma": s, "sign_length": e, "match": s == e})
    return rows
