"""Root data of the irreducible reduced Cartan types, Bourbaki numbering.

Conventions used throughout the package:

* ``cartan_matrix[i][j] = <alpha_i^vee, alpha_j>``.
* Roots are integer vectors in the basis of simple roots.
* Points of the apartment ``V`` (and coweights, coroots) are vectors in the
  basis of simple coroots, with rational entries.
* The pairing ``<x, alpha>`` of ``x`` (coroot coords) with ``alpha`` (root
  coords) is ``sum_ij x_i A_ij c_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import ConsistencyError, InvalidInput

FAMILIES = "ABCDEFG"


@dataclass(frozen=True, order=True)
class CartanType:
    family: str
    rank: int

    def __post_init__(self):
        f, l = self.family, self.rank
        if f not in FAMILIES or not isinstance(l, int):
            raise InvalidInput(f"unknown Cartan type {f}{l}")
        ok = {
            "A": l >= 1,
            "B": l >= 2,
            "C": l >= 2,
            "D": l >= 4,
            "E": l in (6, 7, 8),
            "F": l == 4,
            "G": l == 2,
        }[f]
        if not ok:
            raise InvalidInput(f"invalid rank {l} for family {f}")

    def __str__(self):
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "CartanType":
        text = text.strip().upper().replace("_", "")
        if len(text) < 2 or not text[1:].isdigit():
            raise InvalidInput(f"cannot parse Cartan type {text!r}")
        return cls(text[0], int(text[1:]))


def all_types(max_rank=8):
    """Every irreducible reduced type of rank <= max_rank, in a fixed order."""
    out = []
    for l in range(1, max_rank + 1):
        for f in FAMILIES:
            try:
                out.append(CartanType(f, l))
            except InvalidInput:
                pass
    return out


def cartan_matrix(t: CartanType):
    l = t.rank
    A = [[2 if i == j else 0 for j in range(l)] for i in range(l)]

    def link(i, j, a_ij=-1, a_ji=-1):
        # 1-based Bourbaki labels
        A[i - 1][j - 1] = a_ij
        A[j - 1][i - 1] = a_ji

    f = t.family
    if f in "ABC":
        for i in range(1, l):
            link(i, i + 1)
        if f == "B":
            link(l - 1, l, -1, -2)
        elif f == "C":
            link(l - 1, l, -2, -1)
    elif f == "D":
        for i in range(1, l - 1):
            link(i, i + 1)
        link(l - 2, l)
    elif f == "E":
        link(1, 3)
        link(2, 4)
        for i in range(3, l):
            link(i, i + 1)
    elif f == "F":
        link(1, 2)
        link(2, 3, -1, -2)
        link(3, 4)
    elif f == "G":
        link(1, 2, -3, -1)
    return tuple(tuple(row) for row in A)


def symmetrizer(A):
    """Half squared lengths d_i of the simple roots, so that d_i A_ij = d_j A_ji.

    Normalised so the shortest simple root has d = 1.
    """
    l = len(A)
    d = [None] * l
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(l):
            if j != i and A[i][j] != 0 and d[j] is None:
                d[j] = d[i] * A[i][j] / A[j][i]
                stack.append(j)
    m = min(d)
    return tuple(x / m for x in d)


def _inverse(A):
    """Exact inverse of a small integer matrix (Gauss-Jordan over Q)."""
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def root_closure(A):
    """Positive roots by closing the simple roots under simple reflections.

    s_i(beta) = beta - <alpha_i^vee, beta> alpha_i; negative images are dropped
    (they only arise from s_i(alpha_i)).
    """
    l = len(A)
    simple = [tuple(int(i == j) for j in range(l)) for i in range(l)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(l):
                k = sum(A[i][j] * beta[j] for j in range(l))
                if k == 0:
                    continue
                gamma = list(beta)
                gamma[i] -= k
                gamma = tuple(gamma)
                if all(c >= 0 for c in gamma) and gamma not in seen:
                    seen.add(gamma)
                    nxt.append(gamma)
        frontier = nxt
    return sorted(seen, key=lambda r: (sum(r), tuple(-c for c in r)))


@dataclass(frozen=True)
class RootDatum:
    cartan_type: CartanType
    cartan_matrix: tuple
    positive_roots: tuple
    coroots: dict = field(compare=False, hash=False, repr=False)
    fundamental_coweights: tuple = field(repr=False)
    highest_root: tuple = ()
    special_set_J: frozenset = frozenset()
    root_lengths: tuple = field(default=(), repr=False)

    @property
    def rank(self):
        return self.cartan_type.rank

    @property
    def marks(self):
        return self.highest_root

    def simple_root(self, i):
        """Simple root alpha_i, i in 1..l."""
        return tuple(int(j == i - 1) for j in range(self.rank))

    def pairing_vector(self, alpha):
        """Vector a with <x, alpha> = sum_i x_i a_i."""
        A = self.cartan_matrix
        l = self.rank
        return tuple(sum(A[i][j] * alpha[j] for j in range(l)) for i in range(l))

    def pair(self, x, alpha):
        return sum(xi * ai for xi, ai in zip(x, self.pairing_vector(alpha)))

    def is_root(self, alpha):
        alpha = tuple(alpha)
        return alpha in self.coroots

    def coroot(self, alpha):
        try:
            return self.coroots[tuple(alpha)]
        except KeyError:
            raise InvalidInput(f"{alpha} is not a root of {self.cartan_type}") from None

    @property
    def highest_coroot(self):
        return self.coroots[self.highest_root]

    def to_json(self):
        """JSON-ready dict; key order is fixed."""
        i0 = cominuscule_index(self)
        return {
            "type": str(self.cartan_type),
            "rank": self.rank,
            "cartan_matrix": [list(r) for r in self.cartan_matrix],
            "positive_roots": [list(r) for r in self.positive_roots],
            "num_positive_roots": len(self.positive_roots),
            "highest_root": list(self.highest_root),
            "marks": list(self.marks),
            "J": sorted(self.special_set_J),
            "i0": i0,
            "fundamental_coweights": [[str(x) for x in w] for w in self.fundamental_coweights],
            "special_vertex_labels": sorted(special_vertex_labels(self)),
        }


@lru_cache(maxsize=None)
def build_root_datum(t: CartanType) -> RootDatum:
    if not isinstance(t, CartanType):
        raise InvalidInput(f"expected CartanType, got {t!r}")
    A = cartan_matrix(t)
    d = symmetrizer(A)
    l = t.rank
    pos = root_closure(A)

    def norm2(c):
        # (alpha, alpha) with (alpha_i, alpha_j) = d_i A_ij
        return sum(c[i] * c[j] * d[i] * A[i][j] for i in range(l) for j in range(l))

    coroots = {}
    for c in pos:
        n2 = norm2(c)
        # alpha^vee = sum_j c_j (|alpha_j|^2/|alpha|^2) alpha_j^vee
        cv = tuple(c[j] * 2 * d[j] / n2 for j in range(l))
        if any(x.denominator != 1 for x in cv):
            raise ConsistencyError(f"non-integral coroot for {c}")
        cv = tuple(int(x) for x in cv)
        coroots[c] = cv
        coroots[tuple(-x for x in c)] = tuple(-x for x in cv)

    Ainv = _inverse(A)
    # sum_k X_ik A_kj = delta_ij  =>  X = A^{-1}
    coweights = tuple(tuple(Ainv[i]) for i in range(l))
    highest = max(pos, key=sum)
    J = frozenset(i + 1 for i in range(l) if highest[i] == 1)
    return RootDatum(
        cartan_type=t,
        cartan_matrix=A,
        positive_roots=tuple(pos),
        coroots=coroots,
        fundamental_coweights=coweights,
        highest_root=highest,
        special_set_J=J,
        root_lengths=d,
    )


def root_datum(family: str, rank: int) -> RootDatum:
    return build_root_datum(CartanType(family, rank))


def special_vertex_labels(rd: RootDatum):
    return frozenset({0}) | rd.special_set_J


def cominuscule_index(rd: RootDatum):
    """The label i0 with varpi_{i0} equal to the highest coroot; None for type A."""
    if rd.cartan_type.family == "A":
        return None
    hc = tuple(Fraction(x) for x in rd.highest_coroot)
    hits = [i + 1 for i, w in enumerate(rd.fundamental_coweights) if tuple(w) == hc]
    if len(hits) != 1:
        raise ConsistencyError(f"highest coroot of {rd.cartan_type} is not a unique fundamental coweight")
    return hits[0]
