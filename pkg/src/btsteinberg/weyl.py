"""Finite, affine and extended affine Weyl groups acting on the apartment.

An element is a pair ``(translation, linear)`` acting by
``x -> linear @ x + translation`` in simple-coroot coordinates.  The linear
part of every Weyl group element preserves the coroot lattice, so it is an
integer matrix; translations are coweights with rational coordinates.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidInput
from .rootdata import RootDatum, cominuscule_index


def _matmul(A, B):
    n = len(A)
    m = len(B[0])
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(m)) for i in range(n))


def _matvec(A, x):
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def _identity(l):
    return tuple(tuple(int(i == j) for j in range(l)) for i in range(l))


def _det(A):
    # Bareiss-free exact determinant via Fractions; matrices are tiny
    M = [[Fraction(x) for x in row] for row in A]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


@dataclass(frozen=True)
class AffineWeylElement:
    translation: tuple
    linear: tuple

    @classmethod
    def identity(cls, l):
        return cls(tuple(Fraction(0) for _ in range(l)), _identity(l))

    @classmethod
    def translation_by(cls, v):
        v = tuple(Fraction(x) for x in v)
        return cls(v, _identity(len(v)))

    def __mul__(self, other):
        return AffineWeylElement(
            tuple(a + b for a, b in zip(_matvec(self.linear, other.translation), self.translation)),
            _matmul(self.linear, other.linear),
        )

    def __call__(self, x):
        return tuple(a + b for a, b in zip(_matvec(self.linear, x), self.translation))

    def inverse(self):
        inv = _int_inverse(self.linear)
        return AffineWeylElement(tuple(-x for x in _matvec(inv, self.translation)), inv)

    def __pow__(self, k):
        out = AffineWeylElement.identity(len(self.translation))
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    @property
    def rank(self):
        return len(self.translation)

    @property
    def is_linear(self):
        return all(x == 0 for x in self.translation)

    def linear_part(self):
        return AffineWeylElement(tuple(Fraction(0) for _ in self.translation), self.linear)

    def determinant(self):
        return int(_det(self.linear))

    def to_json(self):
        return {
            "translation": [str(x) for x in self.translation],
            "linear": [list(r) for r in self.linear],
        }


def _int_inverse(A):
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
    return tuple(tuple(int(x) for x in row[n:]) for row in M)


class AffineWeylGroup:
    """W_a = Q(coroots) x| W inside the extended group P(coweights) x| W.

    Generators are indexed 0..l: index 0 is s_0 = s_{highest root, 1}, index
    i >= 1 is the simple reflection s_i.
    """

    def __init__(self, rd: RootDatum):
        self.rd = rd
        self.l = rd.rank
        self._pv = [rd.pairing_vector(a) for a in rd.positive_roots]
        self.identity = AffineWeylElement.identity(self.l)
        self.generators = [self.reflection(rd.highest_root, 1)] + [
            self.reflection(rd.simple_root(i), 0) for i in range(1, self.l + 1)
        ]
        self.x0 = self.barycenter()
        self._stab = None

    # -- construction -------------------------------------------------------

    def reflection(self, alpha, r=0):
        """s_{alpha,r} = tau(r alpha^vee) o s_alpha, the reflection in <x,alpha> = r."""
        rd = self.rd
        alpha = tuple(alpha)
        cv = rd.coroot(alpha)
        if not isinstance(r, int):
            raise InvalidInput("r must be an integer")
        a = rd.pairing_vector(alpha)
        lin = tuple(tuple(int(i == j) - cv[i] * a[j] for j in range(self.l)) for i in range(self.l))
        return AffineWeylElement(tuple(Fraction(r * c) for c in cv), lin)

    def vertices(self):
        """Vertices of the fundamental alcove: 0 and varpi_i / n_i."""
        rd = self.rd
        out = [tuple(Fraction(0) for _ in range(self.l))]
        for i, w in enumerate(rd.fundamental_coweights):
            out.append(tuple(Fraction(x) / rd.marks[i] for x in w))
        return out

    def barycenter(self):
        vs = self.vertices()
        return tuple(sum(v[k] for v in vs) / (self.l + 1) for k in range(self.l))

    def word(self, letters):
        w = self.identity
        for s in letters:
            w = w * self.generators[s]
        return w

    def translation_element(self, i):
        """Pure translation by the fundamental coweight varpi_i (the image of t_i)."""
        if not 1 <= i <= self.l:
            raise InvalidInput(f"label {i} outside 1..{self.l}")
        return AffineWeylElement.translation_by(self.rd.fundamental_coweights[i - 1])

    # -- membership and length ----------------------------------------------

    def in_affine_weyl(self, w):
        """True iff the translation part lies in the coroot lattice."""
        return all(Fraction(x).denominator == 1 for x in w.translation)

    def length_extended(self, w):
        """Number of walls H_{alpha,r} separating C_0 from w C_0."""
        x = self.x0
        y = w(x)
        total = 0
        for a in self._pv:
            s = sum(xi * ai for xi, ai in zip(x, a))
            t = sum(yi * ai for yi, ai in zip(y, a))
            total += abs(math.floor(t) - math.floor(s))
        return total

    def length(self, w):
        if not self.in_affine_weyl(w):
            raise InvalidInput("element is not in W_a (use length_extended)")
        return self.length_extended(w)

    def reduced_word(self, w):
        if not self.in_affine_weyl(w):
            raise InvalidInput("element is not in W_a; reduced words exist only there")
        word = []
        n = self.length(w)
        while n:
            for s, g in enumerate(self.generators):
                v = w * g
                m = self.length(v)
                if m < n:
                    word.append(s)
                    w, n = v, m
                    break
        word.reverse()
        return word

    def stabilizer_part(self, w):
        """Split w = w_a * omega with omega stabilizing C_0 and w_a in W_a."""
        for omega in self.alcove_stabilizer().values():
            wa = w * omega.inverse()
            if self.in_affine_weyl(wa):
                return wa, omega
        raise InvalidInput("element is not in the extended affine Weyl group")

    def alcove_stabilizer(self):
        """{label i: t_i w_i w_0} for i in J, plus {0: identity}."""
        if self._stab is None:
            self._stab = {0: self.identity}
            for i in sorted(self.rd.special_set_J):
                self._stab[i] = self.stabilizing_element(i)
        return self._stab

    # -- finite Weyl group --------------------------------------------------

    def longest_element(self, omit=None):
        """Longest element of W (omit=None) or of the parabolic W_{Delta - {omit}}."""
        if omit is not None and not 1 <= omit <= self.l:
            raise InvalidInput(f"omit label {omit} outside 1..{self.l}")
        allowed = [i for i in range(1, self.l + 1) if i != omit]
        w = self.identity
        # ws_j > w iff w(alpha_j^vee) is a positive coroot: column j of w.linear
        while True:
            for j in allowed:
                col = [w.linear[r][j - 1] for r in range(self.l)]
                if all(c >= 0 for c in col):
                    w = w * self.generators[j]
                    break
            else:
                return w

    def stabilizing_element(self, i):
        """t_i w_i w_0, an element of the extended group fixing C_0 when i is in J."""
        return self.translation_element(i) * self.longest_element(omit=i) * self.longest_element()

    # -- oracles ------------------------------------------------------------

    def bfs_lengths(self, max_length):
        """Minimal word lengths over S_a by breadth-first search (exponential)."""
        seen = {self.identity: 0}
        frontier = deque([self.identity])
        while frontier:
            w = frontier.popleft()
            d = seen[w]
            if d == max_length:
                continue
            for g in self.generators:
                v = w * g
                if v not in seen:
                    seen[v] = d + 1
                    frontier.append(v)
        return seen

    def coxeter_exponent(self, i, j, bound=12):
        w = self.generators[i] * self.generators[j]
        x = w
        for m in range(1, bound + 1):
            if x == self.identity:
                return m
            x = x * w
        return None


@lru_cache(maxsize=None)
def group(rd: RootDatum) -> AffineWeylGroup:
    return AffineWeylGroup(rd)


def affine_reflection(rd, alpha, r=0):
    return group(rd).reflection(alpha, r)


def length(rd, w):
    return group(rd).length(w)


def length_extended(rd, w):
    return group(rd).length_extended(w)


def longest_element(rd, omit=None):
    return group(rd).longest_element(omit)


def reduced_word(rd, w):
    return group(rd).reduced_word(w)


def translation_element(rd, i):
    return group(rd).translation_element(i)


def extended_dynkin_exponents(rd):
    """Coxeter matrix m_ij of (W_a, S_a) read off the extended Dynkin diagram."""
    rd_l = rd.rank
    A = rd.cartan_matrix
    # extended Cartan entries with node 0 = -highest root
    h = rd.highest_root
    hv = rd.highest_coroot

    def a(i, j):
        if i == j:
            return 2
        if i == 0:
            return -sum(hv[k] * A[k][j - 1] for k in range(rd_l))
        if j == 0:
            return -sum(A[i - 1][k] * h[k] for k in range(rd_l))
        return A[i - 1][j - 1]

    table = {0: 2, 1: 3, 2: 4, 3: 6}
    m = {}
    for i in range(rd_l + 1):
        for j in range(rd_l + 1):
            if i == j:
                m[i, j] = 1
            else:
                prod = a(i, j) * a(j, i)
                # A_1^(1): both off-diagonal entries are -2, infinite order
                m[i, j] = None if prod >= 4 else table[prod]
    return m


__all__ = [
    "AffineWeylElement",
    "AffineWeylGroup",
    "group",
    "affine_reflection",
    "length",
    "length_extended",
    "longest_element",
    "reduced_word",
    "translation_element",
    "cominuscule_index",
    "extended_dynkin_exponents",
]
