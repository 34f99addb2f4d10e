"""Locally constant functions on the flag variety G/P at finite level.

A level-k flag is a complete flag of free summands of (Z/p^k)^n, stored as
the canonical matrix of its coset M * P(Z/p^k).  A function on G/P(Q_p)
that is constant on the fibres of reduction mod p^k is a function on these
finite sets.  Since G = G(Z_p) P, any g in GL_n(Q) acts on flags through an
Iwasawa re-normalisation back into G(Z_p).
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm

from . import padic
from .building import Building
from .errors import InvalidInput, MarginError, ResourceLimitError
from .linalg import QQ, rank


def iwasawa(g, p):
    """A matrix in GL_n(Z_p) spanning the same flag over Q_p as g."""
    n = len(g)
    out, pivots = [], []
    for j in range(n):
        v = [Fraction(g[r][j]) for r in range(n)]
        for r, w in zip(pivots, out):
            f = v[r]
            if f:
                v = [a - f * b for a, b in zip(v, w)]
        m = min(padic.vp(x, p) for x in v)
        if m == padic.INF:
            raise InvalidInput("singular matrix")
        s = Fraction(p) ** (-m)
        v = [x * s for x in v]
        piv = next(r for r in range(n) if padic.vp(v[r], p) == 0)
        u = 1 / v[piv]
        v = [x * u for x in v]
        pivots.append(piv)
        out.append(v)
    return tuple(tuple(out[c][r] for c in range(n)) for r in range(n))


def _int_det(A):
    n = len(A)
    if n == 1:
        return A[0][0]
    return sum((-1) ** j * A[0][j] * _int_det([row[:j] + row[j + 1 :] for row in A[1:]]) for j in range(n))


def integral_form(g):
    """An integer matrix spanning the same flags as g (clears denominators)."""
    d = lcm(*(Fraction(x).denominator for row in g for x in row))
    return [[int(Fraction(x) * d) for x in row] for row in g]


def iwasawa_mod(A, p, k, loss=None):
    """Same as ``iwasawa`` for an integer matrix, computed mod p^k.

    Working mod p^(k + v_p(det A)) is enough: scaling column j by p^-m
    costs m digits, and the m's add up to v_p(det A).  ``loss`` may pass
    v_p(det A) in when the caller already knows it.
    """
    n = len(A)
    if loss is None:
        det = _int_det(A)
        if det == 0:
            raise InvalidInput("singular matrix")
        loss = padic.vp(det, p)
    N = k + loss
    q = p**N
    out, pivots = [], []
    for j in range(n):
        v = [A[r][j] % q for r in range(n)]
        for r, w in zip(pivots, out):
            f = v[r]
            if f:
                v = [(a - f * b) % q for a, b in zip(v, w)]
        m = min(padic.vp(x, p) if x else N for x in v)
        v = [x // p**m for x in v]
        piv = next(r for r in range(n) if v[r] % p)
        inv = pow(v[piv], -1, q)
        v = [x * inv % q for x in v]
        pivots.append(piv)
        out.append(v)
    r = p**k
    return tuple(tuple(out[c][i] % r for c in range(n)) for i in range(n))


@dataclass
class FlagFunction:
    space: "FlagSpace"
    values: dict = field(default_factory=dict)

    def __call__(self, key):
        return self.values.get(key, 0)

    def __add__(self, other):
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = out.get(k, 0) + v
        return FlagFunction(self.space, {k: v for k, v in out.items() if v != 0})

    def __neg__(self):
        return FlagFunction(self.space, {k: -v for k, v in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return FlagFunction(self.space, {k: c * v for k, v in self.values.items() if c * v != 0})

    def __eq__(self, other):
        return isinstance(other, FlagFunction) and self.values == other.values

    @property
    def support(self):
        return set(self.values)

    def vector(self):
        return [self.values.get(k, 0) for k in self.space.flags]


MAX_FLAGS_ENV = "BTSTEINBERG_MAX_FLAGS"
DEFAULT_MAX_FLAGS = 200_000


def max_flags():
    return int(os.environ.get(MAX_FLAGS_ENV, DEFAULT_MAX_FLAGS))


def flag_count(n, p, k):
    """|GL_n(Z/p^k)| / |upper triangular|: [n]_p! * p^((k-1) n(n-1)/2)."""
    count = 1
    for j in range(1, n + 1):
        count *= (p**j - 1) // (p - 1)
    return count * p ** ((k - 1) * n * (n - 1) // 2)


class FlagSpace:
    """All complete flags over Z/p^k, enumerated in sorted canonical order."""

    def __init__(self, n, p, k):
        if k < 1:
            raise InvalidInput("level must be at least 1")
        size = flag_count(n, p, k)
        if size > max_flags():
            raise ResourceLimitError(f"{size} flags at level {k} exceed {max_flags()}", bound=max_flags())
        self.n, self.p, self.k = n, p, k
        self.q = p**k
        base = padic.canonical_flag(padic.identity(n), p, k)
        gens = [
            tuple(tuple(int(r == s) + int((r, s) == (a, b)) for s in range(n)) for r in range(n))
            for a in range(n)
            for b in range(n)
            if a != b
        ]
        seen = {base}
        todo = deque([base])
        while todo:
            x = todo.popleft()
            for g in gens:
                y = self.key(padic.matmul(g, x))
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        self.flags = sorted(seen)
        self.index = {f: i for i, f in enumerate(self.flags)}
        self.base = base
        self._partial = {}

    def __len__(self):
        return len(self.flags)

    def key(self, M):
        """Canonical key of a p-integral matrix invertible mod p."""
        return padic.canonical_flag(M, self.p, self.k)

    def key_of(self, g):
        """Level-k key of the flag spanned by an arbitrary invertible rational matrix."""
        return self.key_of_int(integral_form(g))

    def key_of_int(self, A, loss=None):
        return self.key(iwasawa_mod(A, self.p, self.k, loss))

    def reduce(self, key, k):
        return padic.canonical_flag(key, self.p, k)

    def partial_key(self, key, i):
        """Image of a flag in G/P_i: forget the i-dimensional step."""
        hit = self._partial.get((key, i))
        if hit is None:
            hit = self._partial[(key, i)] = self._partial_key(key, i)
        return hit

    def _partial_key(self, key, i):
        n = self.n
        out = []
        for j in range(1, n):
            if j == i:
                continue
            cols = [[key[r][c] for r in range(n)] for c in range(j)]
            out.append(padic.canonical_subspace(cols, self.p, self.k))
        return tuple(out)

    def function(self, values):
        return FlagFunction(self, {k: v for k, v in values.items() if v != 0})

    def indicator(self, keys):
        return FlagFunction(self, {k: 1 for k in keys})

    def orbit(self, start, generators):
        """Orbit of a level-k flag under left multiplication by integral generators."""
        seen = {start}
        todo = deque([start])
        while todo:
            x = todo.popleft()
            for g in generators:
                y = self.key(padic.matmul(g, x))
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen


@lru_cache(maxsize=None)
def flag_space(n, p, k):
    return FlagSpace(n, p, k)


def chi_BP(n, p, k):
    """Indicator of BP/P: flags whose reduction mod p is the standard flag."""
    S = flag_space(n, p, k)
    base1 = padic.canonical_flag(padic.identity(n), p, 1)
    return S.indicator(f for f in S.flags if S.reduce(f, 1) == base1)


def _imul(A, B):
    n = len(B)
    return [[sum(A[i][t] * B[t][j] for t in range(n)) for j in range(len(B[0]))] for i in range(len(A))]


def translate(g, f: FlagFunction, check=True):
    """(g.f)(y) = f(g^{-1} y), with an exact level-(k+1) constancy check."""
    S = f.space
    ginv = integral_form(padic.inverse(g))
    # flags have unit determinant, so every product loses the same digits
    loss = padic.vp(_int_det(ginv), S.p)
    vals = {}
    for y in S.flags:
        v = f(S.key_of_int(_imul(ginv, y), loss))
        if v:
            vals[y] = v
    out = S.function(vals)
    if check:
        S1 = flag_space(S.n, S.p, S.k + 1)
        for y in S1.flags:
            direct = f(S.key_of_int(_imul(ginv, y), loss))
            if direct != out(S1.reduce(y, S.k)):
                raise MarginError(f"translate needs level {S.k + 1}", required=S.k + 1)
    return out


def iwahori_generators_mod(n, p):
    return [tuple(tuple(int(x) for x in r) for r in g) for g in Building(n, p).iwahori_generators()]


def bruhat_orbit(S: FlagSpace, g):
    """Indicator of B g P / P at level k (B-orbits are unions of level-1 fibres)."""
    return S.indicator(S.orbit(S.key_of(g), iwahori_generators_mod(S.n, S.p)))


def theta(phi, ball, k, check=True):
    """Theta(phi) = sum over pointed chambers of phi(c, m) * g_{c,m} chi_BP."""
    B = ball.building
    S = flag_space(B.n, B.p, k)
    base = chi_BP(B.n, B.p, k)
    out = S.function({})
    for (c, m), v in sorted(phi.values.items()):
        g = padic.matmul(padic.mat(ball.reps[c]), B.omega[m])
        try:
            out = out + v * translate(g, base, check)
        except MarginError:
            # margin rule: distance d needs level d + 1
            need = max(k + 1, 1 + max(ball.distances[d] for d, _ in phi.values))
            raise MarginError(f"support of phi needs flag level {need}", required=need) from None
    return out


def is_parabolic_constant(f: FlagFunction, j):
    """Is f pulled back from G/P_j (constant on fibres forgetting step j)?"""
    S = f.space
    seen = {}
    for y in S.flags:
        pk = S.partial_key(y, j)
        v = f(y)
        if seen.setdefault(pk, v) != v:
            return False
    return True


def parabolic_fibre_vectors(S: FlagSpace, j):
    groups = {}
    for idx, y in enumerate(S.flags):
        groups.setdefault(S.partial_key(y, j), []).append(idx)
    rows = []
    for members in groups.values():
        r = [0] * len(S)
        for idx in members:
            r[idx] = 1
        rows.append(r)
    return rows


def parabolic_span_rows(S: FlagSpace):
    rows = []
    for j in range(1, S.n):
        rows.extend(parabolic_fibre_vectors(S, j))
    return rows


def in_parabolic_span(f: FlagFunction, K=QQ):
    S = f.space
    rows = parabolic_span_rows(S)
    return rank(rows + [f.vector()], len(S), K) == rank(rows, len(S), K)


def steinberg_dimension(n, p, k=1, K=QQ):
    S = flag_space(n, p, k)
    return len(S) - rank(parabolic_span_rows(S), len(S), K)


def steinberg_dimension_level1(n, p):
    if n not in (2, 3) or p not in (2, 3):
        raise InvalidInput("supported range is n, p in {2, 3}")
    return steinberg_dimension(n, p, 1)


def parahoric_cell(n, p, k, i):
    """Indicator of B_i P / P, the orbit of the base flag under B and s_i (i >= 1)."""
    if not 1 <= i <= n - 1:
        raise InvalidInput(f"parahoric label {i} must lie in 1..{n - 1}")
    S = flag_space(n, p, k)
    B = Building(n, p)
    gens = iwahori_generators_mod(n, p) + [tuple(tuple(int(x) for x in r) for r in B.sdot[i])]
    return S.indicator(S.orbit(S.base, gens))


def verify_partition_BiP(n, p, k, i, detail=False):
    """B_i P = disjoint union of b B P over b in B_i / B."""
    S = flag_space(n, p, k)
    B = Building(n, p)
    base = chi_BP(n, p, k)
    reps = [B.identity] + [padic.matmul(B.u(i, a), B.sdot[i]) for a in range(p)]
    parts = [translate(b, base, check=False) for b in reps]
    disjoint = all(not (parts[a].support & parts[b].support) for a in range(len(parts)) for b in range(a))
    total = S.function({})
    for f in parts:
        total = total + f
    covers = total == parahoric_cell(n, p, k, i)
    ok = disjoint and covers
    if detail:
        return {"disjoint": disjoint, "covers": covers, "pieces": [len(f.support) for f in parts], "ok": ok}
    return ok


def verify_lemma_bwp(n, p, k, g, word, detail=False, literal=False, check=True):
    """Telescoping identity for g (chi_BP - (-1)^{l(w)} chi_{BwP}) in sum_j C(G/P_j).

    ``word`` is a reduced word in the finite simple reflections 1..n-1.  The
    k-th summand g chi_{B u_1..u_{k-1} P} + g chi_{B u_1..u_k P} must be
    pulled back from G/P_{u_k}.  With ``literal=True`` the cells are
    B (g u_1..u_k) P instead, which matches the translate reading when g is
    monomial.
    """
    S = flag_space(n, p, k)
    B = Building(n, p)
    if any(not 1 <= s <= n - 1 for s in word):
        raise InvalidInput("finite Weyl words use letters 1..n-1")
    prefixes = [B.identity]
    for s in word:
        prefixes.append(padic.matmul(prefixes[-1], B.sdot[s]))
    if literal:
        cells = [bruhat_orbit(S, padic.matmul(g, x)) for x in prefixes]
    else:
        cells = [translate(g, bruhat_orbit(S, x), check) for x in prefixes]
    d = len(word)
    lhs = cells[0] - ((-1) ** d) * cells[d]
    rhs = S.function({})
    summands_ok = True
    for j in range(1, d + 1):
        summand = cells[j - 1] + cells[j]
        rhs = rhs + ((-1) ** (j - 1)) * summand
        if not is_parabolic_constant(summand, word[j - 1]):
            summands_ok = False
    ok = lhs == rhs and summands_ok
    if detail:
        return {"identity": lhs == rhs, "summands_constant": summands_ok, "ok": ok}
    return ok


def theta_image_rank(ball, k, K=QQ):
    """How much of the level-j functions (j <= k) theta reaches from the ball.

    Rows are theta of every pointed-chamber indicator.  For each j the entry
    is dim(image meet level-j pullbacks) against dim(level j); surjectivity
    is reported, not assumed.
    """
    from .harmonic import IwahoriFunction

    if k < ball.radius + 1:
        raise MarginError(f"a radius-{ball.radius} ball needs flag level {ball.radius + 1}", required=ball.radius + 1)
    B = ball.building
    S = flag_space(B.n, B.p, k)
    N = len(S)
    rows = []
    for c in range(len(ball)):
        for m in range(B.n):
            rows.append(theta(IwahoriFunction({(c, m): 1}), ball, k).vector())
    r = rank(rows, N, K)
    levels = {}
    for j in range(1, k + 1):
        fibres = {}
        for idx, y in enumerate(S.flags):
            fibres.setdefault(S.reduce(y, j), []).append(idx)
        pulls = [[int(t in members) for t in range(N)] for members in map(set, fibres.values())]
        both = rank(rows + pulls, N, K)
        levels[j] = {"covered": r + len(pulls) - both, "dimension": len(pulls)}
    return {"rank": r, "level_dimension": N, "levels": levels, "surjective": r == N}
