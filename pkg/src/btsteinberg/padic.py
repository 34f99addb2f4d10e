"""Exact p-adic bookkeeping on rational matrices.

Everything here works over Q with the p-adic valuation; a rational whose
denominator is prime to p is treated as an element of Z_p.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import InvalidInput

INF = float("inf")


def vp(x, p):
    """p-adic valuation of a rational (inf for zero)."""
    if x == 0:
        return INF
    if isinstance(x, int):
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v
    x = Fraction(x)
    v = 0
    a, b = x.numerator, x.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def reduce_mod(x, p, k):
    """Integer in [0, p^k) congruent to the p-integral rational x."""
    m = p**k
    if isinstance(x, int):
        return x % m
    x = Fraction(x)
    if x.denominator % p == 0:
        raise InvalidInput(f"{x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, m) % m


# -- matrices (tuple of row tuples) -----------------------------------------


def mat(rows):
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


def identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def matmul(A, B):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))) for i in range(len(A))
    )


def transpose(A):
    return tuple(zip(*A))


def det(A):
    M = [list(map(Fraction, r)) for r in A]
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return d


def inverse(A):
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise InvalidInput("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return tuple(tuple(row[n:]) for row in M)


def scale(A, s):
    return tuple(tuple(x * s for x in r) for r in A)


def min_valuation(A, p):
    return min(vp(x, p) for r in A for x in r)


def primitive(A, p):
    """p^{-m} A with m the minimal entry valuation: p-integral with a unit entry."""
    m = min_valuation(A, p)
    return scale(A, Fraction(p) ** (-m))


def integral_scaling(A):
    """A scalar multiple of A with integer entries (projective class unchanged)."""
    d = lcm(*(Fraction(x).denominator for r in A for x in r))
    return tuple(tuple(int(Fraction(x) * d) for x in r) for r in A)


# -- lattices ----------------------------------------------------------------


def lattice_hnf(A, p):
    """Hermite form of the Z_p-lattice spanned by the columns of A.

    Returns an upper triangular integer matrix with diagonal p^{e_r} and
    entries right of the diagonal in row r reduced into [0, p^{e_r}); unique
    per lattice.  A must be invertible.
    """
    n = len(A)
    cols = [[Fraction(A[r][c]) for r in range(n)] for c in range(n)]
    for r in range(n - 1, -1, -1):
        best = min(range(r + 1), key=lambda c: (vp(cols[c][r], p), c))
        e = vp(cols[best][r], p)
        if e == INF:
            raise InvalidInput("singular matrix")
        cols[best], cols[r] = cols[r], cols[best]
        u = Fraction(p) ** e / cols[r][r]
        cols[r] = [x * u for x in cols[r]]
        for c in range(r):
            f = cols[c][r] / cols[r][r]
            if f:
                cols[c] = [x - f * y for x, y in zip(cols[c], cols[r])]
    for j in range(n):
        for r in range(j - 1, -1, -1):
            x = cols[j][r]
            e = vp(cols[r][r], p)
            rep = reduce_mod(x, p, e) if e > 0 else 0
            f = (x - rep) / cols[r][r]
            if f:
                cols[j] = [a - f * b for a, b in zip(cols[j], cols[r])]
    H = [[cols[c][r] for c in range(n)] for r in range(n)]
    for row in H:
        for x in row:
            if x.denominator != 1:
                raise InvalidInput("matrix is not p-integral")
    return tuple(tuple(int(x) for x in row) for row in H)


def lattice_class_key(A, p):
    """Canonical Hermite form of the homothety class of the lattice A Z_p^n."""
    H = lattice_hnf(integral_scaling(A), p)
    m = min_valuation(H, p)
    q = p**m
    return tuple(tuple(x // q for x in row) for row in H)


# -- flags over Z/p^k ------------------------------------------------------------


def canonical_flag(M, p, k=1):
    """Canonical representative of M * B(Z/p^k), B upper triangular.

    Column j is reduced against earlier columns at their pivot rows, then
    scaled so its lowest unit entry (the pivot) is 1.  Input entries are
    integers or p-integral rationals; output is a tuple of row tuples of
    integers in [0, p^k).
    """
    q = p**k
    n = len(M)
    cols = [[reduce_mod(M[r][c], p, k) for r in range(n)] for c in range(n)]
    pivots = []
    out = []
    for j in range(n):
        v = cols[j]
        for r, w in zip(pivots, out):
            f = v[r]
            if f:
                v = [(a - f * b) % q for a, b in zip(v, w)]
        piv = next((r for r in range(n - 1, -1, -1) if v[r] % p), None)
        if piv is None:
            raise InvalidInput("matrix is not invertible mod p")
        inv = pow(v[piv], -1, q)
        v = [a * inv % q for a in v]
        pivots.append(piv)
        out.append(v)
    return tuple(tuple(out[c][r] for c in range(n)) for r in range(n))


def canonical_subspace(cols, p, k=1):
    """Canonical basis of the free summand of (Z/p^k)^n spanned by ``cols``.

    Reduced column echelon form with identity at pivot rows, pivots chosen
    top-down; unique per summand.
    """
    q = p**k
    cols = [[x % q for x in c] for c in cols]
    n = len(cols[0]) if cols else 0
    done = []
    rest = cols
    for r in range(n):
        idx = next((i for i, c in enumerate(rest) if c[r] % p), None)
        if idx is None:
            continue
        c = rest.pop(idx)
        inv = pow(c[r], -1, q)
        c = [x * inv % q for x in c]
        done = [[(a - d[r] * b) % q for a, b in zip(d, c)] for d in done]
        rest = [[(a - d[r] * b) % q for a, b in zip(d, c)] for d in rest]
        done.append(c)
    # leftovers have no unit entry; any nonzero one means the span is not free
    if any(any(c) for c in rest):
        raise InvalidInput("columns do not span a free summand")
    return tuple(tuple(c) for c in done)
