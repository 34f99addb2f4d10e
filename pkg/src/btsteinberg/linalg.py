"""Exact row reduction over Q and over prime fields F_l."""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import InvalidInput


class Rationals:
    name = "Q"
    characteristic = 0

    def __call__(self, x):
        return Fraction(x)

    zero = Fraction(0)
    one = Fraction(1)

    def inv(self, x):
        return 1 / x

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


class PrimeField:
    def __init__(self, ell):
        if ell < 2 or any(ell % d == 0 for d in range(2, int(ell**0.5) + 1)):
            raise InvalidInput(f"{ell} is not prime")
        self.characteristic = ell
        self.name = f"F{ell}"
        self.zero = 0
        self.one = 1

    def __call__(self, x):
        x = Fraction(x)
        return x.numerator * pow(x.denominator, -1, self.characteristic) % self.characteristic

    def inv(self, x):
        return pow(x, -1, self.characteristic)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(self.name)


QQ = Rationals()


def GF(ell):
    return PrimeField(ell)


def parse_field(text):
    """'Q' or 'F5' / 'Fl:5' / 'F:5'."""
    t = text.strip()
    if t.upper() == "Q":
        return QQ
    m = re.fullmatch(r"F(?:l)?:?(\d+)", t, flags=re.IGNORECASE)
    if not m:
        raise InvalidInput(f"unknown coefficient ring {text!r}")
    return GF(int(m.group(1)))


def _normalize(K, x):
    if K.characteristic:
        return x % K.characteristic
    return x


def rref(rows, ncols, K=QQ):
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    ell = K.characteristic
    M = [[K(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = K.inv(M[r][c])
        M[r] = [_normalize(K, x * inv) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                if ell:
                    M[i] = [(a - f * b) % ell for a, b in zip(M[i], M[r])]
                else:
                    M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows, ncols, K=QQ):
    return len(rref(rows, ncols, K)[1])


def kernel_basis(rows, ncols, K=QQ):
    """Basis of {x : A x = 0}, one vector per free column, in reduced form.

    Each basis vector has a 1 in its free column and 0 in the other free
    columns, so the basis is unique given the column order.
    """
    R, pivots = rref(rows, ncols, K)
    pset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pset:
            continue
        v = [K.zero] * ncols
        v[f] = K.one
        for row, pc in zip(R, pivots):
            if row[f] != 0:
                v[pc] = _normalize(K, -row[f])
        basis.append(v)
    return basis


def in_row_space(vectors, v, ncols, K=QQ):
    return rank(list(vectors) + [v], ncols, K) == rank(vectors, ncols, K)
