"""Exact linear algebra over Q and Z on plain nested lists.

Matrices are lists of rows.  Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list  # list[list[Fraction | int]]


def to_fractions(a: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in a]


def transpose(a: Sequence[Sequence]) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def rref(a: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    r = to_fractions(a)
    rows = len(r)
    cols = len(r[0]) if rows else 0
    pivots: list[int] = []
    i = 0
    for j in range(cols):
        if i == rows:
            break
        piv = next((t for t in range(i, rows) if r[t][j] != 0), None)
        if piv is None:
            continue
        r[i], r[piv] = r[piv], r[i]
        inv = 1 / r[i][j]
        r[i] = [x * inv for x in r[i]]
        for t in range(rows):
            if t != i and r[t][j] != 0:
                f = r[t][j]
                r[t] = [x - f * y for x, y in zip(r[t], r[i])]
        pivots.append(j)
        i += 1
    return r[:i], pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One exact solution of ``a x = b`` (free variables set to 0), or None."""
    cols = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, piv = rref(aug)
    if piv and piv[-1] == cols:
        return None
    x = [Fraction(0)] * cols
    for row, j in zip(r, piv):
        x[j] = row[cols]
    return x


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    r, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r]


def det(a: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    m = to_fractions(a)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def nullspace(a: Sequence[Sequence], cols: int | None = None) -> Matrix:
    """Rational basis of the right kernel of ``a``."""
    if cols is None:
        cols = len(a[0])
    if not a:
        return [[Fraction(int(i == j)) for j in range(cols)] for i in range(cols)]
    r, piv = rref(a)
    free = [j for j in range(cols) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, p in zip(r, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def primitive(v: Sequence) -> list[int]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints


# -- integer row reduction ----------------------------------------------------

def row_hermite(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Integer row echelon form ``h = u a`` with ``u`` unimodular."""
    h = [[int(x) for x in row] for row in a]
    rows = len(h)
    cols = len(h[0]) if rows else 0
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if h[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(h[i][c]))
            h[r], h[piv] = h[piv], h[r]
            u[r], u[piv] = u[piv], u[r]
            done = True
            for i in range(r + 1, rows):
                if h[i][c]:
                    f = h[i][c] // h[r][c]
                    h[i] = [x - f * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - f * y for x, y in zip(u[i], u[r])]
                    if h[i][c]:
                        done = False
            if done:
                break
        if any(h[i][c] for i in range(r, rows)):
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                f = h[i][c] // h[r][c]
                if f:
                    h[i] = [x - f * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - f * y for x, y in zip(u[i], u[r])]
            r += 1
    return h, u


def integer_kernel(a: Sequence[Sequence[int]], cols: int) -> Matrix:
    """Lattice basis of ``{x in Z^cols : a x = 0}`` (rows of the result)."""
    if not a:
        return [[int(i == j) for j in range(cols)] for i in range(cols)]
    # column operations on a == row operations on a^T
    h, u = row_hermite(transpose(a))
    return [u[i] for i in range(cols) if not any(h[i])]
