"""Exact linear algebra over Q on lists of lists."""

from __future__ import annotations

from fractions import Fraction as Q
from typing import List, Sequence, Tuple

from .exact import DimensionError, RankError, bareiss_det

Matrix = List[List[Q]]


def to_matrix(rows) -> Matrix:
    return [[Q(x) for x in r] for r in rows]


def zeros(r: int, c: int) -> Matrix:
    return [[Q(0)] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[Q(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def matmul(a, b) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionError("shape mismatch in matmul")
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(r, c)), Q(0)) for c in bt] for r in a]


def matvec(a, v) -> List[Q]:
    return [sum((x * y for x, y in zip(r, v)), Q(0)) for r in a]


def rref(a) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(map(Q, r)) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def nullspace(a, ncols: int = None) -> Matrix:
    """Basis of {x : a x = 0}."""
    if not a:
        return identity(ncols or 0)
    r, piv = rref(a)
    n = len(a[0])
    free = [c for c in range(n) if c not in piv]
    out = []
    for f in free:
        v = [Q(0)] * n
        v[f] = Q(1)
        for i, p in enumerate(piv):
            v[p] = -r[i][f]
        out.append(v)
    return out


def solve(a, b) -> List[Q]:
    """Solve a x = b for square invertible ``a``."""
    n = len(a)
    aug = [list(map(Q, r)) + [Q(bi)] for r, bi in zip(a, b)]
    red, piv = rref(aug)
    if piv != list(range(n)):
        raise RankError("singular system")
    return [red[i][n] for i in range(n)]


def solve_many(a, bs) -> List[List[Q]]:
    """Solve a x = b for each column vector in ``bs`` at once."""
    n = len(a)
    k = len(bs)
    aug = [list(map(Q, a[i])) + [Q(b[i]) for b in bs] for i in range(n)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise RankError("singular system")
    return [[red[i][n + j] for i in range(n)] for j in range(k)]


def inverse(a) -> Matrix:
    n = len(a)
    cols = solve_many(a, identity(n))
    return transpose(cols)


def det(a) -> Q:
    return Q(bareiss_det([list(map(Q, r)) for r in a]))


def independent_rows(vectors: Sequence[Sequence]) -> List[int]:
    """Indices of a greedy maximal independent subset, in order."""
    if not vectors:
        return []
    _, piv = rref(transpose(vectors))
    return piv
