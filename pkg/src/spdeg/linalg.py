"""Exact linear algebra on list-of-list matrices.

Matrices are plain nested lists.  Generic helpers (mat_mul, transpose, ...)
work over any commutative ring of entries (Fraction, float, ExpPoly); the
elimination routines require Fraction entries.  Nothing here touches floats
except :func:`signature_float`.
"""

from __future__ import annotations

import math
from fractions import Fraction


def zeros(n, m=None):
    m = n if m is None else m
    return [[Fraction(0)] * m for _ in range(n)]


def identity(n):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            s = ai[0] * b[0][j]
            for l in range(1, k):
                s = s + ai[l] * b[l][j]
            row.append(s)
        out.append(row)
    return out


def mat_vec(a, v):
    return [sum_entries([a[i][j] * v[j] for j in range(len(v))]) for i in range(len(a))]


def sum_entries(xs):
    it = iter(xs)
    s = next(it)
    for x in it:
        s = s + x
    return s


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a):
    return [[c * x for x in row] for row in a]


def mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


# -- Gaussian elimination over the rationals --------------------------------


def rref(m):
    """Reduced row echelon form over Fraction. Returns (rref, pivot_columns)."""
    a = [[Fraction(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if a[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m) -> int:
    return len(rref(m)[1])


def nullspace(m):
    """Basis of the exact kernel, one vector per free column of the RREF."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if rows == 0:
        return [[Fraction(1) if i == j else Fraction(0) for i in range(cols)] for j in range(cols)]
    r, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][fc]
        basis.append(v)
    return basis


def rank_bareiss(m) -> int:
    """Rank by fraction-free (Bareiss) elimination on an integer scaling of m.

    Independent of :func:`rref"`; used as an oracle for kernel dimensions.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if rows == 0 or cols == 0:
        return 0
    scale = 1
    for row in m:
        for x in row:
            scale = math.lcm(scale, Fraction(x).denominator)
    a = [[int(Fraction(x) * scale) for x in row] for row in m]
    r = 0
    prev = 1
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if a[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == rows:
            break
    return r


def solve(a, b):
    """Solve a x = b exactly (a square nonsingular, b a vector)."""
    n = len(a)
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular system")
    return [r[i][n] for i in range(n)]


def inverse(a):
    """Exact inverse over Fraction; raises ValueError when singular."""
    n = len(a)
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(1) if j == i else Fraction(0) for j in range(n)] for i in range(n)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in r]


def det(m):
    """Exact determinant by fraction elimination."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    out = Fraction(1)
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if a[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            out = -out
        out *= a[c][c]
        inv = Fraction(1) / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return out


# -- signatures of symmetric forms -------------------------------------------


def signature_exact(m):
    """Signature (n_plus, n_minus, n_zero) by exact congruence diagonalization.

    The input must be symmetric with Fraction entries.  Pivoting: a nonzero
    diagonal entry is used when available; otherwise a nonzero off-diagonal
    pair (i,j) is folded onto the diagonal by the congruence row_i += row_j,
    col_i += col_j (valid away from characteristic 2).
    """
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    np_, nm, nz = 0, 0, 0
    live = list(range(n))
    while live:
        pivot = None
        for i in live:
            if a[i][i] != 0:
                pivot = i
                break
        if pivot is None:
            pair = None
            for i in live:
                for j in live:
                    if i < j and a[i][j] != 0:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                nz += len(live)
                break
            i, j = pair
            for k in range(n):
                a[i][k] = a[i][k] + a[j][k]
            for k in range(n):
                a[k][i] = a[k][i] + a[k][j]
            pivot = i
        p = a[pivot][pivot]
        if p > 0:
            np_ += 1
        else:
            nm += 1
        live.remove(pivot)
        for i in live:
            if a[i][pivot] != 0:
                f = a[i][pivot] / p
                for k in range(n):
                    a[i][k] = a[i][k] - f * a[pivot][k]
        for i in live:
            if a[pivot][i] != 0:
                f = a[pivot][i] / p
                for k in range(n):
                    a[k][i] = a[k][i] - f * a[k][pivot]
    return np_, nm, nz


def signature_float(m, tol: float = 1e-9):
    """Signature by eigenvalue sign counts; the binary64 cross-check path."""
    import numpy as np

    w = np.linalg.eigvalsh(np.array([[float(x) for x in row] for row in m]))
    np_ = int((w > tol).sum())
    nm = int((w < -tol).sum())
    return np_, nm, len(w) - np_ - nm
