"""Gaussian elimination over an arbitrary exact field.

Matrices are lists of lists whose entries support +, -, *, /, == and mix
with Python ints (Fraction and Cyclo both do).  Nothing here is numeric."""

from __future__ import annotations


def _zero_one(rows):
    e = rows[0][0]
    zero = e - e
    return zero, zero + 1


def rref(rows):
    """Reduced row echelon form (in place on a copy); returns (rows, pivots)."""
    rows = [list(r) for r in rows]
    n = len(rows)
    m = len(rows[0]) if n else 0
    pivots = []
    pr = 0
    for pc in range(m):
        piv = next((i for i in range(pr, n) if rows[i][pc] != 0), None)
        if piv is None:
            continue
        rows[pr], rows[piv] = rows[piv], rows[pr]
        pv = rows[pr][pc]
        rows[pr] = [x / pv for x in rows[pr]]
        for i in range(n):
            if i != pr and rows[i][pc] != 0:
                f = rows[i][pc]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[pr])]
        pivots.append(pc)
        pr += 1
        if pr == n:
            break
    return rows, pivots


def rank(rows):
    return len(rref(rows)[1])


def nullspace(rows):
    """Basis of the right kernel, free variables set to one."""
    red, pivots = rref(rows)
    m = len(rows[0])
    zero, one = _zero_one(rows)
    basis = []
    for fc in range(m):
        if fc in pivots:
            continue
        v = [zero] * m
        v[fc] = one
        for k, pc in enumerate(pivots):
            v[pc] = zero - red[k][fc]
        basis.append(v)
    return basis


def solve_columns(B, Y):
    """X with B X = Y for B of full column rank; raises on inconsistency."""
    n = len(B)
    w = len(B[0])
    ny = len(Y[0])
    aug = [list(B[i]) + list(Y[i]) for i in range(n)]
    red, pivots = rref(aug)
    # a pivot landing in the Y block signals inconsistency; fewer than w
    # pivots in the B block signals rank deficiency
    if any(p >= w for p in pivots):
        raise ArithmeticError("inconsistent system")
    if pivots != list(range(w)):
        raise ArithmeticError("matrix does not have full column rank")
    return [red[r][w:] for r in range(w)]


def inverse(rows):
    n = len(rows)
    zero, one = _zero_one(rows)
    ident = [[one if i == j else zero for j in range(n)] for i in range(n)]
    X = solve_columns(rows, ident)
    return X


def det(rows):
    rows = [list(r) for r in rows]
    n = len(rows)
    zero, one = _zero_one(rows)
    sign = one
    acc = one
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return zero
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign = zero - sign
        acc = acc * rows[c][c]
        inv = one / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return sign * acc


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(1, k)),
                 A[i][0] * B[0][j]) for j in range(m)] for i in range(n)]


def hstack(*mats):
    mats = [m for m in mats if m and m[0]]
    n = len(mats[0])
    return [sum((list(m[i]) for m in mats), []) for i in range(n)]


def columns(rows, idx):
    return [[r[j] for j in idx] for r in rows]
