"""Exact linear algebra over the integers and rationals.

All routines operate on immutable tuple-of-tuples matrices whose entries
are ints or Fractions.  Nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction as Q
from math import gcd, isqrt
from typing import Iterable, Sequence

Vec = tuple[Q, ...]
Mat = tuple[tuple[Q, ...], ...]


def freeze(rows: Iterable[Iterable]) -> Mat:
    return tuple(tuple(x for x in row) for row in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m))


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(m: Mat, v: Sequence) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_dot(u: Sequence, v: Sequence) -> Q:
    return sum(x * y for x, y in zip(u, v))


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def det(m: Mat):
    """Exact determinant by fraction-free style Gaussian elimination."""
    n = len(m)
    a = [[Q(x) for x in row] for row in m]
    sign = 1
    result = Q(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return 0 if all(isinstance(x, int) for row in m for x in row) else Q(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            factor = a[r][col] / p
            if factor:
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    result *= sign
    if result.denominator == 1 and all(
        isinstance(x, int) for row in m for x in row
    ):
        return int(result)
    return result


def inverse(m: Mat) -> Mat:
    """Exact inverse via Gauss-Jordan; raises ValueError on singular input."""
    n = len(m)
    a = [[Q(x) for x in row] + [Q(1 if i == j else 0) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return freeze(row[n:] for row in a)


def solve(m: Mat, rhs: Sequence) -> Vec | None:
    """Solve m x = rhs exactly; None if inconsistent or underdetermined."""
    n = len(m)
    cols = len(m[0])
    a = [[Q(x) for x in row] + [Q(rhs[i])] for i, row in enumerate(m)]
    piv_cols = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, n) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if a[i][cols] != 0:
            return None
    if len(piv_cols) < cols:
        return None
    x = [Q(0)] * cols
    for i, c in enumerate(piv_cols):
        x[c] = a[i][cols]
    return tuple(x)


def rank(m: Mat) -> int:
    if not m:
        return 0
    n = len(m)
    cols = len(m[0])
    a = [[Q(x) for x in row] for row in m]
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, n) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][c]
        for i in range(r + 1, n):
            if a[i][c]:
                f = a[i][c] / p
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == n:
            break
    return r


def ldl(gram: Mat) -> tuple[Vec, Mat]:
    """LDL^T data of a symmetric matrix: pivots d and unit upper factor u.

    The quadratic form becomes sum_i d[i] * (x_i + sum_{j>i} u[i][j] x_j)^2.
    Raises ArithmeticError when a zero pivot blocks the decomposition.
    """
    n = len(gram)
    a = [[Q(x) for x in row] for row in gram]
    d = []
    for i in range(n):
        p = a[i][i]
        if p == 0:
            raise ArithmeticError("zero pivot in LDL decomposition")
        d.append(p)
        for j in range(i + 1, n):
            a[i][j] = a[i][j] / p
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j][k] -= p * a[i][j] * a[i][k]
    u = freeze(
        [Q(1) if j == i else (a[i][j] if j > i else Q(0)) for j in range(n)]
        for i in range(n)
    )
    return tuple(d), u


def is_positive_definite(gram: Mat) -> bool:
    try:
        pivots, _ = ldl(gram)
    except ArithmeticError:
        return False
    return all(p > 0 for p in pivots)


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Diagonal of the Smith normal form of an integer matrix.

    Returns the nonzero invariant factors, nonnegative, each dividing the
    next.  For a nondegenerate square matrix the product equals |det|.
    """
    a = [[int(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    s = 0
    while s < min(rows, cols):
        # locate a minimal nonzero entry in the trailing block
        best = None
        for i in range(s, rows):
            for j in range(s, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[s], a[i] = a[i], a[s]
        for row in a:
            row[s], row[j] = row[j], row[s]
        while True:
            changed = False
            for i in range(s + 1, rows):
                if a[i][s]:
                    q = a[i][s] // a[s][s]
                    a[i] = [x - q * y for x, y in zip(a[i], a[s])]
                    if a[i][s]:
                        a[s], a[i] = a[i], a[s]
                    changed = True
            for j in range(s + 1, cols):
                if a[s][j]:
                    q = a[s][j] // a[s][s]
                    for row in a:
                        row[j] -= q * row[s]
                    if a[s][j]:
                        for row in a:
                            row[s], row[j] = row[j], row[s]
                    changed = True
            if not changed:
                break
        diag.append(abs(a[s][s]))
        s += 1
    # enforce the divisibility chain; diag(a, b) and diag(gcd, lcm) are equivalent
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            if diag[i + 1] % diag[i]:
                g = gcd(diag[i], diag[i + 1])
                diag[i], diag[i + 1] = g, diag[i] * diag[i + 1] // g
                changed = True
    return tuple(diag)


def short_vectors_of_form(gram: Mat, max_norm) -> list[tuple[int, ...]]:
    """All nonzero integer vectors with v^T gram v <= max_norm, both signs.

    Uses the LDL pivots for exact branch-and-prune enumeration; requires a
    positive definite form.  Output is sorted lexicographically.
    """
    n = len(gram)
    pivots, u = ldl(gram)
    if any(p <= 0 for p in pivots):
        raise ArithmeticError("form is not positive definite")
    out: list[tuple[int, ...]] = []
    coords = [0] * n

    def descend(i: int, remaining) -> None:
        if i < 0:
            v = tuple(coords)
            if any(v):
                out.append(v)
            return
        center = sum(u[i][j] * coords[j] for j in range(i + 1, n))
        budget = remaining / pivots[i]
        # conservative integer radius, then exact filtering
        radius = isqrt(int(budget)) + 1
        base = int(center)
        for x in range(-base - radius - 2, -base + radius + 3):
            contribution = pivots[i] * (x + center) ** 2
            if contribution <= remaining:
                coords[i] = x
                descend(i - 1, remaining - contribution)
        coords[i] = 0

    descend(n - 1, Q(max_norm))
    out.sort()
    return out
