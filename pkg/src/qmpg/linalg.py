"""Dense exact linear algebra over any field type (Fraction or Scalar).

Matrices are lists of rows.  Pivoting is always "first nonzero in order",
so every result is deterministic and depends only on the input ordering.
"""

from fractions import Fraction


def _zero_like(x):
    return x - x


def identity(n, one=Fraction(1)):
    zero = _zero_like(one)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(m):
    return [list(r) for r in zip(*m)]


def mat_mul(a, b):
    bt = transpose(b)
    out = []
    for row in a:
        out.append([_dot(row, col) for col in bt])
    return out


def mat_vec(a, v):
    return [_dot(row, v) for row in a]


def _dot(u, v):
    acc = None
    for x, y in zip(u, v):
        if not x or not y:
            continue
        t = x * y
        acc = t if acc is None else acc + t
    if acc is None:
        return _zero_like(u[0]) if u else Fraction(0)
    return acc


def row_basis(rows):
    """Greedy row basis.

    Returns (pivots, relations): ``pivots`` lists the indices of rows that are
    independent of all earlier rows; for every other index i,
    ``relations[i]`` maps pivot indices j to c_j with row_i = sum c_j row_j.
    """
    basis = []          # (pivot column, reduced row, {pivot index: coef})
    pivots = []
    relations = {}
    for i, row in enumerate(rows):
        vec = list(row)
        comb = {}
        for col, brow, bcomb in basis:
            f = vec[col]
            if not f:
                continue
            f = f / brow[col]
            vec = [x - f * y if y else x for x, y in zip(vec, brow)]
            for j, s in bcomb.items():
                comb[j] = comb.get(j, 0) + f * s
        lead = next((c for c, x in enumerate(vec) if x), None)
        if lead is None:
            relations[i] = {j: c for j, c in comb.items() if c}
            continue
        own = {j: -c for j, c in comb.items() if c}
        own[i] = 1
        basis.append((lead, vec, own))
        pivots.append(i)
    return pivots, relations


def rank(m):
    return len(row_basis(m)[0])


def left_kernel(m):
    """Basis of {x : x m = 0}, one vector per dependent row, normalised so the
    coefficient of that row is 1."""
    n = len(m)
    pivots, relations = row_basis(m)
    out = []
    for i in sorted(relations):
        vec = [0] * n
        vec[i] = 1
        for j, c in relations[i].items():
            vec[j] = -c
        out.append(vec)
    return out


def nullspace(m):
    """Basis of {x : m x = 0}."""
    if not m:
        return []
    return left_kernel(transpose(m))


def inverse(m):
    n = len(m)
    one = _one_like(m)
    zero = _zero_like(one)
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if aug[r][c]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[p] = aug[p], aug[c]
        inv = one / aug[c][c]
        aug[c] = [x * inv if x else x for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y if y else x for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def solve_left(m, b):
    """Solve x m = b for a square nonsingular m."""
    inv = inverse(m)
    return [_dot(b, col) for col in transpose(inv)]


def determinant(m):
    n = len(m)
    a = [list(r) for r in m]
    one = _one_like(m)
    det = one
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return _zero_like(one)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det = det * a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y if y else x for x, y in zip(a[r], a[c])]
    return det


def _one_like(m):
    for row in m:
        for x in row:
            return _zero_like(x) + 1
    return Fraction(1)
