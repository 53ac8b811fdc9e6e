"""Small dense linear algebra over a pluggable scalar backend.

Everything in this package is at most 35x35, so plain Gaussian elimination on
lists of lists is enough.  The same routines serve both backends: with exact
rationals the pivot test is `!= 0`, with floats it is the backend tolerance
combined with partial pivoting.
"""

from .errors import SingularMatrix


def zeros(rows, cols, field):
    z = field.zero()
    return [[z for _ in range(cols)] for _ in range(rows)]


def identity(n, field):
    out = zeros(n, n, field)
    one = field.one()
    for i in range(n):
        out[i][i] = one
    return out


def transpose(m):
    return [list(col) for col in zip(*m)]


def mat_mul(a, b):
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m, v):
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def mat_scale(m, s):
    return [[x * s for x in row] for row in m]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_eq(a, b, field):
    return all(
        field.eq(x, y) for ra, rb in zip(a, b) for x, y in zip(ra, rb)
    )


def _pivot_row(m, col, start, field):
    """Row index of the best pivot in `col` at or below `start`, or None."""
    if field.exact:
        for r in range(start, len(m)):
            if m[r][col] != 0:
                return r
        return None
    best, best_val = None, field.tol
    for r in range(start, len(m)):
        v = abs(m[r][col])
        if v > best_val:
            best, best_val = r, v
    return best


def rref(matrix, field):
    """Reduced row echelon form (copy) and the list of pivot columns."""
    m = [list(row) for row in matrix]
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = _pivot_row(m, c, r, field)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = field.one() / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for rr in range(rows):
            if rr != r and m[rr][c] != 0:
                f = m[rr][c]
                m[rr] = [x - f * y for x, y in zip(m[rr], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(matrix, field):
    return len(rref(matrix, field)[1])


def det(matrix, field):
    """Determinant by Gaussian elimination with row swaps."""
    m = [list(row) for row in matrix]
    n = len(m)
    sign = 1
    acc = field.one()
    for c in range(n):
        p = _pivot_row(m, c, c, field)
        if p is None:
            return field.zero()
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        acc = acc * m[c][c]
        inv = field.one() / m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return acc if sign > 0 else -acc


def det2(a, b, c, d):
    return a * d - b * c


def det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def submatrix(m, rows, cols):
    return [[m[r][c] for c in cols] for r in rows]


def minor_det(m, rows, cols, field):
    """Determinant of the (rows x cols) submatrix; sizes 0..3 are unrolled."""
    k = len(rows)
    if k == 0:
        return field.one()
    if k == 1:
        return m[rows[0]][cols[0]]
    if k == 2:
        r0, r1 = rows
        c0, c1 = cols
        return det2(m[r0][c0], m[r0][c1], m[r1][c0], m[r1][c1])
    if k == 3:
        return det3(submatrix(m, rows, cols))
    return det(submatrix(m, rows, cols), field)


def invert(matrix, field):
    """Matrix inverse by Gauss-Jordan; raises SingularMatrix."""
    n = len(matrix)
    m = [list(row) + ident_row for row, ident_row in zip(matrix, identity(n, field))]
    for c in range(n):
        p = _pivot_row(m, c, c, field)
        if p is None:
            raise SingularMatrix(f"singular at column {c}")
        m[c], m[p] = m[p], m[c]
        inv = field.one() / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def nullspace(matrix, field):
    """Basis of the kernel of `matrix`, as a list of vectors."""
    if not matrix:
        return []
    red, pivots = rref(matrix, field)
    cols = len(matrix[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero()] * cols
        v[f] = field.one()
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def solve_affine(matrix, rhs, field):
    """All solutions of `matrix x = rhs` as (particular, nullspace basis).

    Raises SingularMatrix if the system is inconsistent.
    """
    if not matrix:
        return [], []
    cols = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug, field)
    for r in range(len(red)):
        if all(field.is_zero(x) for x in red[r][:cols]) and not field.is_zero(red[r][cols]):
            raise SingularMatrix("inconsistent linear system")
    particular = [field.zero()] * cols
    for r, p in enumerate(pivots):
        if p < cols:
            particular[p] = red[r][cols]
    return particular, nullspace(matrix, field)


def solve(matrix, rhs, field):
    """Unique solution of a square nonsingular system."""
    particular, kernel = solve_affine(matrix, rhs, field)
    if kernel:
        raise SingularMatrix("system is underdetermined")
    return particular


def is_positive_definite(matrix, field):
    """Sylvester's criterion on the leading principal minors."""
    n = len(matrix)
    for k in range(1, n + 1):
        idx = list(range(k))
        d = minor_det(matrix, idx, idx, field)
        if field.exact:
            if d <= 0:
                return False
        elif d <= field.tol:
            return False
    return True
