"""Exact integer and rational matrix helpers.

Matrices are plain lists of lists of Python ints (arbitrary precision), row
major.  Everything here is small (at most 24x24), so clarity wins over
asymptotics.
"""

from fractions import Fraction
from math import gcd


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def copy(M):
    return [row[:] for row in M]


def transpose(M):
    return [list(col) for col in zip(*M)]


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    assert len(A[0]) == k, "dimension mismatch"
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(M, v):
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def vec_mat(v, M):
    return [sum(v[i] * M[i][j] for i in range(len(v))) for j in range(len(M[0]))]


def mat_neg(M):
    return [[-x for x in row] for row in M]


def mat_eq(A, B):
    return A == B


def is_symmetric(M):
    n = len(M)
    return all(len(row) == n for row in M) and all(
        M[i][j] == M[j][i] for i in range(n) for j in range(n)
    )


def det_bareiss(M):
    """Determinant by fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = copy(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def hnf_transform(M):
    """Row-style Hermite reduction with transform: (H, U) with U*M = H and
    U unimodular.  Pivot rows come first, zero rows last.  Off-pivot entries
    are reduced with nearest-integer quotients, which keeps coefficients
    small (floor quotients let entries snowball on dense matrices)."""
    A = copy(M)
    rows = len(A)
    cols = len(A[0]) if rows else 0
    U = identity(rows)
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        while True:
            piv = None
            best = None
            for i in range(r, rows):
                v = abs(A[i][c])
                if v and (best is None or v < best):
                    best = v
                    piv = i
            if piv is None:
                break
            if piv != r:
                A[r], A[piv] = A[piv], A[r]
                U[r], U[piv] = U[piv], U[r]
            a = A[r][c]
            done = True
            for i in range(r + 1, rows):
                if A[i][c]:
                    q = round(A[i][c] / a)
                    if q:
                        A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                        U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        a = A[r][c]
        for i in range(r):
            q = A[i][c] // a
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return A, U


def _is_diagonal(A):
    return all(
        A[i][j] == 0 for i in range(len(A)) for j in range(len(A[0])) if i != j
    )


def _ext_gcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def smith_normal_form(M):
    """Return (D, U, V) with U*M*V = D, D diagonal with d1 | d2 | ..., and
    U, V unimodular.

    Diagonalizes by alternating row Hermite reductions of the matrix and its
    transpose (converges in a few passes with small entries), then repairs
    the divisibility chain with closed-form 2x2 transforms on diagonal
    pairs.  Single-stage euclidean pivoting is avoided on purpose: its
    fill-in doubles the digit count of the remaining block at every stage.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    A = copy(M)
    U = identity(rows)
    V = identity(cols)
    while not _is_diagonal(A):
        H, T = hnf_transform(A)
        A = H
        U = mat_mul(T, U)
        if _is_diagonal(A):
            break
        Ht, T = hnf_transform(transpose(A))
        A = transpose(Ht)
        V = mat_mul(V, transpose(T))
    n = min(rows, cols)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = A[i][i], A[j][j]
            if a == 0 and b != 0:
                A[i][i], A[j][j] = b, 0
                U[i], U[j] = U[j], U[i]
                for row in V:
                    row[i], row[j] = row[j], row[i]
                continue
            if b == 0 or b % a == 0:
                continue
            g, x, y = _ext_gcd(a, b)
            # row_i += row_j, then mix columns (i, j) by [[x, -b/g],
            # [y, a/g]], then row_j -= (y*b/g)*row_i: diag(a, b) becomes
            # diag(g, a*b/g) with both transforms unimodular
            U[i] = [p + q for p, q in zip(U[i], U[j])]
            for row in V:
                vi, vj = row[i], row[j]
                row[i] = x * vi + y * vj
                row[j] = -(b // g) * vi + (a // g) * vj
            q = y * b // g
            U[j] = [p - q * s for p, s in zip(U[j], U[i])]
            A[i][i] = g
            A[j][j] = a * b // g
    for i in range(n):
        if A[i][i] < 0:
            A[i] = [-x for x in A[i]]
            U[i] = [-x for x in U[i]]
    D = zeros(rows, cols)
    for i in range(n):
        D[i][i] = A[i][i]
    return D, U, V


def snf_diagonal(M):
    """Nonzero invariant factors of M as a list."""
    D, _, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i] != 0]


def mat_rank(M):
    return len(snf_diagonal(M))


def solve_rational(A, b):
    """Solve x * A = b exactly over Q for a row vector x, A square invertible.

    Returns a list of Fractions, or None if singular.
    """
    # transpose so we solve A^T y = b^T in the usual column convention
    n = len(A)
    M = [[Fraction(A[j][i]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if M[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def invert_rational(A):
    """Exact inverse of a square integer (or Fraction) matrix, as Fractions.

    Integer input goes through fraction-free Gauss-Jordan (Bareiss-style
    exact divisions, entries stay minor-sized); Fraction input is cleared to
    a common denominator first.
    """
    n = len(A)
    scale = 1
    if any(isinstance(x, Fraction) for row in A for x in row):
        for row in A:
            for x in row:
                d = Fraction(x).denominator
                scale = scale * d // gcd(scale, d)
        A = [[int(Fraction(x) * scale) for x in row] for row in A]
    M = [[int(A[i][j]) for j in range(n)] + [int(i == j) for j in range(n)]
         for i in range(n)]
    prev = 1
    for k in range(n):
        piv = None
        for r in range(k, n):
            if M[r][k] != 0:
                piv = r
                break
        if piv is None:
            raise ValueError("matrix is singular")
        M[k], M[piv] = M[piv], M[k]
        p = M[k][k]
        rowk = M[k]
        for i in range(n):
            if i == k:
                continue
            f = M[i][k]
            M[i] = [(p * x - f * y) // prev for x, y in zip(M[i], rowk)]
        prev = p
    return [[Fraction(scale * M[i][n + j], M[i][i]) for j in range(n)]
            for i in range(n)]


def kernel_basis(M):
    """Basis of the left integer kernel {x : x * M = 0}, as rows.

    The returned rows generate the full kernel lattice (saturated by
    construction since they come from a unimodular transform).
    """
    D, U, V = smith_normal_form(M)
    r = len(snf_diagonal(M))
    return [U[i][:] for i in range(r, len(M))]


def hnf_row_style(M):
    """Row-style Hermite normal form (nonzero rows upper triangular, pivots
    positive, entries above pivots reduced).  Used for canonical lattice
    bases."""
    A = [row[:] for row in M if any(row)]
    rows = len(A)
    if rows == 0:
        return []
    cols = len(A[0])
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if A[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        # euclidean clearing below
        while True:
            nz = [i for i in range(r + 1, rows) if A[i][c] != 0]
            if not nz:
                break
            for i in nz:
                q = A[i][c] // A[r][c]
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                if A[i][c] != 0:
                    A[r], A[i] = A[i], A[r]
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == rows:
            break
    return [row for row in A[:r]]
