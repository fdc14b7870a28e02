"""Small exact linear algebra over Q with ``Fraction`` entries.

Matrices are lists of rows.  Sizes here never exceed a few dozen, so plain
Gaussian elimination is fast enough and keeps everything exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list


def to_fraction_matrix(M: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in M]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[Fraction(0)] * (n if m is None else m) for _ in range(n)]


def transpose(M: Matrix) -> Matrix:
    return [list(col) for col in zip(*M)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in Bt] for row in A]


def mat_vec(A: Matrix, v: Sequence) -> list:
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A]


def det(M: Matrix) -> Fraction:
    A = [list(map(Fraction, row)) for row in M]
    n = len(A)
    out = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            out = -out
        out *= A[c][c]
        inv = 1 / A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] * inv
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return out


def inverse(M: Matrix) -> Matrix:
    n = len(M)
    A = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def rref(M: Matrix) -> tuple:
    """Reduced row echelon form and the pivot columns."""
    A = [list(map(Fraction, row)) for row in M]
    rows = len(A)
    cols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def nullspace(M: Matrix, ncols: int | None = None) -> list:
    """A basis of ``{v : M v = 0}``."""
    if not M:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    A, pivots = rref(M)
    n = len(A[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -A[i][f]
        basis.append(v)
    return basis


def rank(M: Matrix) -> int:
    return len(rref(M)[1]) if M else 0


def solve(A: Matrix, b: Sequence) -> list:
    """The unique solution of ``A x = b`` for square invertible ``A``."""
    return mat_vec(inverse(A), b)


def gram_restrict(G: Matrix, basis: list) -> Matrix:
    """Gram matrix of the bilinear form ``G`` on the span of ``basis`` vectors."""
    Gb = [mat_vec(G, v) for v in basis]
    return [[sum((x * y for x, y in zip(u, gv)), Fraction(0)) for gv in Gb] for u in basis]


def diagonalize_symmetric(G: Matrix) -> list:
    """Diagonal entries of a form congruent to the symmetric matrix ``G``.

    Zero entries mark the radical.  Uses symmetric elimination, with the
    ``e_k + e_j`` trick when the remaining diagonal vanishes.
    """
    A = [list(map(Fraction, row)) for row in G]
    n = len(A)
    for i in range(n):
        for j in range(n):
            if A[i][j] != A[j][i]:
                raise ValueError("matrix is not symmetric")
    out = []
    k = 0
    while k < n:
        if A[k][k] == 0:
            j = next((j for j in range(k + 1, n) if A[j][j] != 0), None)
            if j is not None:
                A[k], A[j] = A[j], A[k]
                for row in A:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if A[k][j] != 0), None)
                if j is None:
                    out.append(Fraction(0))
                    k += 1
                    continue
                # replace e_k by e_k + e_j
                A[k] = [x + y for x, y in zip(A[k], A[j])]
                for row in A:
                    row[k] += row[j]
        p = A[k][k]
        # row operations clear column k; the matching column operations only
        # touch row k, which is discarded, so the trailing block stays symmetric
        for r in range(k + 1, n):
            f = A[r][k] / p
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[k])]
        out.append(p)
        k += 1
    return out
