"""Exact integer and rational linear algebra.

Matrices are plain ``list[list]`` of Python ``int`` or ``fractions.Fraction``.
Every routine here is deterministic: the same input always produces the same
output, so the results can be frozen into golden files.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[int]]


def shape(A: Sequence[Sequence]) -> Tuple[int, int]:
    rows = len(A)
    cols = len(A[0]) if rows else 0
    return rows, cols


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def copy(A: Sequence[Sequence]) -> list:
    return [list(row) for row in A]


def transpose(A: Sequence[Sequence], cols: Optional[int] = None) -> list:
    """Transpose; ``cols`` gives the column count when ``A`` has no rows."""
    if not A:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list:
    n, k = shape(A)
    k2, m = shape(B)
    if n and k != k2:
        raise ValueError(f"shape mismatch {n}x{k} @ {k2}x{m}")
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def det(A: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    result = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if M[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            M[c], M[pivot] = M[pivot], M[c]
            result = -result
        p = M[c][c]
        result *= p
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] / p
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return result


def _euclid_clear_column(
    H: Matrix, U: Matrix, row: int, col: int
) -> bool:
    """Row operations making H[row][col] the gcd of the column below ``row``.

    Returns False if the column is zero from ``row`` down.
    """
    m = len(H)
    while True:
        nonzero = [r for r in range(row, m) if H[r][col] != 0]
        if not nonzero:
            return False
        best = min(nonzero, key=lambda r: (abs(H[r][col]), r))
        if best != row:
            H[row], H[best] = H[best], H[row]
            U[row], U[best] = U[best], U[row]
        done = True
        for r in range(row + 1, m):
            if H[r][col]:
                q = H[r][col] // H[row][col]
                H[r] = [a - q * b for a, b in zip(H[r], H[row])]
                U[r] = [a - q * b for a, b in zip(U[r], U[row])]
                if H[r][col]:
                    done = False
        if done:
            break
    if H[row][col] < 0:
        H[row] = [-a for a in H[row]]
        U[row] = [-a for a in U[row]]
    return True


def hermite_normal_form(A: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U @ A == H`` and ``det U == ±1``. ``H`` is in row
    echelon form with positive pivots, and each entry above a pivot lies in
    ``[0, pivot)``. Zero rows are at the bottom.
    """
    m, n = shape(A)
    H = [[int(x) for x in row] for row in A]
    U = identity(m)
    row = 0
    for col in range(n):
        if row >= m:
            break
        if not _euclid_clear_column(H, U, row, col):
            continue
        p = H[row][col]
        for r in range(row):
            q = H[r][col] // p
            if q:
                H[r] = [a - q * b for a, b in zip(H[r], H[row])]
                U[r] = [a - q * b for a, b in zip(U[r], U[row])]
        row += 1
    return H, U


def smith_normal_form(A: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``(S, U, V)`` with ``U @ A @ V == S``.

    ``S`` is diagonal with nonnegative entries ``s_1 | s_2 | ...``; ``U`` and
    ``V`` are unimodular.
    """
    m, n = shape(A)
    S = [[int(x) for x in row] for row in A]
    U = identity(m)
    V = identity(n)

    def swap_cols(M: Matrix, i: int, j: int) -> None:
        for row in M:
            row[i], row[j] = row[j], row[i]

    def add_col(M: Matrix, dst: int, src: int, q: int) -> None:
        for row in M:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
            if not entries:
                return S, U, V
            _, i, j = min(entries)
            if i != t:
                S[t], S[i] = S[i], S[t]
                U[t], U[i] = U[i], U[t]
            if j != t:
                swap_cols(S, t, j)
                swap_cols(V, t, j)
            p = S[t][t]
            clean = True
            for r in range(t + 1, m):
                if S[r][t]:
                    q = S[r][t] // p
                    S[r] = [a - q * b for a, b in zip(S[r], S[t])]
                    U[r] = [a - q * b for a, b in zip(U[r], U[t])]
                    clean = clean and S[r][t] == 0
            for c in range(t + 1, n):
                if S[t][c]:
                    q = S[t][c] // p
                    add_col(S, c, t, q)
                    add_col(V, c, t, q)
                    clean = clean and S[t][c] == 0
            if not clean:
                continue
            bad = next(
                (r for r in range(t + 1, m) for c in range(t + 1, n) if S[r][c] % p),
                None,
            )
            if bad is None:
                break
            S[t] = [a + b for a, b in zip(S[t], S[bad])]
            U[t] = [a + b for a, b in zip(U[t], U[bad])]
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
    return S, U, V


def integer_kernel(A: Sequence[Sequence[int]], cols: Optional[int] = None) -> Matrix:
    """Lattice basis of ``{v in Z^n : A v = 0}``, returned as a list of vectors.

    The basis is Hermite-reduced, so it depends only on the kernel lattice.
    ``cols`` is needed when ``A`` has no rows.
    """
    m, n = shape(A)
    if m == 0:
        n = cols if cols is not None else 0
        return identity(n)
    H, U = hermite_normal_form(transpose(A))
    basis = [U[i] for i in range(n) if not any(H[i])]
    if not basis:
        return []
    reduced, _ = hermite_normal_form(basis)
    return [row for row in reduced if any(row)]


def reduced_row_echelon(A: Sequence[Sequence]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over Q and the list of pivot columns.

    Pivoting takes the first column with a nonzero entry at or below the
    current row, and within it the smallest row index.
    """
    m, n = shape(A)
    M = [[Fraction(x) for x in row] for row in A]
    pivots: List[int] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        pivot = next((r for r in range(row, m) if M[r][col] != 0), None)
        if pivot is None:
            continue
        M[row], M[pivot] = M[pivot], M[row]
        p = M[row][col]
        M[row] = [x / p for x in M[row]]
        for r in range(m):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
    return M, pivots


def rational_rank(A: Sequence[Sequence]) -> int:
    """Rank over Q. Uses fraction-free elimination on integer input."""
    m, n = shape(A)
    if m == 0 or n == 0:
        return 0
    if all(isinstance(x, int) for row in A for x in row):
        return _bareiss_rank(A)
    return len(reduced_row_echelon(A)[1])


def _bareiss_rank(A: Sequence[Sequence[int]]) -> int:
    M = [list(row) for row in A if any(row)]
    m = len(M)
    if not m:
        return 0
    n = len(M[0])
    rank = 0
    prev = 1
    for col in range(n):
        if rank >= m:
            break
        pivot = next((r for r in range(rank, m) if M[r][col]), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        p = M[rank][col]
        for r in range(rank + 1, m):
            f = M[r][col]
            M[r] = [(p * a - f * b) // prev for a, b in zip(M[r], M[rank])]
        prev = p
        rank += 1
    return rank


def solve_rational(A: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """One solution of ``A x = b`` over Q (free variables set to 0), or None."""
    m, n = shape(A)
    aug = [list(A[i]) + [b[i]] for i in range(m)]
    R, pivots = reduced_row_echelon(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        x[c] = R[r][n]
    return x


def inverse_rational(A: Sequence[Sequence]) -> List[List[Fraction]]:
    n = len(A)
    aug = [list(A[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    R, pivots = reduced_row_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def nullspace_rational(A: Sequence[Sequence], cols: Optional[int] = None) -> List[List[Fraction]]:
    """Basis of the rational null space from the reduced row echelon form."""
    m, n = shape(A)
    if m == 0:
        n = cols if cols is not None else 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, pivots = reduced_row_echelon(A)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -R[r][f]
        basis.append(v)
    return basis
