"""Gauss-Jordan elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction


def rref(rows):
    """Reduced row echelon form; returns ``(matrix, pivot_columns)``."""
    A = [[Fraction(x) for x in row] for row in rows]
    if not A:
        return A, []
    m, n = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        A[r] = [x / piv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def kernel(rows) -> list:
    """Basis of the right null space."""
    if not rows:
        return []
    n = len(rows[0])
    R, piv = rref(rows)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for i, c in enumerate(piv):
            vec[c] = -R[i][f]
        basis.append(vec)
    return basis


class SingularSystemError(ValueError):
    """Inconsistent linear system; ``kernel`` holds a null-space basis."""

    def __init__(self, message, kernel_vectors):
        super().__init__(message)
        self.kernel = kernel_vectors


def solve(rows, rhs):
    """One exact solution of ``A x = b`` (free variables set to zero)."""
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    n = len(rows[0])
    R, piv = rref(aug)
    if n in piv:
        raise SingularSystemError("system is inconsistent", kernel(rows))
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = R[i][n]
    return x
