"""Exact integer and rational linear algebra on small dense matrices.

Matrices are lists of rows of Python ints or :class:`fractions.Fraction`.
Sizes here never exceed a handful of rows, so clarity wins over speed.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*A)] if A else []


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def gcd_list(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = gcd_list(v)
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def hermite_normal_form(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ A == H``; ``H`` is in
    row echelon form with positive pivots and entries above each pivot
    reduced into ``[0, pivot)``. Zero rows of ``H`` are at the bottom.
    """
    H = [[int(x) for x in row] for row in A]
    m = len(H)
    n = len(H[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r >= m:
            break
        # Euclid on column c among rows r..m-1
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            if p != r:
                H[r], H[p] = H[p], H[r]
                U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return H, U


def rank(A: Sequence[Sequence]) -> int:
    return len(row_echelon([list(map(Fraction, row)) for row in A])[1])


def row_echelon(A: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (R, pivot_columns)."""
    R = [list(row) for row in A]
    m = len(R)
    n = len(R[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, pivots


def nullspace_rational(A: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the rational nullspace ``{x : A x = 0}``."""
    rows = [list(map(Fraction, row)) for row in A]
    n = len(rows[0])
    R, piv = row_echelon(rows)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, c in enumerate(piv):
            x[c] = -R[i][f]
        basis.append(x)
    return basis


def solve_rational(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``A x = b`` over Q, or ``None`` if inconsistent."""
    n = len(A[0])
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(A, b)]
    R, piv = row_echelon(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = R[i][n]
    return x


def inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(A)]
    R, piv = row_echelon(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def inverse_unimodular(A: Sequence[Sequence[int]]) -> Matrix:
    inv = inverse(A)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def determinant(A: Sequence[Sequence]) -> Fraction:
    M = [list(map(Fraction, row)) for row in A]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det


def kernel_basis(A: Sequence[Sequence[int]]) -> Matrix:
    """Rows forming a Z-basis of the saturated lattice ``{x in Z^n : A x = 0}``."""
    At = transpose(A)
    H, U = hermite_normal_form(At)
    return [U[i] for i in range(len(H)) if not any(H[i])]


def extend_to_basis(V: Sequence[Sequence[int]]) -> Matrix:
    """Complete the rows of ``V`` to a unimodular ``n x n`` matrix.

    The rows must span a saturated sublattice (e.g. a single primitive
    vector, or a kernel basis). The first ``len(V)`` rows of the result are
    ``V`` itself.
    """
    V = [[int(x) for x in row] for row in V]
    k = len(V)
    n = len(V[0])
    H, U = hermite_normal_form(transpose(V))
    H1 = [row[:k] for row in H[:k]]
    if abs(determinant(H1)) != 1:
        raise ValueError("rows do not span a saturated sublattice")
    Uinv_T = transpose(inverse_unimodular(U))
    return V + [Uinv_T[i] for i in range(k, n)]
