"""Integer monodromy matrices of singular torus fibres.

Matrices are tuples of row tuples. Products are taken left to right:
a vertex triple ``(T1, T2, T3)`` is consistent when ``T1 @ T2 @ T3 = I``.
Duality of fibres acts by inverse transpose.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CompositeTypeUndefined, FormatError, UnsupportedType

Matrix = tuple[tuple[int, ...], ...]

GENERIC, TYPE_I, TYPE_II, TYPE_III = "Generic", "I", "II", "III"
BASIC_TYPES = (GENERIC, TYPE_I, TYPE_II, TYPE_III)
# opaque labels that are carried through but have no Euler number
COMPOSITE_TYPES = ("III5", "II5x5", "NODE")

IDENTITY: Matrix = ((1, 0, 0), (0, 1, 0), (0, 0, 1))

T_GAMMA: Matrix = ((1, 1, 0), (0, 1, 0), (0, 0, 1))

_TRIPLES = {
    TYPE_II: (
        ((1, 1, 0), (0, 1, 0), (0, 0, 1)),
        ((1, 0, -1), (0, 1, 0), (0, 0, 1)),
        ((1, -1, 1), (0, 1, 0), (0, 0, 1)),
    ),
    TYPE_III: (
        ((1, 0, 0), (1, 1, 0), (0, 0, 1)),
        ((1, 0, 0), (0, 1, 0), (-1, 0, 1)),
        ((1, 0, 0), (-1, 1, 0), (1, 0, 1)),
    ),
}


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def matmul(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)) for i in range(3))


def product(mats: Iterable[Matrix]) -> Matrix:
    out = IDENTITY
    for M in mats:
        out = matmul(out, M)
    return out


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def det(A: Matrix) -> int:
    return (A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
            - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
            + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]))


def inverse(A: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix (adjugate / det)."""
    d = det(A)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    cof = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            m = [[A[r][c] for c in range(3) if c != j] for r in range(3) if r != i]
            cof[i][j] = (-1) ** (i + j) * (m[0][0] * m[1][1] - m[0][1] * m[1][0])
    return tuple(tuple(cof[j][i] * d for j in range(3)) for i in range(3))


def is_unipotent(A: Matrix) -> bool:
    N = tuple(tuple(A[i][j] - (i == j) for j in range(3)) for i in range(3))
    return matmul(matmul(N, N), N) == ((0,) * 3,) * 3


def is_type_I(A: Matrix) -> bool:
    """``A - I = u v^T`` with ``u, v`` primitive and ``v . u = 0``."""
    from math import gcd
    N = [[A[i][j] - (i == j) for j in range(3)] for i in range(3)]
    if not any(any(r) for r in N):
        return False
    rows = [r for r in N if any(r)]
    # rank one: all nonzero rows proportional
    r0 = rows[0]
    for r in rows[1:]:
        if any(r0[i] * r[j] - r0[j] * r[i] for i in range(3) for j in range(3)):
            return False
    g = 0
    for r in N:
        for x in r:
            g = gcd(g, x)
    if g != 1:
        return False
    return matmul(as_matrix(N), as_matrix(N)) == ((0,) * 3,) * 3


def standard_triple(t: str) -> tuple[Matrix, Matrix, Matrix]:
    if t not in _TRIPLES:
        raise UnsupportedType(f"no standard triple for fibre type {t!r}")
    return _TRIPLES[t]


def type_I_matrix() -> Matrix:
    return T_GAMMA


def vertex_consistent(T1: Matrix, T2: Matrix, T3: Matrix) -> bool:
    return product((T1, T2, T3)) == IDENTITY


def dualize(T: Matrix) -> Matrix:
    return transpose(inverse(T))


def euler_number(t: str) -> int:
    table = {GENERIC: 0, TYPE_I: 0, TYPE_II: -1, TYPE_III: 1}
    if t in table:
        return table[t]
    if t in COMPOSITE_TYPES:
        raise CompositeTypeUndefined(f"Euler number of composite fibre {t!r} is not defined")
    raise UnsupportedType(f"unknown fibre type {t!r}")


def dual_type(t: str) -> str:
    return {TYPE_II: TYPE_III, TYPE_III: TYPE_II}.get(t, t)


# -- conjugacy search -----------------------------------------------------------

def _generators() -> list[Matrix]:
    gens = []
    for i in range(3):
        for j in range(3):
            if i != j:
                for s in (1, -1):
                    gens.append(tuple(tuple(int(r == c) + (s if (r, c) == (i, j) else 0)
                                            for c in range(3)) for r in range(3)))
    for i in range(3):
        gens.append(tuple(tuple((-1 if r == i else 1) * int(r == c) for c in range(3)) for r in range(3)))
    for i, j in ((0, 1), (0, 2), (1, 2)):
        perm = [0, 1, 2]
        perm[i], perm[j] = perm[j], perm[i]
        gens.append(tuple(tuple(int(perm[r] == c) for c in range(3)) for r in range(3)))
    return gens


@lru_cache(maxsize=None)
def _words(max_len: int) -> tuple[Matrix, ...]:
    """All GL(3,Z) elements reachable by words of length at most ``max_len``, shortest first."""
    seen = {IDENTITY}
    order = [IDENTITY]
    frontier = deque([(IDENTITY, 0)])
    gens = _generators()
    while frontier:
        M, k = frontier.popleft()
        if k == max_len:
            continue
        for g in gens:
            N = matmul(M, g)
            if N not in seen:
                seen.add(N)
                order.append(N)
                frontier.append((N, k + 1))
    return tuple(order)


def find_conjugator(A: Sequence[Matrix] | Matrix, B: Sequence[Matrix] | Matrix,
                    max_len: int = 3) -> Matrix | None:
    """``P`` in GL(3,Z) with ``P A_i P^{-1} = B_i`` for all ``i``, or ``None``.

    Searches words in elementary matrices, sign changes and transpositions
    of bounded length.
    """
    if isinstance(A[0][0], int):
        A, B = (A,), (B,)
    A = tuple(as_matrix(a) for a in A)
    B = tuple(as_matrix(b) for b in B)
    for P in _words(max_len):
        if all(matmul(P, a) == matmul(b, P) for a, b in zip(A, B)):
            return P
    return None


# -- text I/O -------------------------------------------------------------------

def format_matrix(T: Matrix) -> str:
    return "".join(" ".join(str(x) for x in row) + "\n" for row in T)


def parse_matrix(text: str) -> Matrix:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise FormatError("expected three rows of three integers")
    try:
        return as_matrix(rows)
    except ValueError:
        raise FormatError("non-integer matrix entry") from None


def parse_matrices(text: str) -> list[Matrix]:
    """Matrices separated by blank lines."""
    blocks = [b for b in text.strip().split("\n\n") if b.strip()]
    return [parse_matrix(b) for b in blocks]


def format_matrices(mats: Iterable[Matrix]) -> str:
    return "\n".join(format_matrix(M) for M in mats)


def read_matrices(path: str | Path) -> list[Matrix]:
    return parse_matrices(Path(path).read_text())
