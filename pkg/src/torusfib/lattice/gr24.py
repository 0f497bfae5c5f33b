"""The Gr(2,4) / P(2,4) lattice data.

Coordinates are ordered ``(12, 34, 13, 24, 14, 23)`` for both ``I`` (the
``M`` side) and ``w`` (the ``N`` side). ``N_s`` is the sublattice of
``Z^6 / Z w0`` orthogonal to ``m1 - m2``; ``M_s`` is ``{|I| = 0} / Z (m1 - m2)``.
Both are rank 4 and dual to each other under the standard pairing; this
module fixes compatible ``Z^4`` charts on them.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .intlinalg import dot, extend_to_basis, inverse_unimodular, kernel_basis, matvec, solve_rational
from .polytope import LatticePolytope, dual_polytope
from .quotient import QuotientLattice

W0 = (1, 1, 1, 1, 1, 1)
M1_MINUS_M2 = (0, 0, 1, 1, -1, -1)

W_VECTORS = {
    "w1": (1, 0, 0, 0, 0, 0),
    "w2": (0, 1, 0, 0, 0, 0),
    "w3": (0, 0, 1, 0, 1, 0),
    "w4": (0, 0, 1, 0, 0, 1),
    "w5": (0, 0, 0, 1, 1, 0),
    "w6": (0, 0, 0, 1, 0, 1),
}

I_VECTORS = {
    "I1": (1, -3, 1, 1, 0, 0),
    "I2": (-3, 1, 1, 1, 0, 0),
    "I3": (1, 1, 1, -3, 0, 0),
    "I4": (1, 1, 0, 0, -3, 1),
    "I5": (1, 1, 0, 0, 1, -3),
    "I6": (1, 1, -3, 1, 0, 0),
}

# interior lattice points of the three distinguished edges, as listed
EDGE_INTERIOR_POINTS = {
    ("I1", "I2"): [(0, -2, 1, 1, 0, 0), (-1, -1, 1, 1, 0, 0), (-2, 0, 1, 1, 0, 0)],
    ("I1", "I3"): [(1, -2, 1, 0, 0, 0), (1, -1, 1, -1, 0, 0), (1, 0, 1, -2, 0, 0)],
    ("I3", "I4"): [(1, 1, 1, -2, -1, 0), (1, 1, 1, -1, -2, 0), (1, 1, 0, -1, -2, 1)],
}

FACE_POINT_COUNTS = {
    ("I1", "I2", "I3"): 15,
    ("I1", "I3", "I4"): 15,
    ("I3", "I4", "I6", "I5"): 25,
}

M_S = QuotientLattice(6, [M1_MINUS_M2])


class Gr24Charts:
    """Dual ``Z^4`` charts on ``N_s`` and ``M_s``."""

    def __init__(self):
        K = kernel_basis([list(M1_MINUS_M2)])           # basis of (m1-m2)^perp in Z^6
        kt = [list(c) for c in zip(*K)]
        w0_in_K = [int(x) for x in solve_rational(kt, W0)]
        self._K = K
        self._kt = kt
        self._q = QuotientLattice(len(K), [w0_in_K])
        # lifts of the Z^4 basis of N_s / w0 back to Z^6
        self.n_basis = []
        for j in range(4):
            e = [int(i == j) for i in range(4)]
            y = self._q.lift(e)
            self.n_basis.append(tuple(sum(c * K[i][k] for i, c in enumerate(y)) for k in range(6)))
        B = extend_to_basis(self.n_basis + [list(W0)])
        self._B = B
        self._Binv = inverse_unimodular(B)

    def n_coords(self, w: Sequence[int]) -> tuple[int, ...]:
        """Chart coordinates of ``[w]`` in ``N_s / w0``."""
        if dot(w, M1_MINUS_M2) != 0:
            raise ValueError(f"{tuple(w)} is not in N_s")
        y = solve_rational(self._kt, list(w))
        return self._q.coordinates([int(x) for x in y])

    def n_lift(self, c: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(ci * b[k] for ci, b in zip(c, self.n_basis)) for k in range(6))

    def m_coords(self, I: Sequence[int]) -> tuple[int, ...]:
        """Chart coordinates of ``[I]`` in ``M_s`` (its values on the ``N_s`` basis)."""
        if sum(I) != 0:
            raise ValueError(f"{tuple(I)} does not have |I| = 0")
        return tuple(dot(I, b) for b in self.n_basis)

    def m_lift(self, phi: Sequence[int]) -> tuple[int, ...]:
        """Canonical ``Z^6`` representative of the ``M_s`` class with chart coordinates ``phi``."""
        rhs = list(phi) + [0, 0]
        I = matvec(self._Binv, rhs)
        return M_S.canonical(I)


@lru_cache(maxsize=1)
def charts() -> Gr24Charts:
    return Gr24Charts()


def delta_s_dual() -> LatticePolytope:
    """``conv{w1..w6}`` in the ``N_s`` chart."""
    ch = charts()
    return LatticePolytope([ch.n_coords(w) for w in W_VECTORS.values()])


def delta_s() -> LatticePolytope:
    """``conv{I1..I6}`` in the ``M_s`` chart."""
    ch = charts()
    return LatticePolytope([ch.m_coords(I) for I in I_VECTORS.values()])


def delta_s_from_dual() -> LatticePolytope:
    """``Delta_s`` computed as the polar of ``conv{w}``.

    The listed ``I`` vertices satisfy ``<I, w> <= 1``, so the polar
    convention is the one that reproduces them.
    """
    return dual_polytope(delta_s_dual(), convention="polar")


def canonical_I(I: Sequence[int]) -> tuple[int, ...]:
    return M_S.canonical(I)


def label_of_vertex(phi: Sequence[int]) -> str:
    ch = charts()
    rep = ch.m_lift(phi)
    for name, I in I_VECTORS.items():
        if M_S.equal(I, rep):
            return name
    raise KeyError(tuple(phi))


def face_by_labels(P: LatticePolytope, labels: Sequence[str]):
    ch = charts()
    return P.face_with_vertices([ch.m_coords(I_VECTORS[l]) for l in labels])
