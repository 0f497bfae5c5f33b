"""Quotients ``Z^n / span(relations)`` with canonical representatives."""

from __future__ import annotations

from typing import Sequence

from .intlinalg import extend_to_basis, hermite_normal_form, inverse_unimodular, matvec, rank, transpose


class QuotientLattice:
    """The lattice ``Z^n`` modulo the span of linearly independent relations.

    Canonical representatives come from Hermite-normal-form reduction: for
    each pivot column ``c`` of the relation HNF the representative has its
    ``c``-th entry in ``[0, pivot)``. When the relations span a saturated
    sublattice, :meth:`coordinates` and :meth:`lift` identify the quotient
    with ``Z^(n - r)``.
    """

    def __init__(self, ambient_dim: int, relations: Sequence[Sequence[int]]):
        rel = [tuple(int(x) for x in r) for r in relations]
        if any(len(r) != ambient_dim for r in rel):
            raise ValueError("relation of wrong length")
        if rel and rank(rel) != len(rel):
            raise ValueError("relations must be linearly independent")
        self.ambient_dim = ambient_dim
        self.relations = tuple(rel)
        H, _ = hermite_normal_form(rel) if rel else ([], [])
        self._hnf = [row for row in H if any(row)]
        self._pivots = [next(i for i, x in enumerate(row) if x) for row in self._hnf]
        self._basis = None
        if rel:
            try:
                self._basis = extend_to_basis(rel)
            except ValueError:
                self._basis = None
        else:
            self._basis = [[int(i == j) for j in range(ambient_dim)] for i in range(ambient_dim)]

    @property
    def rank(self) -> int:
        return self.ambient_dim - len(self.relations)

    def canonical(self, v: Sequence[int]) -> tuple[int, ...]:
        w = [int(x) for x in v]
        for row, c in zip(self._hnf, self._pivots):
            q = w[c] // row[c]
            if q:
                w = [a - q * b for a, b in zip(w, row)]
        return tuple(w)

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.canonical(u) == self.canonical(v)

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        if self._basis is None:
            raise ValueError("relations are not saturated; quotient has torsion")
        # v = sum y_i B_i  =>  y = B^{-T} v
        y = matvec(transpose(inverse_unimodular(self._basis)), v)
        return tuple(y[len(self.relations):])

    def lift(self, coords: Sequence[int]) -> tuple[int, ...]:
        if self._basis is None:
            raise ValueError("relations are not saturated; quotient has torsion")
        comp = self._basis[len(self.relations):]
        return tuple(sum(c * b[i] for c, b in zip(coords, comp)) for i in range(self.ambient_dim))
