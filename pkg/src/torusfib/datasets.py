"""Ready-made bases and loci."""

from __future__ import annotations

from .assembly import AssembledLocus, BaseComplex, assemble
from .lattice import cp4_fan_polytope, dual_polytope
from .lattice.gr24 import delta_s, label_of_vertex
from .lattice.polytope import LatticePolytope
from .transitions import ADJACENT, conifold_all


def quintic_polytope() -> LatticePolytope:
    """Newton polytope of the quintic: the dual of the fan polytope of CP^4."""
    return dual_polytope(cp4_fan_polytope())


def quintic_base() -> BaseComplex:
    return BaseComplex.from_polytope(quintic_polytope())


def quintic_locus() -> AssembledLocus:
    return assemble(quintic_base())


def gr24_base(scale: int = 1) -> BaseComplex:
    """The polytope with vertices ``I1..I6``, labelled ``1..6``."""
    P = delta_s()
    labels = [label_of_vertex(v)[1:] for v in P.vertices]
    if scale != 1:
        P = LatticePolytope([tuple(scale * x for x in v) for v in P.vertices])
    return BaseComplex.from_polytope(P, labels)


def gr24_locus(state: str = "smoothed", scale: int = 1, pairing=ADJACENT[0]) -> AssembledLocus:
    """The locus over the Gr(2,4) polytope with every site in ``state``.

    ``degenerate`` leaves 4-valent nodes on the edge ``12``; ``smoothed``
    passes two strands through each node; ``resolved`` splits each node into
    two type-III vertices.
    """
    L = assemble(gr24_base(scale))
    if state == "degenerate":
        return L
    if state == "smoothed":
        return conifold_all(L, "smooth")
    if state == "resolved":
        return conifold_all(L, "resolve", pairing=pairing)
    raise ValueError(f"unknown state {state!r}")
