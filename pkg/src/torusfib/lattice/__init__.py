from .polytope import (
    AffineChart,
    Face,
    Facet,
    LatticePolytope,
    affine_lattice_chart,
    dual_polytope,
    dual_vertices,
    is_reflexive,
    newton_polygon,
)
from .quotient import QuotientLattice
from .io import format_polytope, parse_polytope, read_polytope, write_polytope


def integral_points(P: LatticePolytope, face: Face | None = None):
    return P.integral_points(face)


def face_lattice(P: LatticePolytope):
    return P.faces


def cp4_fan_polytope() -> LatticePolytope:
    """``conv{e1, .., e4, -(e1+..+e4)}``."""
    return LatticePolytope([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (-1, -1, -1, -1)])


__all__ = [
    "AffineChart", "Face", "Facet", "LatticePolytope", "QuotientLattice",
    "affine_lattice_chart", "cp4_fan_polytope", "dual_polytope", "dual_vertices",
    "face_lattice", "format_polytope", "integral_points", "is_reflexive",
    "newton_polygon", "parse_polytope", "read_polytope", "write_polytope",
]
