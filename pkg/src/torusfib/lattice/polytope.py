"""Lattice polytopes with exact facet and face computations.

Everything is integer or :class:`~fractions.Fraction` arithmetic. Facets are
found by scanning affinely independent ``d``-subsets of the vertices, which is
plenty for the dimensions (``<= 6``) and vertex counts used here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence

from ..errors import InvalidPolytope, NonIntegralDual, OriginNotInterior
from .intlinalg import dot, gcd_list, kernel_basis, nullspace_rational, rank, solve_rational

Point = tuple[int, ...]


def _as_point(v: Iterable) -> Point:
    out = []
    for x in v:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise InvalidPolytope(f"non-integral coordinate {x}")
            x = x.numerator
        elif isinstance(x, float):
            if not x.is_integer():
                raise InvalidPolytope(f"non-integral coordinate {x}")
        out.append(int(x))
    return tuple(out)


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine span of ``points`` (-1 for no points)."""
    if not points:
        return -1
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return rank(diffs) if diffs else 0


@dataclass(frozen=True)
class Facet:
    """The inequality ``<normal, x> >= offset`` together with its vertex set."""

    normal: tuple[int, ...]
    offset: int
    vertices: frozenset[int]


@dataclass(frozen=True)
class Face:
    """A face of a :class:`LatticePolytope`, identified by its vertex indices."""

    vertices: frozenset[int]
    dim: int

    def __len__(self) -> int:
        return len(self.vertices)


class LatticePolytope:
    """Convex hull of finitely many lattice points in ``Z^n``.

    The polytope must be full-dimensional in ``Z^n``; use
    :func:`affine_lattice_chart` first for lower-dimensional point sets.
    Redundant input points are discarded, and the surviving vertices are
    stored in lexicographic order.
    """

    def __init__(self, points: Iterable[Iterable]):
        pts = sorted({_as_point(p) for p in points})
        if not pts:
            raise InvalidPolytope("empty point set")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise InvalidPolytope("points of mixed dimension")
        if affine_rank(pts) != n:
            raise InvalidPolytope(
                f"points span a {affine_rank(pts)}-dimensional affine space in Z^{n}")
        self.ambient_dim = n
        facets = _facets_of(pts)
        on_facets = [set() for _ in pts]
        for k, f in enumerate(facets):
            for i in f.vertices:
                on_facets[i].add(k)
        keep = []
        for i, p in enumerate(pts):
            normals = [facets[k].normal for k in on_facets[i]]
            if len(normals) >= n and rank(normals) == n:
                keep.append(i)
        self.vertices: tuple[Point, ...] = tuple(pts[i] for i in keep)
        remap = {old: new for new, old in enumerate(keep)}
        self.facets: tuple[Facet, ...] = tuple(
            Facet(f.normal, f.offset, frozenset(remap[i] for i in f.vertices if i in remap))
            for f in facets)

    def __repr__(self) -> str:
        return f"LatticePolytope(dim={self.ambient_dim}, vertices={list(self.vertices)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    @property
    def dim(self) -> int:
        return self.ambient_dim

    def contains(self, x: Sequence, strict: bool = False) -> bool:
        for f in self.facets:
            val = dot(f.normal, x)
            if val < f.offset or (strict and val == f.offset):
                return False
        return True

    def origin_is_interior(self) -> bool:
        return all(f.offset < 0 for f in self.facets)

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        """All nonempty faces, sorted by dimension then vertex indices."""
        full = frozenset(range(len(self.vertices)))
        found = {frozenset(f.vertices) for f in self.facets}
        frontier = set(found)
        while frontier:
            new = set()
            for a in frontier:
                for b in found:
                    c = a & b
                    if c and c not in found and c not in new:
                        new.add(c)
            found |= new
            frontier = new
        found.add(full)
        for i in range(len(self.vertices)):
            found.add(frozenset([i]))
        faces = [Face(s, affine_rank([self.vertices[i] for i in sorted(s)])) for s in found]
        return tuple(sorted(faces, key=lambda f: (f.dim, sorted(f.vertices))))

    def faces_of_dim(self, k: int) -> list[Face]:
        return [f for f in self.faces if f.dim == k]

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces_of_dim(k)) for k in range(self.ambient_dim + 1))

    def face_with_vertices(self, verts: Iterable[Sequence[int]]) -> Face:
        """Look up the smallest face containing the given vertices."""
        idx = set()
        for v in verts:
            p = _as_point(v)
            try:
                idx.add(self.vertices.index(p))
            except ValueError:
                raise InvalidPolytope(f"{p} is not a vertex") from None
        cands = [f for f in self.faces if idx <= f.vertices]
        return min(cands, key=lambda f: (f.dim, len(f.vertices)))

    def face_vertices(self, face: Face) -> list[Point]:
        return [self.vertices[i] for i in sorted(face.vertices)]

    def supporting_facets(self, face: Face) -> list[Facet]:
        return [f for f in self.facets if face.vertices <= f.vertices]

    def integral_points(self, face: Face | None = None) -> list[Point]:
        """All lattice points of ``face`` (default: the whole polytope), lexicographic."""
        verts = self.vertices if face is None else self.face_vertices(face)
        tight = [] if face is None else self.supporting_facets(face)
        lo = [min(v[i] for v in verts) for i in range(self.ambient_dim)]
        hi = [max(v[i] for v in verts) for i in range(self.ambient_dim)]
        pts = []
        for x in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
            if all(dot(f.normal, x) == f.offset for f in tight) and self.contains(x):
                pts.append(tuple(x))
        return pts

    def interior_points(self) -> list[Point]:
        return [p for p in self.integral_points() if self.contains(p, strict=True)]


def _facets_of(pts: list[Point]) -> list[Facet]:
    n = len(pts[0])
    facets: dict[tuple, Facet] = {}
    for sub in combinations(range(len(pts)), n):
        p0 = pts[sub[0]]
        diffs = [[a - b for a, b in zip(pts[i], p0)] for i in sub[1:]]
        ns = nullspace_rational(diffs) if diffs else [[Fraction(1)]]
        if len(ns) != 1:
            continue
        den = 1
        for x in ns[0]:
            den = den * x.denominator // gcd_list([den, x.denominator])
        a = [int(x * den) for x in ns[0]]
        g = gcd_list(a)
        a = [x // g for x in a]
        b = dot(a, p0)
        vals = [dot(a, p) for p in pts]
        if all(v >= b for v in vals):
            pass
        elif all(v <= b for v in vals):
            a = [-x for x in a]
            b = -b
            vals = [-v for v in vals]
        else:
            continue
        key = (tuple(a), b)
        if key not in facets:
            on = frozenset(i for i, v in enumerate(vals) if v == b)
            facets[key] = Facet(tuple(a), b, on)
    return sorted(facets.values(), key=lambda f: (f.normal, f.offset))


def dual_vertices(P: LatticePolytope, convention: str = "dual") -> list[tuple[Fraction, ...]]:
    """Rational vertices of the dual polytope.

    ``convention="dual"`` gives ``{n : <m, n> >= -1 for m in P}``;
    ``convention="polar"`` gives ``{n : <m, n> <= 1}``, its negative.
    """
    if convention not in ("dual", "polar"):
        raise ValueError(f"unknown convention {convention!r}")
    if not P.origin_is_interior():
        raise OriginNotInterior("the origin is not an interior point")
    sign = 1 if convention == "dual" else -1
    out = []
    for f in P.facets:
        # <a, x> >= b with b < 0  <=>  <x, a/(-b)> >= -1
        out.append(tuple(Fraction(sign * x, -f.offset) for x in f.normal))
    return sorted(out)


def dual_polytope(P: LatticePolytope, convention: str = "dual") -> LatticePolytope:
    """The dual lattice polytope; raises :class:`NonIntegralDual` if it has
    a non-integral vertex (i.e. ``P`` is not reflexive)."""
    verts = dual_vertices(P, convention)
    bad = [v for v in verts if any(x.denominator != 1 for x in v)]
    if bad:
        raise NonIntegralDual(f"dual vertex {tuple(str(x) for x in bad[0])} is not integral")
    return LatticePolytope(verts)


def is_reflexive(P: LatticePolytope) -> bool:
    return all(x.denominator == 1 for v in dual_vertices(P) for x in v)


def newton_polygon(d: int) -> LatticePolytope:
    """The triangle ``conv{(0,0), (d,0), (0,d)}``."""
    if d < 1:
        raise InvalidPolytope("degree must be >= 1")
    return LatticePolytope([(0, 0), (d, 0), (0, d)])


@dataclass(frozen=True)
class AffineChart:
    """Integral affine coordinates on the lattice ``aff(points) ∩ Z^n``."""

    origin: Point
    basis: tuple[Point, ...]
    _rows: tuple = field(repr=False, default=())

    def to_chart(self, p: Sequence[int]) -> Point:
        d = [a - b for a, b in zip(p, self.origin)]
        sol = solve_rational([list(col) for col in zip(*self.basis)], d)
        if sol is None or any(x.denominator != 1 for x in sol):
            raise InvalidPolytope(f"{tuple(p)} is not in the chart lattice")
        return tuple(int(x) for x in sol)

    def from_chart(self, y: Sequence[int]) -> Point:
        return tuple(o + sum(c * b[i] for c, b in zip(y, self.basis))
                     for i, o in enumerate(self.origin))


def affine_lattice_chart(points: Sequence[Sequence[int]]) -> AffineChart:
    """Chart identifying the saturated affine lattice spanned by ``points`` with ``Z^k``."""
    pts = [_as_point(p) for p in points]
    p0 = min(pts)
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts if p != p0]
    n = len(p0)
    if not diffs or rank(diffs) == 0:
        return AffineChart(p0, ())
    perp = kernel_basis(diffs)
    basis = kernel_basis(perp) if perp else [[int(i == j) for j in range(n)] for i in range(n)]
    return AffineChart(p0, tuple(tuple(b) for b in basis))
