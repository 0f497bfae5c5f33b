"""Regular subdivisions of lattice polygons.

A weight function lifts every lattice point ``m`` of a polygon to height
``w(m)``; the projection of the lower convex hull gives the regular
subdivision. Everything is exact (``Fraction``).

The lower hull is built by pivoting: starting from a boundary segment, the
lower facet across a known edge ``ab`` is the plane through the lifted ``a``
and ``b`` of smallest slope over the points beyond ``ab``. Facets are then
explored breadth first across interior walls.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DomainMismatch, FormatError, NonConvexQuad, NotRegular, WallOnBoundary
from .lattice.polytope import LatticePolytope, newton_polygon

Point2 = tuple[int, int]
Edge = tuple[Point2, Point2]


def _cross(o: Sequence, a: Sequence, b: Sequence):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points: Iterable[Point2]) -> list[Point2]:
    """Vertices of the convex hull, counterclockwise, starting at the lex-smallest."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point2] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point2] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def twice_area(poly: Sequence[Point2]) -> int:
    """Normalized (lattice) area of a convex polygon given counterclockwise."""
    n = len(poly)
    return sum(poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1] for i in range(n))


def _edge_key(a: Point2, b: Point2) -> Edge:
    return (a, b) if a <= b else (b, a)


class WeightFunction:
    """Rational heights on the lattice points of a polygon."""

    def __init__(self, values: Mapping[Sequence[int], object]):
        vals = {}
        for m, v in values.items():
            key = (int(m[0]), int(m[1]))
            if key in vals:
                raise DomainMismatch(f"duplicate point {key}")
            vals[key] = Fraction(v)
        self._values = vals

    @classmethod
    def from_function(cls, points: Iterable[Point2], f: Callable[[Point2], object]) -> WeightFunction:
        return cls({p: f(p) for p in points})

    @property
    def domain(self) -> list[Point2]:
        return sorted(self._values)

    def __call__(self, m: Sequence[int]) -> Fraction:
        return self._values[(m[0], m[1])]

    def items(self):
        return sorted(self._values.items())

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightFunction) and self._values == other._values

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    def __repr__(self) -> str:
        return f"WeightFunction({len(self._values)} points)"

    def plus_affine(self, c0, c1, c2) -> WeightFunction:
        c0, c1, c2 = Fraction(c0), Fraction(c1), Fraction(c2)
        return WeightFunction({m: v + c0 + c1 * m[0] + c2 * m[1] for m, v in self._values.items()})

    def perturbed(self, delta: Mapping[Point2, object]) -> WeightFunction:
        return WeightFunction({m: v + Fraction(delta.get(m, 0)) for m, v in self._values.items()})


def quadratic_weights(d: int) -> WeightFunction:
    """``m1^2 + m1 m2 + m2^2`` on the degree-``d`` triangle."""
    return WeightFunction.from_function(
        newton_polygon(d).integral_points(), lambda m: m[0] ** 2 + m[0] * m[1] + m[1] ** 2)


def standard_weights(d: int) -> WeightFunction:
    """The quadratic weight minus the affine ``d (m1 + m2)``.

    Equal to ``(m0^2 + m1^2 + m2^2 - d^2) / 2`` with ``m0 = d - m1 - m2``,
    so it is symmetric under permuting the triangle's corners. It induces the
    same subdivision as :func:`quadratic_weights` and puts the spine's centre
    at the origin.
    """
    return quadratic_weights(d).plus_affine(0, -d, -d)


def zero_weights(polygon: LatticePolytope) -> WeightFunction:
    return WeightFunction.from_function(polygon.integral_points(), lambda m: 0)


@dataclass(frozen=True)
class Cell:
    """A 2-cell, by its vertices in counterclockwise order."""

    vertices: tuple[Point2, ...]

    @property
    def key(self) -> frozenset:
        return frozenset(self.vertices)

    def edges(self) -> list[Edge]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    @property
    def area2(self) -> int:
        return twice_area(self.vertices)

    def contains(self, p: Point2, strict: bool = False) -> bool:
        for a, b in self.edges():
            c = _cross(a, b, p)
            if c < 0 or (strict and c == 0):
                return False
        return True

    def is_triangle(self) -> bool:
        return len(self.vertices) == 3


def make_cell(points: Iterable[Point2]) -> Cell:
    return Cell(tuple(convex_hull_2d(points)))


@dataclass(frozen=True)
class Wall:
    """A 1-cell together with the indices of the (one or two) cells it bounds."""

    a: Point2
    b: Point2
    cells: tuple[int, ...]

    @property
    def key(self) -> Edge:
        return _edge_key(self.a, self.b)

    @property
    def is_boundary(self) -> bool:
        return len(self.cells) == 1

    @property
    def lattice_length(self) -> int:
        from math import gcd
        return gcd(abs(self.b[0] - self.a[0]), abs(self.b[1] - self.a[1]))


@dataclass(frozen=True)
class Subdivision:
    """A polyhedral subdivision of a lattice polygon into convex lattice cells.

    Cells are stored sorted by their vertex tuples so that two subdivisions
    with the same cell set compare equal.
    """

    polygon: LatticePolytope
    cells: tuple[Cell, ...]
    walls: tuple[Wall, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.polygon.ambient_dim != 2:
            raise ValueError("subdivisions live on 2-dimensional polygons")
        cells = tuple(sorted(self.cells, key=lambda c: sorted(c.vertices)))
        object.__setattr__(self, "cells", cells)
        inc: dict[Edge, list[int]] = {}
        ends: dict[Edge, tuple[Point2, Point2]] = {}
        for i, c in enumerate(cells):
            for a, b in c.edges():
                k = _edge_key(a, b)
                inc.setdefault(k, []).append(i)
                ends.setdefault(k, (a, b))
        walls = []
        for k in sorted(inc):
            if len(inc[k]) > 2:
                raise ValueError(f"edge {k} bounds more than two cells")
            a, b = ends[k]
            walls.append(Wall(a, b, tuple(inc[k])))
        object.__setattr__(self, "walls", tuple(walls))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subdivision) and self.polygon == other.polygon
                and {c.key for c in self.cells} == {c.key for c in other.cells})

    def __hash__(self) -> int:
        return hash((self.polygon, frozenset(c.key for c in self.cells)))

    def cell_keys(self) -> set[frozenset]:
        return {c.key for c in self.cells}

    def wall(self, a: Sequence[int], b: Sequence[int]) -> Wall:
        k = _edge_key((a[0], a[1]), (b[0], b[1]))
        for w in self.walls:
            if w.key == k:
                return w
        raise KeyError(k)

    @property
    def interior_walls(self) -> list[Wall]:
        return [w for w in self.walls if not w.is_boundary]

    @property
    def boundary_walls(self) -> list[Wall]:
        return [w for w in self.walls if w.is_boundary]

    def vertices_used(self) -> set[Point2]:
        return {v for c in self.cells for v in c.vertices}

    def cell_containing(self, p: Point2) -> int:
        for i, c in enumerate(self.cells):
            if c.contains(p):
                return i
        raise KeyError(p)

    def validate(self) -> None:
        """Check that cells tile the polygon: total area matches, every wall
        is either on the polygon boundary or shared by two cells."""
        poly = convex_hull_2d(self.polygon.vertices)
        if sum(c.area2 for c in self.cells) != twice_area(poly):
            raise ValueError("cell areas do not add up to the polygon area")
        if any(c.area2 <= 0 for c in self.cells):
            raise ValueError("degenerate cell")
        for w in self.walls:
            if w.is_boundary != _on_polygon_boundary(self.polygon, w.a, w.b):
                raise ValueError(f"wall {w.key} has inconsistent incidence")


def _on_polygon_boundary(P: LatticePolytope, a: Point2, b: Point2) -> bool:
    return any(f.normal[0] * a[0] + f.normal[1] * a[1] == f.offset
               and f.normal[0] * b[0] + f.normal[1] * b[1] == f.offset for f in P.facets)


def _check_domain(polygon: LatticePolytope, w: WeightFunction) -> list[Point2]:
    if polygon.ambient_dim != 2:
        raise DomainMismatch("polygon must live in Z^2")
    pts = polygon.integral_points()
    if sorted(pts) != w.domain:
        raise DomainMismatch("weight domain differs from the polygon's lattice points")
    return pts


def _lower_facet_across(pts, w, a, b, side_sign: int) -> list[Point2]:
    """Points of the lower facet through lifted ``a, b`` on the given side of ``ab``.

    ``side_sign = +1`` selects points left of ``a -> b``.
    """
    ab = (b[0] - a[0], b[1] - a[1])
    ab2 = ab[0] ** 2 + ab[1] ** 2
    wa, wb = w(a), w(b)

    def base(p):
        t = Fraction((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1], ab2)
        return wa + (wb - wa) * t

    best = None
    cand = []
    for p in pts:
        delta = side_sign * _cross(a, b, p)
        if delta <= 0:
            continue
        s = (w(p) - base(p)) / delta
        if best is None or s < best:
            best = s
        cand.append((p, delta))
    if best is None:
        raise ValueError("no points beyond the wall")
    on = [a, b] + [p for p, delta in cand if w(p) - base(p) == best * delta]
    # points on the line ab itself that lie on the plane
    for p in pts:
        if _cross(a, b, p) == 0 and w(p) == base(p):
            on.append(p)
    return on


def _first_boundary_segment(P: LatticePolytope, pts, w) -> tuple[Point2, Point2, int]:
    f = P.facets[0]
    line = sorted(p for p in pts if f.normal[0] * p[0] + f.normal[1] * p[1] == f.offset)
    a = line[0]
    # first segment of the 1-dimensional lower hull along this edge
    best, b = None, None
    for p in line[1:]:
        dist = abs(p[0] - a[0]) + abs(p[1] - a[1])
        s = (w(p) - w(a)) / dist
        if best is None or s < best or (s == best and dist > abs(b[0] - a[0]) + abs(b[1] - a[1])):
            best, b = s, p
    # inward normal decides which side the polygon lies on
    probe = (a[0] + f.normal[0], a[1] + f.normal[1])
    side = 1 if _cross(a, b, probe) > 0 else -1
    return a, b, side


def regular_subdivision(polygon: LatticePolytope, w: WeightFunction) -> Subdivision:
    """Projection of the lower hull of ``{(m, w(m))}``.

    Coplanar lifted points are merged into a single (possibly non-triangular)
    cell, so ties keep the coarser subdivision.
    """
    pts = _check_domain(polygon, w)
    a, b, side = _first_boundary_segment(polygon, pts, w)
    first = make_cell(_lower_facet_across(pts, w, a, b, side))
    found = {first.key: first}
    queue = deque([first])
    while queue:
        cell = queue.popleft()
        for u, v in cell.edges():
            if _on_polygon_boundary(polygon, u, v):
                continue
            # cell is to the left of u -> v; look to the right
            nxt = make_cell(_lower_facet_across(pts, w, u, v, -1))
            if nxt.key not in found:
                found[nxt.key] = nxt
                queue.append(nxt)
    return Subdivision(polygon, tuple(found.values()))


def trivial_subdivision(polygon: LatticePolytope) -> Subdivision:
    return Subdivision(polygon, (make_cell(polygon.vertices),))


def is_unimodular_triangulation(S: Subdivision) -> bool:
    return all(c.is_triangle() and abs(c.area2) == 1 for c in S.cells)


def is_triangulation(S: Subdivision) -> bool:
    return all(c.is_triangle() for c in S.cells)


def induces(w: WeightFunction, S: Subdivision) -> bool:
    return regular_subdivision(S.polygon, w) == S


def diagonal_flip(S: Subdivision, wall: Sequence[Sequence[int]] | Wall) -> Subdivision:
    """Swap the diagonal of the quadrilateral formed by the two triangles on ``wall``."""
    if isinstance(wall, Wall):
        a, b = wall.a, wall.b
    else:
        a, b = (tuple(wall[0]), tuple(wall[1]))
    try:
        wl = S.wall(a, b)
    except KeyError:
        raise ValueError(f"{(a, b)} is not a wall of the subdivision") from None
    if wl.is_boundary:
        raise WallOnBoundary(f"wall {wl.key} lies on the polygon boundary")
    c1, c2 = (S.cells[i] for i in wl.cells)
    if not (c1.is_triangle() and c2.is_triangle()):
        raise NonConvexQuad(f"wall {wl.key} is not between two triangles")
    a, b = wl.key
    (c,) = [v for v in c1.vertices if v not in (a, b)]
    (d,) = [v for v in c2.vertices if v not in (a, b)]
    # strictly convex iff a and b lie strictly on opposite sides of cd
    if _cross(c, d, a) * _cross(c, d, b) >= 0:
        raise NonConvexQuad(f"quadrilateral {a, c, b, d} is not strictly convex")
    others = [x for i, x in enumerate(S.cells) if i not in wl.cells]
    return Subdivision(S.polygon, tuple(others) + (make_cell([a, c, d]), make_cell([b, c, d])))


def find_inducing_weights(S: Subdivision, margin: int = 1) -> WeightFunction:
    """An exact rational weight inducing ``S``, or :class:`NotRegular`.

    Local folding conditions across interior walls, coplanarity inside each
    cell and strict lifting of unused points form a linear program (solved
    with scipy). The float solution is rationalized and then verified exactly
    with :func:`induces`.
    """
    import numpy as np
    from scipy.optimize import linprog

    pts = S.polygon.integral_points()
    idx = {p: i for i, p in enumerate(pts)}
    n = len(pts)

    def plane_row(p, tri):
        # w(p) - (affine interpolation of w over triangle tri at p), as a row
        t0, t1, t2 = tri
        det = _cross(t0, t1, t2)
        l1 = Fraction(_cross(t0, p, t2), det)
        l2 = Fraction(_cross(t0, t1, p), det)
        l0 = 1 - l1 - l2
        row = np.zeros(n)
        row[idx[p]] += 1
        for lam, t in zip((l0, l1, l2), tri):
            row[idx[t]] -= float(lam)
        return row

    A_ub, b_ub, A_eq = [], [], []
    for wl in S.interior_walls:
        c1, c2 = (S.cells[i] for i in wl.cells)
        x = next(v for v in c1.vertices if _cross(wl.a, wl.b, v) != 0)
        y = next(v for v in c2.vertices if _cross(wl.a, wl.b, v) != 0)
        A_ub.append(-plane_row(y, (wl.a, wl.b, x)))
        b_ub.append(-margin)
    used = S.vertices_used()
    for c in S.cells:
        tri = c.vertices[:3]
        for v in c.vertices[3:]:
            A_eq.append(plane_row(v, tri))
    for p in pts:
        if p in used:
            continue
        c = S.cells[S.cell_containing(p)]
        A_ub.append(-plane_row(p, c.vertices[:3]))
        b_ub.append(-margin)
    res = linprog(
        np.ones(n),
        A_ub=np.array(A_ub) if A_ub else None, b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(A_eq) if A_eq else None, b_eq=np.zeros(len(A_eq)) if A_eq else None,
        bounds=[(0, None)] * n, method="highs")
    if res.status != 0:
        raise NotRegular("no weight function induces this subdivision")
    for denom in (1, 2, 6, 12, 60, 10 ** 6):
        w = WeightFunction({p: Fraction(x).limit_denominator(denom) for p, x in zip(pts, res.x)})
        if induces(w, S):
            return w
    raise NotRegular("rationalized LP solution failed exact verification")


# -- weights file -----------------------------------------------------------

def parse_weights(text: str) -> WeightFunction:
    vals = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            lhs, rhs = line.split(":")
            m1, m2 = (int(x) for x in lhs.split())
            vals[(m1, m2)] = Fraction(rhs.strip())
        except ValueError:
            raise FormatError(f"line {lineno}: expected 'm1 m2 : p/q'") from None
    return WeightFunction(vals)


def format_weights(w: WeightFunction) -> str:
    return "".join(f"{m[0]} {m[1]} : {v}\n" for m, v in w.items())


def read_weights(path: str | Path) -> WeightFunction:
    return parse_weights(Path(path).read_text())


def write_weights(w: WeightFunction, path: str | Path) -> None:
    Path(path).write_text(format_weights(w))


# -- subdivision file: weight lines followed by ``CELL x1 y1 x2 y2 ...`` ---------

def format_subdivision(S: Subdivision, w: WeightFunction) -> str:
    cells = "".join("CELL " + " ".join(f"{x} {y}" for x, y in c.vertices) + "\n" for c in S.cells)
    return format_weights(w) + cells


def parse_subdivision(text: str) -> tuple[Subdivision, WeightFunction]:
    """Read a subdivision file; cells must be exactly the ones the weights induce."""
    wlines, cells = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line.startswith("CELL"):
            wlines.append(raw)
            continue
        try:
            nums = [int(x) for x in line.split()[1:]]
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer cell coordinate") from None
        if len(nums) < 6 or len(nums) % 2:
            raise FormatError(f"line {lineno}: a cell needs at least three points")
        cells.append(make_cell(zip(nums[::2], nums[1::2])))
    w = parse_weights("\n".join(wlines))
    P = LatticePolytope(convex_hull_2d(w.domain))
    S = Subdivision(P, tuple(cells)) if cells else regular_subdivision(P, w)
    if cells and not induces(w, S):
        raise NotRegular("listed cells are not the subdivision induced by the weights")
    return S, w


def read_subdivision(path: str | Path) -> tuple[Subdivision, WeightFunction]:
    return parse_subdivision(Path(path).read_text())


def write_subdivision(S: Subdivision, w: WeightFunction, path: str | Path) -> None:
    Path(path).write_text(format_subdivision(S, w))
