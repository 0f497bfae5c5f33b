"""Tropical spines dual to regular subdivisions.

Convention: the spine of ``w`` is the corner locus of
``u -> min_m (w(m) - <m, u>)``. The vertex dual to a cell is then the
gradient of the lower-hull facet over it, and legs leave along the outward
normals of the polygon. With this sign the spine is the limit of the
rescaled amoeba ``Log|z| / |log t|`` of ``sum t^{w(m)} z^m`` as ``t -> 0+``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import networkx as nx

from .errors import DegenerateCell, FormatError, NotInduced
from .subdivision import Cell, Subdivision, WeightFunction, _cross, _edge_key, convex_hull_2d, induces

Vec = tuple


def _primitive2(v: Sequence[int]) -> tuple[int, int]:
    g = math.gcd(int(v[0]), int(v[1]))
    return (int(v[0]) // g, int(v[1]) // g)


@dataclass(frozen=True)
class SpineVertex:
    id: int
    position: Vec
    face: str = "0"
    type: str | None = None
    cell: Cell | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SpineEdge:
    id: int
    u: int
    v: int
    direction: tuple[int, int]   # primitive, from u to v
    weight: int = 1
    type: str | None = None
    wall: tuple | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SpineLeg:
    id: int
    v: int
    direction: tuple[int, int]   # primitive outward normal of the exit edge
    boundary_edge: int
    weight: int = 1
    param: Fraction | None = None  # position of the wall's midpoint along the boundary edge, in [0, 1]
    end: Vec | None = None         # endpoint once embedded in a simplex
    type: str | None = None
    wall: tuple | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SpineGraph:
    vertices: tuple[SpineVertex, ...]
    edges: tuple[SpineEdge, ...]
    legs: tuple[SpineLeg, ...]
    boundary_edges: tuple[tuple[Vec, Vec], ...] = ()

    def vertex(self, vid: int) -> SpineVertex:
        return self._by_id[vid]

    @property
    def _by_id(self) -> dict[int, SpineVertex]:
        return {v.id: v for v in self.vertices}

    def valence(self, vid: int) -> int:
        return (sum((e.u == vid) + (e.v == vid) for e in self.edges)
                + sum(l.v == vid for l in self.legs))

    def valences(self) -> dict[int, int]:
        return {v.id: self.valence(v.id) for v in self.vertices}

    def incident_directions(self, vid: int) -> list[tuple[tuple[int, int], int]]:
        """``(primitive direction, weight)`` of every edge and leg leaving ``vid``."""
        out = []
        for e in self.edges:
            if e.u == vid:
                out.append((e.direction, e.weight))
            if e.v == vid:
                out.append(((-e.direction[0], -e.direction[1]), e.weight))
        out += [(l.direction, l.weight) for l in self.legs if l.v == vid]
        return out

    def is_balanced(self, vid: int | None = None) -> bool:
        ids = [vid] if vid is not None else [v.id for v in self.vertices]
        for i in ids:
            s = [0, 0]
            for d, wt in self.incident_directions(i):
                s[0] += wt * d[0]
                s[1] += wt * d[1]
            if s != [0, 0]:
                return False
        return True

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        for v in self.vertices:
            g.add_node(v.id, type=v.type)
        for e in self.edges:
            g.add_edge(e.u, e.v, key=e.id, type=e.type)
        return g


def _cell_gradient(cell: Cell, w: WeightFunction) -> tuple[Fraction, Fraction]:
    """``beta`` with ``w(m) = c + <beta, m>`` on the cell."""
    a, b, c = cell.vertices[:3]
    det = _cross(a, b, c)
    if det == 0:
        raise DegenerateCell(f"cell {cell.vertices} has zero area")
    wa, wb, wc = w(a), w(b), w(c)
    # solve [b-a; c-a] beta = [wb-wa, wc-wa]
    m11, m12 = b[0] - a[0], b[1] - a[1]
    m21, m22 = c[0] - a[0], c[1] - a[1]
    r1, r2 = wb - wa, wc - wa
    return (Fraction(r1 * m22 - r2 * m12, det), Fraction(m11 * r2 - m21 * r1, det))


def polygon_edges(S: Subdivision) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Polygon boundary edges, counterclockwise from the lex-smallest vertex."""
    hull = convex_hull_2d(S.polygon.vertices)
    return [(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))]


def dual_spine(S: Subdivision, w: WeightFunction, face: str = "0", check: bool = True) -> SpineGraph:
    """The spine dual to ``S``: one vertex per cell, one edge per interior
    wall, one leg per boundary wall."""
    if check and not induces(w, S):
        raise NotInduced("the weight does not induce this subdivision")
    for c in S.cells:
        if c.area2 <= 0:
            raise DegenerateCell(f"cell {c.vertices} has zero area")
    pos = [_cell_gradient(c, w) for c in S.cells]
    verts = tuple(SpineVertex(i, pos[i], face, None, c) for i, c in enumerate(S.cells))
    pedges = polygon_edges(S)
    edges, legs = [], []
    for wl in S.walls:
        i = wl.cells[0]
        cell = S.cells[i]
        # orient the wall counterclockwise around cell i; outward normal is (dy, -dx)
        a, b = next((x, y) for x, y in cell.edges() if _edge_key(x, y) == wl.key)
        normal = _primitive2((b[1] - a[1], -(b[0] - a[0])))
        if wl.is_boundary:
            k, (p, q) = next((k, e) for k, e in enumerate(pedges)
                             if _cross(e[0], e[1], a) == 0 and _cross(e[0], e[1], b) == 0)
            L = abs(q[0] - p[0]) + abs(q[1] - p[1])
            mid2 = (a[0] + b[0] - 2 * p[0], a[1] + b[1] - 2 * p[1])
            param = Fraction(abs(mid2[0]) + abs(mid2[1]), 2 * L)
            legs.append(SpineLeg(len(legs), i, normal, k, wl.lattice_length, param, wall=wl.key))
        else:
            edges.append(SpineEdge(len(edges), i, wl.cells[1], normal, wl.lattice_length, wall=wl.key))
    legs.sort(key=lambda l: (l.boundary_edge, l.param))
    legs = [replace(l, id=n) for n, l in enumerate(legs)]
    return SpineGraph(verts, tuple(edges), tuple(legs), tuple(pedges))


def betti1(G: SpineGraph) -> int:
    """First Betti number of the bounded part (legs ignored)."""
    g = G.to_networkx()
    return g.number_of_edges() - g.number_of_nodes() + nx.number_connected_components(g)


def legs_per_polygon_edge(G: SpineGraph) -> dict[int, int]:
    cnt = Counter(l.boundary_edge for l in G.legs)
    n = len(G.boundary_edges) or (max(cnt) + 1 if cnt else 0)
    return {k: cnt.get(k, 0) for k in range(n)}


def trivalent_count(G: SpineGraph) -> int:
    return sum(1 for k in G.valences().values() if k == 3)


# -- embedding --------------------------------------------------------------

STANDARD_SIMPLEX = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))


def _bary(weights: Sequence[float], target) -> tuple[float, float]:
    s = sum(weights)
    return (sum(wt * t[0] for wt, t in zip(weights, target)) / s,
            sum(wt * t[1] for wt, t in zip(weights, target)) / s)


def simplex_chart(u: Sequence, target=STANDARD_SIMPLEX) -> tuple[float, float]:
    """``u -> (1, e^{u1}, e^{u2}) / sum`` as barycentric coordinates on ``target``."""
    u1, u2 = float(u[0]), float(u[1])
    m = max(0.0, u1, u2)
    return _bary((math.exp(-m), math.exp(u1 - m), math.exp(u2 - m)), target)


def _leg_end(u: Sequence, d: Sequence[int], target) -> tuple[float, float]:
    # limit of the chart along u + s d as s -> oo: keep the coordinates with maximal slope
    slopes = (0, d[0], d[1])
    top = max(slopes)
    logs = (0.0, float(u[0]), float(u[1]))
    keep = [i for i in range(3) if slopes[i] == top]
    m = max(logs[i] for i in keep)
    wts = [math.exp(logs[i] - m) if i in keep else 0.0 for i in range(3)]
    return _bary(wts, target)


def embed_in_simplex(G: SpineGraph, target=STANDARD_SIMPLEX) -> SpineGraph:
    """Reposition ``G`` inside ``target`` through :func:`simplex_chart`.

    Legs get an ``end`` on the boundary of the target, the limit point of
    the chart along the leg.
    """
    target = tuple((float(p[0]), float(p[1])) for p in target)
    verts = tuple(replace(v, position=simplex_chart(v.position, target)) for v in G.vertices)
    pos = {v.id: v.position for v in G.vertices}
    legs = tuple(replace(l, end=_leg_end(pos[l.v], l.direction, target)) for l in G.legs)
    return replace(G, vertices=verts, legs=legs)


# -- text format ------------------------------------------------------------

def _fmt_num(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def _parse_num(s: str):
    try:
        return Fraction(s)
    except ValueError:
        return float(s)


def format_graph(G: SpineGraph) -> str:
    lines = []
    for v in G.vertices:
        parts = ["VERTEX", str(v.id), v.face, _fmt_num(v.position[0]), _fmt_num(v.position[1])]
        if v.type:
            parts.append(v.type)
        lines.append(" ".join(parts))
    for e in G.edges:
        parts = ["EDGE", str(e.id), str(e.u), str(e.v)]
        if e.type:
            parts.append(e.type)
        lines.append(" ".join(parts))
    for l in G.legs:
        parts = ["LEG", str(l.id), str(l.v), str(l.direction[0]), str(l.direction[1]), str(l.boundary_edge)]
        if l.param is not None:
            parts.append(_fmt_num(l.param))
            if l.weight != 1:
                parts.append(str(l.weight))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> SpineGraph:
    verts, edges, legs = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        f = line.split()
        try:
            if f[0] == "VERTEX" and len(f) in (5, 6):
                verts.append(SpineVertex(int(f[1]), (_parse_num(f[3]), _parse_num(f[4])), f[2],
                                         f[5] if len(f) == 6 else None))
            elif f[0] == "EDGE" and len(f) in (4, 5):
                edges.append(SpineEdge(int(f[1]), int(f[2]), int(f[3]), (0, 0), 1,
                                       f[4] if len(f) == 5 else None))
            elif f[0] == "LEG" and 6 <= len(f) <= 8:
                legs.append(SpineLeg(int(f[1]), int(f[2]), (int(f[3]), int(f[4])), int(f[5]),
                                     int(f[7]) if len(f) == 8 else 1,
                                     Fraction(f[6]) if len(f) >= 7 else None))
            else:
                raise FormatError(f"line {lineno}: unrecognized record")
        except (ValueError, IndexError):
            raise FormatError(f"line {lineno}: malformed record") from None
    ids = {v.id for v in verts}
    if len(ids) != len(verts):
        raise FormatError("duplicate vertex id")
    if any(e.u not in ids or e.v not in ids for e in edges) or any(l.v not in ids for l in legs):
        raise FormatError("edge or leg refers to an unknown vertex")
    # recover edge directions from exact positions when available
    pos = {v.id: v.position for v in verts}
    fixed = []
    for e in edges:
        d = (pos[e.v][0] - pos[e.u][0], pos[e.v][1] - pos[e.u][1])
        if all(isinstance(x, Fraction) for x in d) and d != (0, 0):
            den = math.lcm(d[0].denominator, d[1].denominator)
            fixed.append(replace(e, direction=_primitive2((int(d[0] * den), int(d[1] * den)))))
        else:
            fixed.append(e)
    return SpineGraph(tuple(verts), tuple(fixed), tuple(legs))


def write_graph(G: SpineGraph, path: str | Path) -> None:
    Path(path).write_text(format_graph(G))


def read_graph(path: str | Path) -> SpineGraph:
    return parse_graph(Path(path).read_text())


# -- SVG --------------------------------------------------------------------

def to_svg(G: SpineGraph, target=STANDARD_SIMPLEX, size: int = 480) -> str:
    """Draw the embedded spine inside ``target``."""
    E = embed_in_simplex(G, target)
    xs = [p[0] for p in target]
    ys = [p[1] for p in target]
    x0, y0 = min(xs), min(ys)
    scale = (size - 40) / max(max(xs) - x0, max(ys) - y0)

    def tr(p):
        return (20 + (p[0] - x0) * scale, size - 20 - (p[1] - y0) * scale)

    pos = {v.id: tr(v.position) for v in E.vertices}
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">']
    tri = " ".join("%.2f,%.2f" % tr(p) for p in target)
    out.append(f'<polygon points="{tri}" fill="none" stroke="#888"/>')
    for e in E.edges:
        (a, b), (c, d) = pos[e.u], pos[e.v]
        out.append(f'<line x1="{a:.2f}" y1="{b:.2f}" x2="{c:.2f}" y2="{d:.2f}" stroke="black"/>')
    for l in E.legs:
        (a, b), (c, d) = pos[l.v], tr(l.end)
        out.append(f'<line x1="{a:.2f}" y1="{b:.2f}" x2="{c:.2f}" y2="{d:.2f}" stroke="#246"/>')
    for v in E.vertices:
        x, y = pos[v.id]
        color = {"II": "red", "III": "blue"}.get(v.type or "", "black")
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
