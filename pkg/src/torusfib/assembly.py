"""Gluing per-face spines over the 2-skeleton of a polytope boundary.

Each 2-face carries a spine in its own lattice chart. Legs leaving a face
through a base edge are matched, in order of their position along the
edge, with the legs of the other faces on that edge; every matched group
meets at a junction point on the edge.

Junction states:

``plain``       all ports meet at one vertex (type III when 3-valent)
``degenerate``  a 4-valent conifold point (composite type ``NODE``)
``resolved``    two 3-valent vertices joined by a short edge
``smoothed``    two strands pass through without meeting
``pass``        exactly two ports, joined by a single edge
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import (
    CompositeTypeUndefined, FormatError, InconsistentInput, LegCountMismatch,
    NonTrivalentVertex, OrientationMismatch, UntypedVertex,
)
from .lattice.polytope import LatticePolytope, affine_lattice_chart
from .monodromy import (
    COMPOSITE_TYPES, TYPE_I, TYPE_II, TYPE_III, Matrix, dual_type, dualize, euler_number,
    find_conjugator, inverse, is_type_I, standard_triple, vertex_consistent,
)
from .spine import SpineGraph, SpineLeg, dual_spine, format_graph, parse_graph
from .subdivision import (
    WeightFunction, _cross, convex_hull_2d, regular_subdivision, twice_area,
)

Point2 = tuple[int, int]


# -- base complex ---------------------------------------------------------------

@dataclass(frozen=True)
class BaseEdge:
    id: int
    vertices: tuple[int, int]
    label: str
    faces: tuple[int, ...]   # incident 2-faces in cyclic order


@dataclass(frozen=True)
class BaseFace:
    id: int
    label: str
    vertices: tuple[int, ...]     # base vertices in the chart polygon's counterclockwise order
    polygon: tuple[Point2, ...]   # chart polygon, counterclockwise from the lex-smallest vertex
    edges: tuple[int, ...]        # base edge of polygon edge k
    reversed: tuple[bool, ...]    # polygon edge k runs against the base edge's orientation

    def lattice_polygon(self) -> LatticePolytope:
        return LatticePolytope(self.polygon)


def _join(labels: Sequence[str]) -> str:
    sep = "" if all(len(l) == 1 for l in labels) else "-"
    return sep.join(labels)


def _cyclic_label(labels: Sequence[str]) -> str:
    """Canonical reading of a cycle: start at the smallest label, then go
    towards its smaller neighbour."""
    n = len(labels)
    k = min(range(n), key=lambda i: labels[i])
    fwd = [labels[(k + i) % n] for i in range(n)]
    bwd = [labels[(k - i) % n] for i in range(n)]
    return _join(min(fwd, bwd) if n > 2 else sorted(labels))


@dataclass(frozen=True)
class BaseComplex:
    """Vertices, edges and 2-faces of a polytope boundary, with incidences."""

    vertex_labels: tuple[str, ...]
    edges: tuple[BaseEdge, ...]
    faces: tuple[BaseFace, ...]
    polytope: LatticePolytope | None = field(default=None, compare=False)

    def face_by_label(self, label: str) -> BaseFace:
        for f in self.faces:
            if f.label == label:
                return f
        raise KeyError(label)

    def edge_by_label(self, label: str) -> BaseEdge:
        for e in self.edges:
            if e.label == label:
                return e
        raise KeyError(label)

    @classmethod
    def from_polytope(cls, P: LatticePolytope, labels: Sequence[str] | None = None) -> BaseComplex:
        if labels is None:
            labels = [str(i) for i in range(len(P.vertices))]
        labels = tuple(labels)
        edges_raw = [tuple(sorted(f.vertices)) for f in P.faces_of_dim(1)]
        faces_raw = P.faces_of_dim(2)
        facets = [fc.vertices for fc in P.facets] if P.ambient_dim > 2 else []
        faces = []
        edge_id = {e: k for k, e in enumerate(edges_raw)}
        for fid, F in enumerate(faces_raw):
            pts = P.integral_points(F)
            chart = affine_lattice_chart(pts)
            image = {i: chart.to_chart(P.vertices[i]) for i in F.vertices}
            hull = convex_hull_2d(image.values())
            back = {v: i for i, v in image.items()}
            order = tuple(back[v] for v in hull)
            eids, rev = [], []
            for k in range(len(order)):
                a, b = order[k], order[(k + 1) % len(order)]
                eids.append(edge_id[tuple(sorted((a, b)))])
                rev.append(a > b)
            faces.append(BaseFace(fid, _cyclic_label([labels[i] for i in order]), order,
                                  tuple(hull), tuple(eids), tuple(rev)))
        edges = []
        for eid, (a, b) in enumerate(edges_raw):
            inc = [f.id for f in faces if eid in f.edges]
            edges.append(BaseEdge(eid, (a, b), _join(sorted([labels[a], labels[b]])),
                                  _cyclic_faces(inc, faces_raw, facets, (a, b))))
        return cls(labels, tuple(edges), tuple(faces), P)

    @classmethod
    def from_polygon(cls, polygon: LatticePolytope, label: str = "0") -> BaseComplex:
        """A single face, its own chart, with nothing glued."""
        hull = tuple(convex_hull_2d(polygon.vertices))
        n = len(hull)
        edges = tuple(BaseEdge(k, (k, (k + 1) % n) if k + 1 < n else (0, k), f"{k}", (0,)) for k in range(n))
        rev = tuple(k == n - 1 for k in range(n))
        face = BaseFace(0, label, tuple(range(n)), hull, tuple(range(n)), rev)
        return cls(tuple(str(i) for i in range(n)), edges, (face,), polygon)


def _cyclic_faces(inc: list[int], faces_raw, facets, edge) -> tuple[int, ...]:
    """Order the 2-faces around an edge: consecutive faces share a facet."""
    if len(inc) <= 2 or not facets:
        return tuple(inc)
    adj = {f: [] for f in inc}
    for fc in facets:
        if not set(edge) <= fc:
            continue
        inside = [f for f in inc if faces_raw[f].vertices <= fc]
        if len(inside) == 2:
            a, b = inside
            adj[a].append(b)
            adj[b].append(a)
    start = min(inc)
    cyc = [start]
    prev, cur = None, start
    while True:
        nxt = [g for g in adj[cur] if g != prev]
        if not nxt:
            break
        g = min(nxt) if prev is None else nxt[0]
        if g == start:
            break
        cyc.append(g)
        prev, cur = cur, g
    if len(cyc) != len(inc):
        return tuple(inc)
    return tuple(cyc)


# -- standard weights on arbitrary faces --------------------------------------------

def standard_face_weights(polygon: LatticePolytope) -> WeightFunction:
    """A weight inducing a unimodular triangulation of the polygon.

    On a lattice triangle of side ``d`` and area ``d^2`` this is
    ``(m0^2 + m1^2 + m2^2 - d^2) / 2`` in lattice barycentric coordinates,
    which gives the standard triangulation. Otherwise it is
    ``a^2 + ab + b^2`` in chart coordinates relative to the lex-smallest
    vertex; its lower hull is the Delaunay triangulation for the hexagonal
    form, whose cells are empty lattice triangles.
    """
    pts = polygon.integral_points()
    hull = convex_hull_2d(polygon.vertices)
    if len(hull) == 3:
        A, B, C = hull
        area = _cross(A, B, C)
        d = math.gcd(B[0] - A[0], B[1] - A[1])
        if area == d * d and all(math.gcd(q[0] - p[0], q[1] - p[1]) == d
                                 for p, q in ((B, C), (C, A))):
            def bary(p):
                m1 = Fraction(_cross(A, p, C), area) * d
                m2 = Fraction(_cross(A, B, p), area) * d
                m0 = d - m1 - m2
                return (m0 * m0 + m1 * m1 + m2 * m2 - d * d) / 2
            return WeightFunction({p: bary(p) for p in pts})
    o = hull[0]
    return WeightFunction({p: (p[0] - o[0]) ** 2 + (p[0] - o[0]) * (p[1] - o[1]) + (p[1] - o[1]) ** 2
                           for p in pts})


# -- locus ----------------------------------------------------------------------------

@dataclass(frozen=True)
class FaceLocus:
    """The spine on one face. Legs carry base-edge ids and positions along the base edge."""

    face: int
    label: str
    polygon: tuple[Point2, ...]
    weights: WeightFunction | None
    graph: SpineGraph


@dataclass(frozen=True)
class Junction:
    edge: int
    index: int
    param: Fraction
    ports: tuple[tuple[int, int], ...]   # (face, leg id), cyclic face order around the edge
    state: str = "plain"
    types: tuple[str, ...] = ()
    pairing: tuple[tuple[int, int], tuple[int, int]] | None = None
    planes: tuple[str, str] | None = None

    @property
    def key(self) -> tuple[int, int]:
        return (self.edge, self.index)


@dataclass(frozen=True)
class AssembledLocus:
    edges: tuple[BaseEdge, ...]
    faces: tuple[FaceLocus, ...]
    junctions: tuple[Junction, ...]

    def face(self, fid: int) -> FaceLocus:
        for f in self.faces:
            if f.face == fid:
                return f
        raise KeyError(fid)

    def face_by_label(self, label: str) -> FaceLocus:
        for f in self.faces:
            if f.label == label:
                return f
        raise KeyError(label)

    def junction(self, key: tuple[int, int]) -> Junction:
        for j in self.junctions:
            if j.key == tuple(key):
                return j
        raise KeyError(key)

    def sites(self) -> list[Junction]:
        """Junctions with four ports (conifold sites), in file order."""
        return [j for j in self.junctions if len(j.ports) == 4]

    def glue_records(self) -> list[tuple[int, int, int, int]]:
        return [(j.edge, f, leg, j.index) for j in self.junctions for f, leg in j.ports]

    def graph(self) -> nx.MultiGraph:
        return locus_graph(self)


def _leg_to_base(leg: SpineLeg, face: BaseFace) -> SpineLeg:
    k = leg.boundary_edge
    param = leg.param if not face.reversed[k] else 1 - leg.param
    return replace(leg, boundary_edge=face.edges[k], param=param)


def _type_face_vertices(G: SpineGraph) -> SpineGraph:
    verts = tuple(v if v.type else replace(v, type=TYPE_II if G.valence(v.id) == 3 else None)
                  for v in G.vertices)
    return replace(G, vertices=verts)


def face_locus(face: BaseFace, G: SpineGraph, weights: WeightFunction | None = None) -> FaceLocus:
    """Convert a spine built on the face's chart polygon to base-edge leg data."""
    verts = tuple(replace(v, face=face.label) for v in G.vertices)
    legs = tuple(_leg_to_base(l, face) for l in G.legs)
    H = _type_face_vertices(replace(G, vertices=verts, legs=legs))
    return FaceLocus(face.id, face.label, face.polygon, weights, H)


def spine_on_face(face: BaseFace, weights: WeightFunction | None = None) -> FaceLocus:
    P = face.lattice_polygon()
    w = weights if weights is not None else standard_face_weights(P)
    S = regular_subdivision(P, w)
    return face_locus(face, dual_spine(S, w, face=face.label, check=False), w)


def _default_junction(edge: int, index: int, param: Fraction, ports) -> Junction:
    k = len(ports)
    if k == 2:
        return Junction(edge, index, param, ports, "pass")
    if k == 3:
        return Junction(edge, index, param, ports, "plain", (TYPE_III,))
    return Junction(edge, index, param, ports, "degenerate", ("NODE",))


def glue(edges: Sequence[BaseEdge], faces: Sequence[FaceLocus]) -> tuple[Junction, ...]:
    """Order-preserving matching of legs along every base edge with two or more faces."""
    by_face = {f.face: f for f in faces}
    junctions = []
    for e in edges:
        inc = [f for f in e.faces if f in by_face]
        if len(inc) < 2:
            continue
        per_face = {}
        for f in inc:
            legs = sorted((l for l in by_face[f].graph.legs if l.boundary_edge == e.id), key=lambda l: l.param)
            per_face[f] = legs
        counts = {f: len(v) for f, v in per_face.items()}
        if len(set(counts.values())) != 1:
            raise LegCountMismatch(f"base edge {e.label}: leg counts {counts} differ")
        params = {f: [l.param for l in v] for f, v in per_face.items()}
        ref = params[inc[0]]
        for f in inc[1:]:
            if params[f] != ref:
                raise OrientationMismatch(f"base edge {e.label}: leg positions of faces "
                                          f"{by_face[inc[0]].label} and {by_face[f].label} disagree")
        for i, p in enumerate(ref):
            ports = tuple((f, per_face[f][i].id) for f in inc)
            junctions.append(_default_junction(e.id, i, p, ports))
    return tuple(junctions)


def assemble(base: BaseComplex, face_graphs: Mapping | None = None,
             weights: Mapping | None = None) -> AssembledLocus:
    """Glue per-face spines into one locus.

    ``face_graphs`` maps face ids or labels to spines built on the face's
    chart polygon (leg boundary edges numbered counterclockwise from the
    polygon's lex-smallest vertex). Faces without a graph get the spine of
    ``weights[face]`` or of :func:`standard_face_weights`.
    """
    face_graphs = dict(face_graphs or {})
    weights = dict(weights or {})

    def lookup(m, f):
        return m.get(f.id, m.get(f.label))

    faces = []
    for f in base.faces:
        G = lookup(face_graphs, f)
        w = lookup(weights, f)
        if G is not None:
            faces.append(face_locus(f, G, w))
        else:
            faces.append(spine_on_face(f, w))
    faces = tuple(faces)
    return AssembledLocus(base.edges, faces, glue(base.edges, faces))


def rebuild(L: AssembledLocus, faces: Iterable[FaceLocus]) -> AssembledLocus:
    """Replace some faces and re-glue, keeping the states of unchanged sites."""
    new = {f.face: f for f in L.faces}
    for f in faces:
        new[f.face] = f
    flist = tuple(new[f.face] for f in L.faces)
    fresh = glue(L.edges, flist)
    old = {j.key: j for j in L.junctions}
    out = []
    for j in fresh:
        o = old.get(j.key)
        if o is not None and o.ports == j.ports and o.param == j.param:
            out.append(o)
        else:
            out.append(j)
    return AssembledLocus(L.edges, flist, tuple(out))


def combinatorially_equal(A: AssembledLocus, B: AssembledLocus) -> bool:
    """Same locus graph (node keys, types and edge keys); positions and weights are ignored."""
    ga, gb = locus_graph(A), locus_graph(B)
    if dict(ga.nodes(data="type")) != dict(gb.nodes(data="type")):
        return False
    ea = sorted((tuple(sorted((u, v))), k) for u, v, k in ga.edges(keys=True))
    eb = sorted((tuple(sorted((u, v))), k) for u, v, k in gb.edges(keys=True))
    return ea == eb


# -- global graph -----------------------------------------------------------------

def _jnode(j: Junction, part: int | None = None):
    return ("J", j.edge, j.index) if part is None else ("J", j.edge, j.index, part)


def locus_graph(L: AssembledLocus) -> nx.MultiGraph:
    """The locus as a multigraph.

    Nodes: ``("F", face, vertex)``, junction vertices ``("J", edge, index[, part])``
    and ends of unglued legs ``("L", face, leg)`` (type ``END``). Edge keys
    identify the underlying piece: ``("E", face, edge)``, ``("G", face, leg)``,
    ``("S", edge, index, strand)``, ``("R", edge, index)``.
    """
    g = nx.MultiGraph()
    legs = {}
    for F in L.faces:
        G = F.graph
        for v in G.vertices:
            g.add_node(("F", F.face, v.id), type=v.type, stratum=("face", F.label))
        for e in G.edges:
            g.add_edge(("F", F.face, e.u), ("F", F.face, e.v), key=("E", F.face, e.id), type=TYPE_I)
        for l in G.legs:
            legs[(F.face, l.id)] = l
    glued = set()
    for j in L.junctions:
        ports = j.ports
        glued.update(ports)
        ends = [("F", f, legs[(f, lid)].v) for f, lid in ports]
        strat = ("edge", j.edge)
        if j.state in ("plain", "degenerate"):
            n = _jnode(j)
            g.add_node(n, type=j.types[0] if j.types else None, stratum=strat)
            for (f, lid), u in zip(ports, ends):
                g.add_edge(u, n, key=("G", f, lid), type=TYPE_I)
        elif j.state == "resolved":
            for part, pair in enumerate(j.pairing):
                n = _jnode(j, part)
                g.add_node(n, type=j.types[part], stratum=strat)
                for p in pair:
                    f, lid = ports[p]
                    g.add_edge(ends[p], n, key=("G", f, lid), type=TYPE_I)
            g.add_edge(_jnode(j, 0), _jnode(j, 1), key=("R", j.edge, j.index), type=TYPE_I)
        elif j.state == "smoothed":
            for s, (a, b) in enumerate(j.pairing):
                g.add_edge(ends[a], ends[b], key=("S", j.edge, j.index, s), type=TYPE_I,
                           plane=j.planes[s] if j.planes else None)
        elif j.state == "pass":
            g.add_edge(ends[0], ends[1], key=("S", j.edge, j.index, 0), type=TYPE_I)
        else:
            raise InconsistentInput(f"unknown junction state {j.state!r}")
    for (f, lid), l in legs.items():
        if (f, lid) not in glued:
            n = ("L", f, lid)
            g.add_node(n, type="END", stratum=("edge", l.boundary_edge))
            g.add_edge(("F", f, l.v), n, key=("G", f, lid), type=TYPE_I)
    return g


@dataclass(frozen=True)
class VertexCounts:
    n_edges: int
    n_II: int
    n_III: int
    composite: tuple[tuple[str, int], ...] = ()

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_edges, self.n_II, self.n_III)


def classify_vertices(L: AssembledLocus) -> VertexCounts:
    g = locus_graph(L)
    n2 = n3 = 0
    comp: dict[str, int] = {}
    for n, data in g.nodes(data=True):
        t = data.get("type")
        if t == "END":
            continue
        if t is None:
            raise UntypedVertex(f"vertex {n} has no fibre type")
        if t == TYPE_II:
            n2 += 1
        elif t == TYPE_III:
            n3 += 1
        else:
            comp[t] = comp.get(t, 0) + 1
    return VertexCounts(g.number_of_edges(), n2, n3, tuple(sorted(comp.items())))


def euler_characteristic(F: FibrationDatum | AssembledLocus) -> int:
    """Sum of fibre Euler numbers over locus vertices (``nIII - nII``).

    Composite vertices (e.g. an unresolved node) have no Euler number and
    raise :class:`CompositeTypeUndefined`.
    """
    L = F.locus if isinstance(F, FibrationDatum) else F
    c = classify_vertices(L)
    if c.composite:
        raise CompositeTypeUndefined(f"locus has composite vertices {dict(c.composite)}")
    return euler_number(TYPE_III) * c.n_III + euler_number(TYPE_II) * c.n_II


# -- monodromy --------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeMonodromy:
    """Monodromy of one locus edge, seen from each typed endpoint.

    ``transport`` conjugates the inverse of the matrix at ``u`` into the
    matrix at ``v`` (the edge points away from ``u`` and into ``v``).
    """

    key: tuple
    u: tuple
    v: tuple | None
    at_u: Matrix
    at_v: Matrix | None
    transport: Matrix | None


@dataclass(frozen=True)
class FibrationDatum:
    locus: AssembledLocus
    vertex_monodromy: dict          # node -> ((edge key, matrix), x3), in triple order
    edge_monodromy: dict            # edge key -> EdgeMonodromy

    def triples(self):
        for n, items in self.vertex_monodromy.items():
            yield n, tuple(m for _, m in items)

    def is_consistent(self) -> bool:
        return all(vertex_consistent(*t) for _, t in self.triples())


def _angle(d) -> float:
    return math.atan2(float(d[1]), float(d[0]))


def _half_edge_order(L: AssembledLocus, g: nx.MultiGraph, node) -> list[tuple]:
    """Edge keys at a 3-valent vertex in a fixed cyclic order."""
    keys = [k for _, _, k in g.edges(node, keys=True)]
    if node[0] == "F":
        F = L.face(node[1])
        G = F.graph
        dirs = {}
        for e in G.edges:
            if e.u == node[2]:
                dirs[("E", F.face, e.id)] = e.direction
            if e.v == node[2]:
                dirs[("E", F.face, e.id)] = (-e.direction[0], -e.direction[1])
        for l in G.legs:
            if l.v == node[2]:
                dirs[("G", F.face, l.id)] = l.direction
        # smoothed strands and pass edges start from a leg of this vertex
        for k in keys:
            if k not in dirs and k[0] == "S":
                j = L.junction(k[1:3])
                pair = j.pairing[k[3]] if j.pairing else (0, 1)
                for p in pair:
                    f, lid = j.ports[p]
                    if f == F.face and ("G", f, lid) in dirs and G.legs[lid].v == node[2]:
                        dirs[k] = dirs.pop(("G", f, lid))
        return sorted(keys, key=lambda k: _angle(dirs[k]))
    if node[0] == "J":
        j = L.junction(node[1:3])
        if len(node) == 3:
            order = [("G",) + p for p in j.ports]
        else:
            pair = j.pairing[node[3]]
            order = [("G",) + j.ports[p] for p in pair] + [("R", j.edge, j.index)]
        return [k for k in order if k in keys]
    raise InconsistentInput(f"no monodromy at {node}")


_conj_cache: dict = {}


def _transport(a: Matrix, b: Matrix) -> Matrix:
    key = (a, b)
    if key not in _conj_cache:
        P = find_conjugator(inverse(a), b, max_len=3)
        if P is None:
            raise InconsistentInput(f"no basis change relates {a} and {b}")
        _conj_cache[key] = P
    return _conj_cache[key]


def assign_monodromy(L: AssembledLocus) -> FibrationDatum:
    """Standard triples at every vertex and a transport for every edge."""
    g = locus_graph(L)
    vm = {}
    for n, data in g.nodes(data=True):
        t = data.get("type")
        if t == "END":
            continue
        if t not in (TYPE_II, TYPE_III) or g.degree(n) != 3:
            raise NonTrivalentVertex(f"vertex {n} of type {t} and valence {g.degree(n)}")
        order = _half_edge_order(L, g, n)
        if len(order) != 3:
            raise NonTrivalentVertex(f"vertex {n} has a loop or repeated edge")
        vm[n] = tuple(zip(order, standard_triple(t)))
    em = {}
    for u, v, k in g.edges(keys=True):
        mats = {}
        for n in (u, v):
            if n in vm:
                mats[n] = dict(vm[n])[k]
        ends = [n for n in (u, v) if n in vm]
        if not ends:
            continue
        a = ends[0]
        b = ends[1] if len(ends) > 1 else None
        em[k] = EdgeMonodromy(k, a, b, mats[a], mats[b] if b else None,
                              _transport(mats[a], mats[b]) if b else None)
    return FibrationDatum(L, vm, em)


def check_datum(F: FibrationDatum) -> list[str]:
    """Every violated invariant of a fibration datum, as text."""
    out = []
    for n, t in F.triples():
        if not vertex_consistent(*t):
            out.append(f"vertex {n}: triple not consistent")
    for k, e in F.edge_monodromy.items():
        for m in (e.at_u, e.at_v):
            if m is not None and not is_type_I(m):
                out.append(f"edge {k}: matrix {m} is not of type I")
        if e.transport is not None:
            P, a, b = e.transport, inverse(e.at_u), e.at_v
            from .monodromy import matmul
            if matmul(P, a) != matmul(b, P):
                out.append(f"edge {k}: transport does not conjugate")
    return out


# -- locus file ----------------------------------------------------------------------

def _fmt_pairing(p) -> str:
    return "/".join(f"{a},{b}" for a, b in p)


def format_locus(L: AssembledLocus) -> str:
    lines = []
    for e in L.edges:
        lines.append(" ".join(["BASEEDGE", str(e.id), e.label, str(e.vertices[0]), str(e.vertices[1])]
                              + [str(f) for f in e.faces]))
    for F in L.faces:
        lines.append(f"FACE {F.face} {F.label}")
        lines.append("POLYGON " + " ".join(f"{x} {y}" for x, y in F.polygon))
        if F.weights is not None:
            lines += [f"WEIGHT {m[0]} {m[1]} : {v}" for m, v in F.weights.items()]
        lines += format_graph(F.graph).splitlines()
    for j in L.junctions:
        parts = ["JUNCTION", str(j.edge), str(j.index), str(j.param), j.state]
        if j.types:
            parts.append("types=" + ",".join(j.types))
        if j.pairing:
            parts.append("pairing=" + _fmt_pairing(j.pairing))
        if j.planes:
            parts.append("planes=" + ",".join(j.planes))
        lines.append(" ".join(parts))
        for f, lid in j.ports:
            lines.append(f"GLUE {j.edge} {f} {lid} {j.index}")
    return "\n".join(lines) + "\n"


def parse_locus(text: str) -> AssembledLocus:
    edges = []
    faces = []
    junctions = []
    cur = None   # (id, label, polygon, weights, graph lines)
    ports: dict[tuple[int, int], list] = {}

    def flush():
        if cur is None:
            return
        fid, label, poly, wts, glines = cur
        G = parse_graph("\n".join(glines))
        faces.append(FaceLocus(fid, label, poly, WeightFunction(wts) if wts else None, G))

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        f = line.split()
        try:
            if f[0] == "BASEEDGE":
                edges.append(BaseEdge(int(f[1]), (int(f[3]), int(f[4])), f[2], tuple(int(x) for x in f[5:])))
            elif f[0] == "FACE":
                flush()
                cur = (int(f[1]), f[2], (), {}, [])
            elif f[0] == "POLYGON":
                xs = [int(x) for x in f[1:]]
                cur = (cur[0], cur[1], tuple(zip(xs[::2], xs[1::2])), cur[3], cur[4])
            elif f[0] == "WEIGHT":
                lhs, rhs = line[len("WEIGHT"):].split(":")
                m1, m2 = (int(x) for x in lhs.split())
                cur[3][(m1, m2)] = Fraction(rhs.strip())
            elif f[0] in ("VERTEX", "EDGE", "LEG"):
                if cur is None:
                    raise FormatError(f"line {lineno}: graph record outside a FACE section")
                cur[4].append(line)
            elif f[0] == "JUNCTION":
                flush()
                cur = None
                kw = dict(x.split("=", 1) for x in f[5:])
                pairing = None
                if "pairing" in kw:
                    pairing = tuple(tuple(int(y) for y in p.split(",")) for p in kw["pairing"].split("/"))
                junctions.append(Junction(int(f[1]), int(f[2]), Fraction(f[3]), (), f[4],
                                          tuple(kw["types"].split(",")) if "types" in kw else (),
                                          pairing,
                                          tuple(kw["planes"].split(",")) if "planes" in kw else None))
            elif f[0] == "GLUE":
                e, face, lid, idx = (int(x) for x in f[1:5])
                ports.setdefault((e, idx), []).append((face, lid))
            else:
                raise FormatError(f"line {lineno}: unknown record {f[0]!r}")
        except (ValueError, IndexError, TypeError) as exc:
            raise FormatError(f"line {lineno}: malformed record ({exc})") from None
    flush()
    junctions = tuple(replace(j, ports=tuple(ports.get(j.key, ()))) for j in junctions)
    return AssembledLocus(tuple(edges), tuple(faces), junctions)


def write_locus(L: AssembledLocus, path: str | Path) -> None:
    Path(path).write_text(format_locus(L))


def read_locus(path: str | Path) -> AssembledLocus:
    return parse_locus(Path(path).read_text())
