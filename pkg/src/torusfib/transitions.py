"""Flops and conifold transitions as local rewrites of an assembled locus."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .assembly import AssembledLocus, FaceLocus, Junction, _type_face_vertices, euler_characteristic, rebuild
from .errors import (
    EulerBookkeepingViolated, InvalidSpec, NonConvexQuad, NotFloppable, NotRegular, WallOnBoundary, WrongState,
)
from .monodromy import TYPE_III, euler_number
from .spine import dual_spine
from .subdivision import diagonal_flip, find_inducing_weights, regular_subdivision
from .lattice.polytope import LatticePolytope

RESOLVE, SMOOTH, DEGENERATE = "resolve", "smooth", "degenerate"


# -- flop -----------------------------------------------------------------------

def _face_subdivision(F: FaceLocus):
    if F.weights is None:
        raise NotFloppable(f"face {F.label} carries no weight data")
    P = LatticePolytope(F.polygon)
    return P, regular_subdivision(P, F.weights)


def flop_move(L: AssembledLocus, face: int | str, edge: int) -> AssembledLocus:
    """Flop along bounded edge ``edge`` of the spine on ``face``.

    The dual wall of the face triangulation is flipped, a new inducing
    weight is solved for, and the face spine is rebuilt. Legs, and hence
    all gluing, are untouched.
    """
    F = L.face(face) if isinstance(face, int) else L.face_by_label(face)
    G = F.graph
    try:
        e = next(x for x in G.edges if x.id == edge)
    except StopIteration:
        raise NotFloppable(f"face {F.label} has no edge {edge}") from None
    if G.valence(e.u) != 3 or G.valence(e.v) != 3:
        raise NotFloppable("both endpoints must be 3-valent")
    P, S = _face_subdivision(F)
    # the wall dual to the edge: shared by the cells of both endpoints
    cu, cv = S.cells[e.u], S.cells[e.v]
    shared = sorted(set(cu.vertices) & set(cv.vertices))
    if len(shared) != 2:
        raise NotFloppable("edge is not dual to a wall of the face triangulation")
    try:
        S2 = diagonal_flip(S, shared)
    except (NonConvexQuad, WallOnBoundary) as exc:
        raise NotFloppable(str(exc)) from None
    try:
        w2 = find_inducing_weights(S2)
    except NotRegular as exc:
        raise NotFloppable(f"flipped triangulation is not regular: {exc}") from None
    H = dual_spine(S2, w2, face=F.label, check=False)
    old_legs = {(l.direction, l.param) for l in G.legs}
    by_wall = {l.wall: l for l in H.legs}
    legs = []
    # legs keep their base-edge data; copy it over by matching the exit walls
    local = dual_spine(S, F.weights, face=F.label, check=False)
    for lo, lb in zip(local.legs, G.legs):
        new = by_wall[lo.wall]
        legs.append(replace(new, id=lb.id, boundary_edge=lb.boundary_edge, param=lb.param))
    legs.sort(key=lambda l: l.id)
    H = _type_face_vertices(replace(H, legs=tuple(legs)))
    assert {(l.direction, l.param) for l in H.legs} == old_legs
    return rebuild(L, [replace(F, weights=w2, graph=H)])


def reverse_flop_edge(L: AssembledLocus, face: int | str, edge: int) -> int:
    """The edge of ``flop_move(L, face, edge)`` along which flopping undoes the move."""
    F = L.face(face) if isinstance(face, int) else L.face_by_label(face)
    e = next(x for x in F.graph.edges if x.id == edge)
    _, S = _face_subdivision(F)
    quad = set(S.cells[e.u].vertices) | set(S.cells[e.v].vertices)
    old = set(S.cells[e.u].vertices) & set(S.cells[e.v].vertices)
    new_diag = quad - old
    F2 = flop_move(L, face, edge).face(F.face)
    _, S2 = _face_subdivision(F2)
    for x in F2.graph.edges:
        if set(S2.cells[x.u].vertices) & set(S2.cells[x.v].vertices) == new_diag:
            return x.id
    raise NotFloppable("flipped wall has no dual edge")


def flop_candidates(L: AssembledLocus, face: int | str) -> list[int]:
    """Edges of the face spine along which a flop is possible."""
    F = L.face(face) if isinstance(face, int) else L.face_by_label(face)
    out = []
    for e in F.graph.edges:
        try:
            flop_move(L, F.face, e.id)
        except NotFloppable:
            continue
        out.append(e.id)
    return out


# -- conifold ------------------------------------------------------------------

OPPOSITE = ((0, 2), (1, 3))
ADJACENT = (((0, 1), (2, 3)), ((1, 2), (3, 0)))


def _site(L: AssembledLocus, site) -> Junction:
    if isinstance(site, int):
        sites = L.sites()
        if not 0 <= site < len(sites):
            raise WrongState(f"no conifold site {site}")
        return sites[site]
    j = L.junction(site)
    if len(j.ports) != 4:
        raise WrongState(f"junction {j.key} has {len(j.ports)} ports, not 4")
    return j


def _planes(L: AssembledLocus, j: Junction) -> tuple[str, str]:
    lab = {F.face: F.label for F in L.faces}
    out = []
    for a, b in OPPOSITE:
        out.append("|".join(sorted((lab[j.ports[a][0]], lab[j.ports[b][0]]))))
    return tuple(out)


def conifold_move(L: AssembledLocus, site, direction: str, pairing=ADJACENT[0],
                  types: tuple[str, str] = (TYPE_III, TYPE_III)) -> AssembledLocus:
    """Rewrite one 4-port site.

    ``resolve``: two 3-valent vertices joined by a short edge, pairing
    adjacent ports. ``smooth``: two strands joining opposite ports, on
    distinct plane labels. ``degenerate``: one 4-valent node.

    Resolved vertices must contribute ``+2`` to the Euler characteristic
    relative to the smoothing.
    """
    j = _site(L, site)
    if direction == RESOLVE:
        if j.state == "resolved":
            raise WrongState(f"site {j.key} is already resolved")
        pairing = tuple(tuple(p) for p in pairing)
        if sorted(x for p in pairing for x in p) != [0, 1, 2, 3] or pairing not in (ADJACENT + tuple(
                tuple(reversed(a)) for a in ADJACENT)):
            raise WrongState(f"pairing {pairing} does not pair adjacent ports")
        try:
            chi = sum(euler_number(t) for t in types)
        except Exception as exc:
            raise EulerBookkeepingViolated(str(exc)) from None
        if chi != 2:
            raise EulerBookkeepingViolated(f"resolved vertex types {types} contribute {chi}, not +2")
        new = replace(j, state="resolved", types=tuple(types), pairing=pairing, planes=None)
    elif direction == SMOOTH:
        if j.state == "smoothed":
            raise WrongState(f"site {j.key} is already smoothed")
        planes = _planes(L, j)
        if planes[0] == planes[1]:
            raise WrongState("smoothed strands would share a plane")
        new = replace(j, state="smoothed", types=(), pairing=OPPOSITE, planes=planes)
    elif direction == DEGENERATE:
        if j.state == "degenerate":
            raise WrongState(f"site {j.key} is already degenerate")
        new = replace(j, state="degenerate", types=("NODE",), pairing=None, planes=None)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return replace(L, junctions=tuple(new if x.key == j.key else x for x in L.junctions))


def conifold_all(L: AssembledLocus, direction: str, **kw) -> AssembledLocus:
    for k in range(len(L.sites())):
        L = conifold_move(L, k, direction, **kw)
    return L


def strands_disjoint(L: AssembledLocus) -> bool:
    """Smoothed strands at a site never share a vertex and sit on distinct planes."""
    legs = {(F.face, l.id): l.v for F in L.faces for l in F.graph.legs}
    for j in L.junctions:
        if j.state != "smoothed":
            continue
        ends = [{("F", j.ports[p][0], legs[j.ports[p]]) for p in pair} for pair in j.pairing]
        if ends[0] & ends[1] or not j.planes or j.planes[0] == j.planes[1]:
            return False
    return True


# -- Hodge bookkeeping ------------------------------------------------------------------

@dataclass(frozen=True)
class TransitionSpec:
    p: int
    alpha: int
    sites: tuple = ()


def hodge_bookkeeping(spec: TransitionSpec) -> tuple[int, int, int]:
    """``(dh11, dh21, dchi)`` when passing from the resolution to the smoothing."""
    if spec.p < 0 or not 0 <= spec.alpha <= spec.p:
        raise InvalidSpec(f"need 0 <= alpha <= p, got p={spec.p}, alpha={spec.alpha}")
    dh11 = -spec.alpha
    dh21 = spec.p - spec.alpha
    return dh11, dh21, 2 * (dh11 - dh21)


def graph_delta_chi(resolved: AssembledLocus, smoothed: AssembledLocus) -> int:
    """``chi(smoothed) - chi(resolved)`` computed from the loci."""
    return euler_characteristic(smoothed) - euler_characteristic(resolved)
