"""Dual fibration data and mirror-pair checks."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace

import networkx as nx

from .assembly import AssembledLocus, EdgeMonodromy, FibrationDatum, locus_graph
from .errors import InconsistentInput
from .monodromy import dual_type, dualize, find_conjugator, vertex_consistent


def dualize_locus(L: AssembledLocus) -> AssembledLocus:
    """Swap II and III on every vertex; everything else is kept."""
    faces = []
    for F in L.faces:
        verts = tuple(replace(v, type=dual_type(v.type)) if v.type else v for v in F.graph.vertices)
        faces.append(replace(F, graph=replace(F.graph, vertices=verts)))
    junctions = tuple(replace(j, types=tuple(dual_type(t) for t in j.types)) for j in L.junctions)
    return AssembledLocus(L.edges, tuple(faces), junctions)


def dualize_fibration(F: FibrationDatum) -> FibrationDatum:
    bad = [n for n, t in F.triples() if not vertex_consistent(*t)]
    if bad:
        raise InconsistentInput(f"{len(bad)} vertex triples are not consistent, e.g. at {bad[0]}")
    vm = {n: tuple((k, dualize(m)) for k, m in items) for n, items in F.vertex_monodromy.items()}
    em = {}
    for k, e in F.edge_monodromy.items():
        em[k] = EdgeMonodromy(k, e.u, e.v, dualize(e.at_u),
                              dualize(e.at_v) if e.at_v is not None else None,
                              dualize(e.transport) if e.transport is not None else None)
    return FibrationDatum(dualize_locus(F.locus), vm, em)


@dataclass
class MirrorReport:
    violations: list[str] = field(default_factory=list)
    checked_vertices: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def text(self) -> str:
        head = f"checked {self.checked_vertices} vertices: " + ("PASS" if self.ok else f"{len(self.violations)} violations")
        return "\n".join([head] + self.violations) + "\n"


def _labelled_simple(g: nx.MultiGraph, swap: bool) -> nx.Graph:
    h = nx.Graph()
    for n, d in g.nodes(data=True):
        t = d.get("type")
        t = dual_type(t) if swap and t else t
        h.add_node(n, label=f"{t}|{d.get('stratum')}")
    for u, v in g.edges():
        if h.has_edge(u, v):
            h[u][v]["label"] = str(int(h[u][v]["label"]) + 1)
        else:
            h.add_edge(u, v, label="1")
    return h


def wl_hash(g: nx.MultiGraph, swap: bool = False) -> str:
    return nx.weisfeiler_lehman_graph_hash(_labelled_simple(g, swap), node_attr="label", edge_attr="label")


def verify_mirror_pair(F: FibrationDatum, G: FibrationDatum, iso: dict | None = None,
                       max_word: int = 3) -> MirrorReport:
    """Check that ``iso`` carries ``F`` onto a mirror of ``G``.

    Every failed check is listed; the report never raises. ``iso`` maps
    locus-graph nodes of ``F`` to those of ``G`` and defaults to the
    identity on node keys.
    """
    rep = MirrorReport()
    gf, gg = locus_graph(F.locus), locus_graph(G.locus)
    if iso is None:
        iso = {n: n for n in gf.nodes}
    # bijection
    if set(iso) != set(gf.nodes) or set(iso.values()) != set(gg.nodes) or len(set(iso.values())) != len(iso):
        rep.violations.append("iso is not a bijection between the vertex sets")
        if wl_hash(gf, swap=True) != wl_hash(gg):
            rep.violations.append("graphs are not isomorphic (Weisfeiler-Lehman hashes differ)")
        return rep
    # adjacency
    ef = Counter(frozenset((iso[u], iso[v])) for u, v in gf.edges())
    eg = Counter(frozenset((u, v)) for u, v in gg.edges())
    if ef != eg:
        diff = (ef - eg) + (eg - ef)
        rep.violations.append(f"iso is not a graph isomorphism: {sum(diff.values())} edges disagree")
        if wl_hash(gf, swap=True) != wl_hash(gg):
            rep.violations.append("graphs are not isomorphic (Weisfeiler-Lehman hashes differ)")
    # strata and types
    for n, d in gf.nodes(data=True):
        m = iso[n]
        dg = gg.nodes[m]
        if d.get("stratum") != dg.get("stratum"):
            rep.violations.append(f"vertex {n}: base stratum {d.get('stratum')} maps to {dg.get('stratum')}")
        t = d.get("type")
        if t != "END" and dual_type(t) != dg.get("type"):
            rep.violations.append(f"vertex {n}: type {t} does not correspond to {dg.get('type')}")
    # monodromy
    cache: dict = {}
    for n, items in F.vertex_monodromy.items():
        rep.checked_vertices += 1
        m = iso[n]
        if m not in G.vertex_monodromy:
            rep.violations.append(f"vertex {n}: no monodromy at image {m}")
            continue
        gitems = dict(G.vertex_monodromy[m])
        # match half-edges through the neighbour they lead to
        used = set()
        pairs = []
        for k, A in items:
            u, v = next((u, v) for u, v, kk in gf.edges(n, keys=True) if kk == k)
            other = iso[v if u == n else u]
            cand = [kk for a, b, kk in gg.edges(m, keys=True)
                    if (b if a == m else a) == other and kk not in used and kk in gitems]
            if not cand:
                break
            kk = k if k in cand else cand[0]
            used.add(kk)
            pairs.append((dualize(A), gitems[kk]))
        if len(pairs) != len(items):
            rep.violations.append(f"vertex {n}: half-edges do not correspond")
            continue
        key = tuple(pairs)
        if key not in cache:
            cache[key] = find_conjugator([a for a, _ in pairs], [b for _, b in pairs], max_len=max_word)
        if cache[key] is None:
            rep.violations.append(f"vertex {n}: monodromy is not the dual up to a basis change of word length <= {max_word}")
    return rep
