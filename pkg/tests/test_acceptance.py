"""Acceptance criteria 1-9. Each test records one PASS/FAIL line."""

from __future__ import annotations

import contextlib
import math
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from conftest import ACCEPTANCE_LINES

DATA = Path(__file__).resolve().parent.parent / "data"
WINDOW = (-3.0, 3.0, -3.0, 3.0)


@contextlib.contextmanager
def criterion(k: int, title: str, budget: float):
    t0 = time.perf_counter()
    status, note = "FAIL", ""
    try:
        yield
        dt = time.perf_counter() - t0
        if dt >= budget:
            note = f" (runtime {dt:.2f}s over budget {budget:g}s)"
            raise AssertionError(f"criterion {k} took {dt:.2f}s, budget {budget:g}s")
        status = "PASS"
        note = f" ({dt:.2f}s)"
    except BaseException as exc:
        if not note:
            note = f" ({type(exc).__name__}: {exc})"
        raise
    finally:
        line = f"{status} criterion {k}: {title}{note}"
        ACCEPTANCE_LINES.append(line)
        print(line)


def _same_class(a, b, gen) -> bool:
    """``a - b`` is an integer multiple of ``gen``."""
    d = [x - y for x, y in zip(a, b)]
    k = next((Fraction(x, g) for x, g in zip(d, gen) if g), Fraction(0))
    return k.denominator == 1 and all(x == k * g for x, g in zip(d, gen))


def test_criterion_1_gr24_golden_data():
    from torusfib.lattice import dual_polytope
    from torusfib.lattice.gr24 import (
        EDGE_INTERIOR_POINTS, I_VECTORS, M1_MINUS_M2, W_VECTORS, charts, delta_s_dual, face_by_labels,
    )
    with criterion(1, "Gr(2,4) dual vertices and face point counts", 1.0):
        ch = charts()
        D = dual_polytope(delta_s_dual(), convention="polar")
        lifts = [ch.m_lift(v) for v in D.vertices]
        # every returned vertex is one listed I, up to the quotient by m1 - m2
        matched = {name for u in lifts for name, I in I_VECTORS.items() if _same_class(u, I, M1_MINUS_M2)}
        assert len(D.vertices) == 6 and matched == set(I_VECTORS)
        # and pairs to at most 1 with every w, with equality on a facet
        for u in lifts:
            assert max(sum(a * b for a, b in zip(u, w)) for w in W_VECTORS.values()) == 1
        for labels, listed in EDGE_INTERIOR_POINTS.items():
            f = face_by_labels(D, labels)
            ends = {D.vertices[i] for i in f.vertices}
            inner = [ch.m_lift(p) for p in D.integral_points(f) if p not in ends]
            assert len(inner) == 3 == len(listed)
            assert all(any(_same_class(u, q, M1_MINUS_M2) for q in listed) for u in inner)
        assert len(D.integral_points(face_by_labels(D, ("I1", "I2", "I3")))) == 15
        assert len(D.integral_points(face_by_labels(D, ("I3", "I4", "I6", "I5")))) == 25


def test_criterion_2_spine_counts():
    import networkx as nx
    from torusfib.lattice import newton_polygon
    from torusfib.spine import betti1, dual_spine, legs_per_polygon_edge, trivalent_count
    from torusfib.subdivision import quadratic_weights, regular_subdivision
    with criterion(2, "spine holes, legs and 3-valent vertices for d = 1..6", 1.0):
        for d in range(1, 7):
            w = quadratic_weights(d)
            G = dual_spine(regular_subdivision(newton_polygon(d), w), w)
            g = nx.Graph()
            g.add_nodes_from(v.id for v in G.vertices)
            g.add_edges_from((e.u, e.v) for e in G.edges)
            holes = len(nx.cycle_basis(g))
            assert betti1(G) == holes == (d - 1) * (d - 2) // 2
            assert legs_per_polygon_edge(G) == {0: d, 1: d, 2: d}
            assert trivalent_count(G) == sum(1 for v in G.vertices if G.valence(v.id) == 3) == d * d


def test_criterion_3_quintic_assembly():
    from torusfib.assembly import classify_vertices, euler_characteristic
    from torusfib.datasets import quintic_locus
    from torusfib.duality import dualize_locus
    with criterion(3, "quintic (nII, nIII) = (250, 50), chi = -200, and the dual", 5.0):
        L = quintic_locus()
        c = classify_vertices(L)
        assert (c.n_II, c.n_III) == (250, 50) and euler_characteristic(L) == -200
        D = dualize_locus(L)
        cd = classify_vertices(D)
        assert (cd.n_II, cd.n_III) == (50, 250) and euler_characteristic(D) == 200
        assert dualize_locus(D) == L


def test_criterion_4_monodromy():
    from torusfib.monodromy import TYPE_II, TYPE_III, standard_triple
    with criterion(4, "monodromy triples: products, transposes, unipotency", 1.0):
        A, B = standard_triple(TYPE_II), standard_triple(TYPE_III)
        I = np.eye(3, dtype=np.int64)
        for T in (A, B):
            M = [np.array(x, dtype=np.int64) for x in T]
            assert np.array_equal(M[0] @ M[1] @ M[2], I)
            for X in M:
                N = X - I
                assert np.array_equal(N @ N @ N, np.zeros((3, 3), dtype=np.int64))
        assert all(np.array_equal(np.array(a).T, np.array(b)) for a, b in zip(A, B))


def test_criterion_5_amoeba_convergence():
    from torusfib.amoeba import CurveSpec, hausdorff_distance, sample_amoeba
    from torusfib.lattice import newton_polygon
    from torusfib.spine import dual_spine
    from torusfib.subdivision import regular_subdivision, standard_weights
    with criterion(5, "d=3 amoeba distance decreases over t = 0.5, 0.3, 0.1, 0.05", 60.0):
        w = standard_weights(3)
        G = dual_spine(regular_subdivision(newton_polygon(3), w), w)
        dists = []
        for t in (0.5, 0.3, 0.1, 0.05):
            cloud = sample_amoeba(CurveSpec.standard(3, t), 2000, seed=0, window=WINDOW)
            assert len(cloud) >= 2000
            dists.append(hausdorff_distance(cloud, G, window=WINDOW))
        assert all(a > b for a, b in zip(dists, dists[1:])), dists
        assert dists[-1] < 0.3, dists


def test_criterion_6_flow_invariance():
    from torusfib.flow import (
        QuinticFamilySpec, check_hamiltonian_equality, flow_point, random_regular_point, random_start_on_infinity,
    )
    with criterion(6, "flow keeps Im(s), lands on the quintic, Hamiltonian identity holds", 60.0):
        spec = QuinticFamilySpec.generic(100.0, seed=0)
        rng = np.random.default_rng(0)
        for _ in range(20):
            tr = flow_point(spec, random_start_on_infinity(spec, rng))
            assert tr.max_im_s < 1e-5
            z = tr.end / np.linalg.norm(tr.end)
            # normalized |p_psi| at the endpoint, recomputed here from the coefficients
            mons = np.prod(z[None, :] ** spec.exponents, axis=1)
            p = spec.coeffs @ mons + spec.psi * np.prod(z)
            assert abs(p) / (np.abs(spec.coeffs) @ np.abs(mons) + abs(spec.psi * np.prod(z))) < 1e-6
        for _ in range(50):
            assert check_hamiltonian_equality(spec, random_regular_point(spec, rng), 1e-5) < 1e-6


def test_criterion_7_local_models():
    from torusfib.local_models import (
        S1R2_X, S1R2_Y, T2R_Y, LocalModelParams, check_reduction_identity, random_y_point, singular_locus_image,
    )
    with criterion(7, "reduction identity, S1R2_X lobes, two 3-valent T2R_Y junctions", 30.0):
        rng = np.random.default_rng(0)
        for model in (T2R_Y, S1R2_Y):
            P = LocalModelParams(model, delta=0.5)
            for _ in range(20):
                p = random_y_point(rng)
                for which in (1, 2):
                    assert check_reduction_identity(P, p, 1e-5, which) < 1e-6
                    ratio = check_reduction_identity(P, p, 2e-2, which) / check_reduction_identity(P, p, 1e-2, which)
                    assert 3.5 < ratio < 4.5
        eps = 1.0
        c = singular_locus_image(LocalModelParams(S1R2_X, eps=eps), 500, seed=0).cloud
        prod = c[:, 0] * c[:, 1]
        assert prod.min() >= -1e-12 and prod.max() <= eps + 1e-12 and np.abs(c[:, 2]).max() < 1e-9
        j = singular_locus_image(LocalModelParams(T2R_Y, delta=0.5), 200, seed=0).junctions()
        assert [k for _, k in j] == [3, 3]


def test_criterion_8_transitions():
    from torusfib.assembly import classify_vertices, combinatorially_equal
    from torusfib.datasets import gr24_locus, quintic_locus
    from torusfib.transitions import (
        TransitionSpec, conifold_move, flop_move, graph_delta_chi, hodge_bookkeeping, reverse_flop_edge,
    )
    with criterion(8, "flop involution, conifold round trip, bookkeeping grid", 5.0):
        L = quintic_locus()
        f = L.faces[0].face
        e = L.faces[0].graph.edges[0].id
        L1 = flop_move(L, f, e)
        assert not combinatorially_equal(L1, L)
        assert classify_vertices(L1).as_tuple() == classify_vertices(L).as_tuple()
        assert combinatorially_equal(flop_move(L1, f, reverse_flop_edge(L, f, e)), L)
        # doubling the gr24 base doubles the lattice length of edge 12, giving eight conifold sites
        smo = gr24_locus("smoothed", scale=2)
        n_sites = len(smo.sites())
        assert n_sites >= 5
        res = smo
        for k in range(n_sites):
            res = conifold_move(res, k, "resolve")
        back = smo
        for k in range(n_sites):
            back = conifold_move(conifold_move(back, k, "resolve"), k, "smooth")
        assert back == smo and classify_vertices(back) == classify_vertices(smo)
        for p in range(1, 6):
            partial = smo
            for k in range(p):
                partial = conifold_move(partial, k, "resolve")
            delta = graph_delta_chi(partial, smo)
            for alpha in range(p + 1):
                assert hodge_bookkeeping(TransitionSpec(p, alpha))[2] == delta == -2 * p


def test_criterion_9_cli_suites_and_round_trips(tmp_path):
    from torusfib.amoeba import CurveSpec, format_cloud_csv, parse_cloud_csv, sample_amoeba
    from torusfib.assembly import format_locus, parse_locus
    from torusfib.datasets import gr24_locus, quintic_locus
    from torusfib.lattice import format_polytope, parse_polytope
    from torusfib.lattice.gr24 import delta_s
    from torusfib.monodromy import TYPE_II, format_matrices, parse_matrices, standard_triple
    from torusfib.spine import dual_spine, format_graph, parse_graph
    from torusfib.lattice import newton_polygon
    from torusfib.subdivision import (
        format_subdivision, format_weights, parse_subdivision, parse_weights, regular_subdivision, standard_weights,
    )
    with criterion(9, "CLI property suites with a fixed seed; byte-stable round trips", 120.0):
        cmd = [sys.executable, "-m", "torusfib.cli", "check", "--seed", "0"]
        r1 = subprocess.run(cmd, capture_output=True, text=True)
        assert r1.returncode == 0, r1.stdout + r1.stderr
        lines = r1.stdout.splitlines()
        assert len(lines) == 8 and all(l.startswith("PASS") for l in lines)

        w = standard_weights(4)
        S = regular_subdivision(newton_polygon(4), w)
        texts = [
            (format_polytope(delta_s()), lambda t: format_polytope(parse_polytope(t))),
            (format_weights(w), lambda t: format_weights(parse_weights(t))),
            (format_subdivision(S, w), lambda t: format_subdivision(*parse_subdivision(t))),
            (format_graph(dual_spine(S, w)), lambda t: format_graph(parse_graph(t))),
            (format_matrices(standard_triple(TYPE_II)), lambda t: format_matrices(parse_matrices(t))),
            (format_cloud_csv(sample_amoeba(CurveSpec.standard(3, 0.1), 200, seed=0)),
             lambda t: format_cloud_csv(parse_cloud_csv(t))),
        ]
        texts += [(format_locus(L), lambda t: format_locus(parse_locus(t)))
                  for L in (quintic_locus(), gr24_locus("degenerate"), gr24_locus("resolved"))]
        for text, again in texts:
            once = again(text)
            assert once == text and again(once) == text

        # through the CLI: write, read back, write again
        a, b, c = tmp_path / "a.locus", tmp_path / "b.locus", tmp_path / "c.locus"
        run = lambda *args: subprocess.run([sys.executable, "-m", "torusfib.cli", *map(str, args)],
                                           capture_output=True, text=True)
        assert run("assemble", "quintic", "-o", a).returncode == 0
        assert run("dualize", a, "-o", b).returncode == 0
        assert run("dualize", b, "-o", c).returncode == 0
        assert a.read_bytes() == c.read_bytes()
        s1, s2 = tmp_path / "s1.sub", tmp_path / "s2.sub"
        assert run("subdivide", DATA / "cubic_triangle.poly", "-o", s1).returncode == 0
        g1, g2 = tmp_path / "g1.graph", tmp_path / "g2.graph"
        assert run("spine", s1, "-o", g1).returncode == 0
        assert run("subdivide", DATA / "cubic_triangle.poly", "-o", s2).returncode == 0
        assert run("spine", s2, "-o", g2).returncode == 0
        assert s1.read_bytes() == s2.read_bytes() and g1.read_bytes() == g2.read_bytes()
        # a second run with the same seed prints the same verdicts
        r2 = subprocess.run(cmd, capture_output=True, text=True)
        strip = lambda out: [l.split(" (")[0] for l in out.splitlines()]
        assert strip(r2.stdout) == strip(r1.stdout)
