"""End-to-end property suites with fixed seeds, shared by the command line."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .amoeba import CurveSpec, verify_fattening
from .assembly import classify_vertices, combinatorially_equal, euler_characteristic
from .duality import dualize_locus
from .flow import QuinticFamilySpec, check_hamiltonian_equality, flow_point, random_regular_point, random_start_on_infinity
from .lattice import dual_polytope
from .lattice.gr24 import EDGE_INTERIOR_POINTS, FACE_POINT_COUNTS, delta_s, delta_s_dual, face_by_labels
from .local_models import (
    S1R2_X, S1R2_Y, T2R_Y, LocalModelParams, check_reduction_identity, random_y_point, singular_locus_image,
)
from .monodromy import IDENTITY, TYPE_II, TYPE_III, matmul, product, standard_triple, transpose
from .spine import betti1, dual_spine, legs_per_polygon_edge, trivalent_count
from .subdivision import regular_subdivision, standard_weights
from .lattice.polytope import newton_polygon
from .transitions import (
    TransitionSpec, conifold_all, conifold_move, flop_candidates, flop_move, graph_delta_chi, hodge_bookkeeping,
    reverse_flop_edge,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        info = ", ".join(f"{k}={v}" for k, v in self.details.items())
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} ({self.seconds:.2f}s) {info}"


def gr24_golden() -> CheckResult:
    D = dual_polytope(delta_s_dual(), convention="polar")
    ok = set(D.vertices) == set(delta_s().vertices)
    for labels, pts in EDGE_INTERIOR_POINTS.items():
        ok &= len(D.integral_points(face_by_labels(D, labels))) - 2 == len(pts)
    for labels, n in FACE_POINT_COUNTS.items():
        ok &= len(D.integral_points(face_by_labels(D, labels))) == n
    return CheckResult("gr24-golden", ok, {"vertices": len(D.vertices)})


def spine_counts(max_d: int = 6) -> CheckResult:
    ok = True
    bad = []
    for d in range(1, max_d + 1):
        w = standard_weights(d)
        G = dual_spine(regular_subdivision(newton_polygon(d), w), w)
        good = (betti1(G) == (d - 1) * (d - 2) // 2 and set(legs_per_polygon_edge(G).values()) == {d}
                and trivalent_count(G) == d * d and G.is_balanced())
        if not good:
            bad.append(d)
        ok &= good
    return CheckResult("spine-counts", ok, {"failed_degrees": bad})


def quintic_assembly() -> CheckResult:
    from .datasets import quintic_locus
    L = quintic_locus()
    c = classify_vertices(L)
    D = dualize_locus(L)
    cd = classify_vertices(D)
    ok = ((c.n_II, c.n_III) == (250, 50) and euler_characteristic(L) == -200
          and (cd.n_II, cd.n_III) == (50, 250) and euler_characteristic(D) == 200
          and dualize_locus(D) == L)
    return CheckResult("quintic-assembly", ok, {"II": c.n_II, "III": c.n_III, "chi": euler_characteristic(L)})


def monodromy_triples() -> CheckResult:
    A, B = standard_triple(TYPE_II), standard_triple(TYPE_III)
    ok = product(A) == IDENTITY and product(B) == IDENTITY
    ok &= all(transpose(a) == b for a, b in zip(A, B))
    for T in A + B:
        N = tuple(tuple(T[i][j] - IDENTITY[i][j] for j in range(3)) for i in range(3))
        ok &= matmul(matmul(N, N), N) == ((0,) * 3,) * 3
    return CheckResult("monodromy", ok)


def amoeba_convergence(samples: int = 2000, seed: int = 0) -> CheckResult:
    w = standard_weights(3)
    G = dual_spine(regular_subdivision(newton_polygon(3), w), w)
    rep = verify_fattening([CurveSpec.standard(3, t) for t in (0.5, 0.3, 0.1, 0.05)], G, samples, seed)
    dists = [d for _, d in rep.rows]
    ok = bool(rep.monotone) and dists[-1] < 0.3
    return CheckResult("amoeba", ok, {"distances": [round(d, 4) for d in dists]})


def flow_invariance(trajectories: int = 20, points: int = 50, seed: int = 0) -> CheckResult:
    spec = QuinticFamilySpec.generic(100.0, seed=seed)
    rng = np.random.default_rng(seed)
    im, res = 0.0, 0.0
    for _ in range(trajectories):
        tr = flow_point(spec, random_start_on_infinity(spec, rng))
        im = max(im, tr.max_im_s)
        res = max(res, spec.residual(tr.end))
    ham = max(check_hamiltonian_equality(spec, random_regular_point(spec, rng), 1e-5) for _ in range(points))
    ok = im < 1e-5 and res < 1e-6 and ham < 1e-6
    return CheckResult("flow", ok, {"max_im_s": f"{im:.2e}", "residual": f"{res:.2e}", "hamiltonian": f"{ham:.2e}"})


def local_models(points: int = 20, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst, ratio = 0.0, np.inf
    for model in (T2R_Y, S1R2_Y):
        P = LocalModelParams(model, delta=0.5)
        for _ in range(points):
            p = random_y_point(rng)
            for which in (1, 2):
                r = check_reduction_identity(P, p, 1e-5, which)
                a = check_reduction_identity(P, p, 2e-2, which)
                b = check_reduction_identity(P, p, 1e-2, which)
                worst = max(worst, r)
                ratio = min(ratio, a / b)
    img = singular_locus_image(LocalModelParams(S1R2_X, eps=1.0), 500, seed)
    c = img.cloud
    prod = c[:, 0] * c[:, 1]
    lobes = bool((c[:, 0] > 0).any() and (c[:, 0] < 0).any())
    s1 = bool(prod.min() >= -1e-9 and prod.max() <= 1 + 1e-9 and np.abs(c[:, 2]).max() < 1e-9 and lobes)
    j = singular_locus_image(LocalModelParams(T2R_Y, delta=0.5), 200, seed).junctions()
    ok = worst < 1e-6 and ratio > 3.5 and s1 and [k for _, k in j] == [3, 3]
    return CheckResult("local-models", ok, {"residual": f"{worst:.2e}", "halving_ratio": round(float(ratio), 2),
                                            "junctions": [k for _, k in j]})


def transitions() -> CheckResult:
    from .datasets import gr24_locus, quintic_locus
    L = quintic_locus()
    c0 = classify_vertices(L)
    f = L.faces[0].face
    e = flop_candidates(L, f)[0]
    L1 = flop_move(L, f, e)
    L2 = flop_move(L1, f, reverse_flop_edge(L, f, e))
    flop_ok = classify_vertices(L1) == c0 and combinatorially_equal(L2, L)
    G = gr24_locus("degenerate", scale=2)
    res = conifold_all(G, "resolve")
    sm = conifold_all(G, "smooth")
    round_ok = classify_vertices(conifold_all(conifold_all(res, "smooth"), "resolve")) == classify_vertices(res)
    grid_ok = len(G.sites()) >= 5
    for p in range(1, 6):
        part = sm
        for k in range(p):
            part = conifold_move(part, k, "resolve")
        delta = graph_delta_chi(part, sm)
        grid_ok &= all(delta == hodge_bookkeeping(TransitionSpec(p, a))[2] == -2 * p for a in range(p + 1))
    return CheckResult("transitions", flop_ok and round_ok and grid_ok,
                       {"flop": flop_ok, "round_trip": round_ok, "grid": grid_ok})


SUITES: dict[str, Callable[..., CheckResult]] = {
    "gr24": gr24_golden,
    "spine": spine_counts,
    "quintic": quintic_assembly,
    "monodromy": monodromy_triples,
    "amoeba": amoeba_convergence,
    "flow": flow_invariance,
    "localmodel": local_models,
    "transitions": transitions,
}


def run(name: str, seed: int = 0) -> CheckResult:
    f = SUITES[name]
    t0 = time.perf_counter()
    kw = {"seed": seed} if name in ("amoeba", "flow", "localmodel") else {}
    r = f(**kw)
    r.seconds = time.perf_counter() - t0
    return r
