"""Command-line front end.

Exit status is 0 on success, 1 when a library contract is violated (the
error class name is printed) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import checks
from .amoeba import CurveSpec, format_cloud_csv, sample_amoeba, verify_fattening
from .assembly import (
    AssembledLocus, BaseComplex, assemble, assign_monodromy, classify_vertices, euler_characteristic,
    format_locus, read_locus,
)
from .datasets import gr24_base, gr24_locus, quintic_base, quintic_locus
from .duality import dualize_locus, verify_mirror_pair
from .errors import CompositeTypeUndefined, TorusFibError
from .flow import (
    QuinticFamilySpec, check_hamiltonian_equality, flow_point, format_trajectory_csv, random_regular_point,
    random_start_on_infinity,
)
from .lattice import dual_polytope, format_polytope, read_polytope
from .lattice.gr24 import label_of_vertex
from .local_models import (
    MODELS, LocalModelParams, check_reduction_identity, format_locus_csv, locus_svg, random_y_point,
    singular_locus_image,
)
from .monodromy import format_matrix, standard_triple, vertex_consistent
from .spine import betti1, dual_spine, format_graph, legs_per_polygon_edge, read_graph, to_svg, trivalent_count
from .subdivision import format_subdivision, read_subdivision, read_weights, regular_subdivision, standard_weights
from .lattice.polytope import newton_polygon
from .transitions import conifold_move, flop_move

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _float_list(s: str) -> list[float]:
    try:
        return [float(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}") from None


def _base(name: str) -> BaseComplex:
    if name == "quintic":
        return quintic_base()
    if name == "gr24":
        return gr24_base()
    path = Path(name)
    if not path.exists():
        raise UsageError(f"base: no such file or builtin {name!r}")
    return BaseComplex.from_polytope(read_polytope(path))


def _locus(name: str) -> AssembledLocus:
    """A locus file, or a builtin: ``quintic``, ``gr24`` / ``gr24:<state>``."""
    if name == "quintic":
        return quintic_locus()
    if name == "gr24" or name.startswith("gr24:"):
        return gr24_locus(name.split(":", 1)[1] if ":" in name else "smoothed")
    path = Path(name)
    if not path.exists():
        raise UsageError(f"locus: no such file or builtin {name!r}")
    return read_locus(path)


def _counts(L: AssembledLocus) -> str:
    c = classify_vertices(L)
    extra = " composite=" + ",".join(f"{t}:{n}" for t, n in c.composite) if c.composite else ""
    try:
        chi = str(euler_characteristic(L))
    except CompositeTypeUndefined:
        chi = "undefined"
    return f"edges={c.n_edges} II={c.n_II} III={c.n_III}{extra} chi={chi}"


# -- subcommands --------------------------------------------------------------------

def cmd_dual(a) -> int:
    P = read_polytope(a.polytope)
    D = dual_polytope(P, convention="polar" if a.polar else "dual")
    text = format_polytope(D)
    if D.ambient_dim == 4:
        lines = text.splitlines()
        out = []
        for ln in lines:
            parts = ln.split()
            if parts and parts[0] not in ("dim", "#"):
                try:
                    ln = f"{ln}  # {label_of_vertex(tuple(int(x) for x in parts))}"
                except (KeyError, ValueError):
                    pass
            out.append(ln)
        text = "\n".join(out) + "\n"
    _emit(text, a.output)
    return 0


def cmd_points(a) -> int:
    P = read_polytope(a.polytope)
    face = None
    if a.face is not None:
        try:
            idx = [int(x) for x in a.face.split(",")]
        except ValueError:
            raise UsageError(f"--face: expected vertex indices like 0,1,2, got {a.face!r}") from None
        if any(not 0 <= i < len(P.vertices) for i in idx):
            raise UsageError(f"--face: vertex index out of range 0..{len(P.vertices) - 1}")
        face = P.face_with_vertices([P.vertices[i] for i in idx])
    pts = P.integral_points(face)
    _emit("".join(" ".join(map(str, p)) + "\n" for p in pts) + f"# {len(pts)} points\n", a.output)
    return 0


def cmd_subdivide(a) -> int:
    P = read_polytope(a.polytope)
    w = read_weights(a.weights) if a.weights else None
    if w is None:
        d = _triangle_degree(P)
        w = standard_weights(d)
    S = regular_subdivision(P, w)
    _emit(format_subdivision(S, w), a.output)
    return 0


def _triangle_degree(P) -> int:
    for d in range(1, 100):
        if P == newton_polygon(d):
            return d
    raise UsageError("weights are required unless the polygon is a degree-d triangle")


def cmd_spine(a) -> int:
    S, w = read_subdivision(a.subdivision)
    G = dual_spine(S, w)
    legs = legs_per_polygon_edge(G)
    summary = (f"# betti1={betti1(G)} trivalent={trivalent_count(G)} legs_per_edge="
               + ",".join(str(legs[k]) for k in sorted(legs)) + f" balanced={str(G.is_balanced()).lower()}\n")
    if a.output:
        Path(a.output).write_text(format_graph(G))
        sys.stdout.write(summary)
    else:
        sys.stdout.write(format_graph(G) + summary)
    if a.svg:
        Path(a.svg).write_text(to_svg(G))
    return 0


def cmd_amoeba(a) -> int:
    if a.d < 1 or a.samples < 1:
        raise UsageError("--d and --samples must be positive")
    w = standard_weights(a.d)
    G = dual_spine(regular_subdivision(newton_polygon(a.d), w), w)
    specs = [CurveSpec.standard(a.d, t) for t in a.t]
    rep = verify_fattening(specs, G, a.samples, a.seed)
    sys.stdout.write(rep.table())
    if a.csv_dir:
        out = Path(a.csv_dir)
        out.mkdir(parents=True, exist_ok=True)
        for s in specs:
            (out / f"amoeba_d{a.d}_t{s.t:g}.csv").write_text(format_cloud_csv(sample_amoeba(s, a.samples, a.seed)))
    if a.svg:
        Path(a.svg).write_text(to_svg(G))
    return 0


def cmd_flow(a) -> int:
    spec = QuinticFamilySpec.generic(a.psi, seed=a.seed)
    rng = np.random.default_rng(a.seed)
    out = Path(a.csv_dir) if a.csv_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    print(f"{'traj':>4}  {'steps':>6}  {'rejected':>8}  {'max|Im s|':>10}  {'residual':>10}")
    worst_im = worst_res = 0.0
    for k in range(a.points):
        tr = flow_point(spec, random_start_on_infinity(spec, rng), tol=a.tol)
        res = spec.residual(tr.end)
        worst_im, worst_res = max(worst_im, tr.max_im_s), max(worst_res, res)
        print(f"{k:4d}  {tr.accepted:6d}  {tr.rejected:8d}  {tr.max_im_s:10.2e}  {res:10.2e}")
        if out:
            (out / f"trajectory_{k:03d}.csv").write_text(format_trajectory_csv(spec, tr))
    ham = max((check_hamiltonian_equality(spec, random_regular_point(spec, rng), a.fd_step)
               for _ in range(a.hamiltonian)), default=0.0)
    print(f"max|Im s|={worst_im:.2e} max residual={worst_res:.2e} hamiltonian={ham:.2e}")
    return 0


def cmd_assemble(a) -> int:
    base = _base(a.base)
    graphs = {}
    for spec in a.graphs:
        if "=" not in spec:
            raise UsageError(f"graphs: expected FACE=PATH, got {spec!r}")
        face, path = spec.split("=", 1)
        graphs[int(face) if face.isdigit() else face] = read_graph(path)
    L = assemble(base, graphs)
    _emit(format_locus(L), a.output)
    if a.output:
        print(_counts(L))
    return 0


def cmd_euler(a) -> int:
    print(euler_characteristic(_locus(a.locus)))
    return 0


def cmd_monodromy(a) -> int:
    T = standard_triple(a.type)
    for k, M in enumerate(T, 1):
        print(f"T{k}")
        sys.stdout.write(format_matrix(M))
    print(f"consistent: {str(vertex_consistent(*T)).lower()}")
    return 0


def cmd_dualize(a) -> int:
    L = dualize_locus(_locus(a.locus))
    _emit(format_locus(L), a.output)
    if a.output:
        print(_counts(L))
    return 0


def cmd_verify_mirror(a) -> int:
    F = assign_monodromy(_locus(a.locus_a))
    G = assign_monodromy(_locus(a.locus_b))
    rep = verify_mirror_pair(F, G, max_word=a.max_word)
    sys.stdout.write(rep.text())
    return 0 if rep.ok else 1


def cmd_move(a) -> int:
    L = _locus(a.locus)
    before = _counts(L)
    if a.flop:
        try:
            face, edge = a.site.split(":")
            edge = int(edge)
        except ValueError:
            raise UsageError("--site: a flop site is FACE:EDGE") from None
        L2 = flop_move(L, int(face) if face.isdigit() else face, edge)
    else:
        if a.dir is None:
            raise UsageError("--dir is required with --conifold")
        try:
            site = int(a.site)
        except ValueError:
            raise UsageError("--site: a conifold site is an integer index") from None
        L2 = conifold_move(L, site, a.dir)
    if a.before:
        Path(a.before).write_text(format_locus(L))
    _emit(format_locus(L2), a.output)
    if a.output:
        print(f"before: {before}")
        print(f"after:  {_counts(L2)}")
    return 0


def cmd_localmodel(a) -> int:
    P = LocalModelParams(a.model, eps=a.eps, delta=a.delta)
    img = singular_locus_image(P, a.samples, a.seed)
    print(f"model={P.model} eps={P.eps:g} delta={P.delta:g}")
    print(f"reference: {img.reference}")
    for p in img.pieces:
        print(f"{p.name}: {len(p.points)} samples")
    j = img.junctions()
    print("junctions: " + (", ".join(f"{k}-valent at ({x[0]:.6g}, {x[1]:.6g}, {x[2]:.6g})" for x, k in j) or "none"))
    if P.on_resolution:
        rng = np.random.default_rng(a.seed)
        worst = 0.0
        for _ in range(20):
            p = random_y_point(rng)
            for which in (1, 2):
                worst = max(worst, check_reduction_identity(P, p, a.fd_step, which))
        print(f"reduction identity residual: {worst:.2e}")
    if a.csv:
        Path(a.csv).write_text(format_locus_csv(img))
    if a.svg:
        Path(a.svg).write_text(locus_svg(img))
    return 0


def cmd_check(a) -> int:
    names = a.suite or list(checks.SUITES)
    unknown = [n for n in names if n not in checks.SUITES]
    if unknown:
        raise UsageError(f"suite: unknown suite {unknown[0]!r}")
    ok = True
    for n in names:
        r = checks.run(n, seed=a.seed)
        print(r.line())
        ok &= r.passed
    return 0 if ok else 1


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torusfib", description="Torus fibration toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        s = sub.add_parser(name, help=help)
        s.set_defaults(func=func)
        return s

    s = add("dual", cmd_dual, "dual of a reflexive polytope")
    s.add_argument("polytope")
    s.add_argument("--polar", action="store_true", help="use {<m,n> <= 1} instead of {<m,n> >= -1}")
    s.add_argument("-o", "--output")

    s = add("points", cmd_points, "lattice points of a polytope or face")
    s.add_argument("polytope")
    s.add_argument("--face", help="comma-separated vertex indices")
    s.add_argument("-o", "--output")

    s = add("subdivide", cmd_subdivide, "regular subdivision of a polygon")
    s.add_argument("polytope")
    s.add_argument("weights", nargs="?")
    s.add_argument("-o", "--output")

    s = add("spine", cmd_spine, "dual spine of a subdivision file")
    s.add_argument("subdivision")
    s.add_argument("-o", "--output")
    s.add_argument("--svg")

    s = add("amoeba", cmd_amoeba, "amoeba samples and distance to the spine")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--t", type=_float_list, required=True)
    s.add_argument("--samples", type=int, default=2000)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--csv-dir")
    s.add_argument("--svg")

    s = add("flow", cmd_flow, "gradient flow in the quintic family")
    s.add_argument("--psi", type=float, default=100.0)
    s.add_argument("--points", type=int, default=20)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--hamiltonian", type=int, default=50, help="number of Hamiltonian-identity sample points")
    s.add_argument("--fd-step", type=float, default=1e-5)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--csv-dir")

    s = add("assemble", cmd_assemble, "glue face spines into a locus")
    s.add_argument("base", help="polytope file, 'quintic' or 'gr24'")
    s.add_argument("graphs", nargs="*", help="FACE=PATH spine files overriding the standard face spines")
    s.add_argument("-o", "--output")

    s = add("euler", cmd_euler, "Euler characteristic of a locus")
    s.add_argument("locus")

    s = add("monodromy", cmd_monodromy, "standard monodromy triples")
    s.add_argument("--type", choices=["II", "III"], required=True)

    s = add("dualize", cmd_dualize, "swap fibre types of a locus")
    s.add_argument("locus")
    s.add_argument("-o", "--output")

    s = add("verify-mirror", cmd_verify_mirror, "check that two loci form a mirror pair")
    s.add_argument("locus_a")
    s.add_argument("locus_b")
    s.add_argument("--max-word", type=int, default=3)

    s = add("move", cmd_move, "apply a flop or conifold move")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--flop", action="store_true")
    g.add_argument("--conifold", action="store_true")
    s.add_argument("locus")
    s.add_argument("--site", required=True, help="FACE:EDGE for a flop, site index for a conifold move")
    s.add_argument("--dir", choices=["resolve", "smooth", "degenerate"])
    s.add_argument("--before", help="also write the input locus here")
    s.add_argument("-o", "--output")

    s = add("localmodel", cmd_localmodel, "explicit local fibrations near a node")
    s.add_argument("--model", choices=MODELS, required=True)
    s.add_argument("--eps", type=float, default=0.0)
    s.add_argument("--delta", type=float, default=0.0)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--fd-step", type=float, default=1e-5)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--csv")
    s.add_argument("--svg")

    s = add("check", cmd_check, "run the property suites")
    s.add_argument("suite", nargs="*", help="any of: " + ", ".join(checks.SUITES))
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (TorusFibError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
