"""Independent reference computations used only by the tests.

Each oracle takes a different route from the library: brute force over
triples instead of pivoting, floating-point qhull instead of exact subset
enumeration, closed-form amoebas instead of root finding.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.spatial import ConvexHull


# -- lower hull by brute force ---------------------------------------------------

def lower_hull_cells(points, w) -> set[frozenset]:
    """Cells of the regular subdivision as sets of their corner points.

    Every non-collinear triple spans a plane; it is a lower facet when all
    lifted points lie on or above it. Coplanar lower triples are merged,
    and each cell is reported by the corners of its convex hull.
    """
    pts = [tuple(p) for p in points]
    planes = {}
    for a, b, c in itertools.combinations(pts, 3):
        det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if det == 0:
            continue
        # height = h0 + h1 x + h2 y through the three lifted points
        M = [[1, a[0], a[1]], [1, b[0], b[1]], [1, c[0], c[1]]]
        rhs = [Fraction(w(a)), Fraction(w(b)), Fraction(w(c))]
        coef = _solve3(M, rhs)
        if all(Fraction(w(p)) >= coef[0] + coef[1] * p[0] + coef[2] * p[1] for p in pts):
            on = frozenset(p for p in pts if Fraction(w(p)) == coef[0] + coef[1] * p[0] + coef[2] * p[1])
            planes[tuple(coef)] = on
    return {frozenset(_hull_corners(on)) for on in planes.values()}


def _solve3(M, rhs):
    M = [[Fraction(x) for x in row] + [r] for row, r in zip(M, rhs)]
    n = 3
    for i in range(n):
        piv = next(r for r in range(i, n) if M[r][i] != 0)
        M[i], M[piv] = M[piv], M[i]
        for r in range(n):
            if r != i and M[r][i] != 0:
                f = M[r][i] / M[i][i]
                M[r] = [x - f * y for x, y in zip(M[r], M[i])]
    return [M[i][n] / M[i][i] for i in range(n)]


def _hull_corners(points) -> list:
    pts = sorted(set(points))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


# -- dual polytope through qhull --------------------------------------------------

def dual_by_qhull(vertices, box: int = 6) -> set[tuple[int, ...]]:
    """Vertices of ``{n : <m, n> >= -1 for all m}``, from the integer points of a box.

    Only valid when the dual is a lattice polytope inside the box.
    """
    V = np.array(vertices, dtype=float)
    dim = V.shape[1]
    rng = range(-box, box + 1)
    pts = np.array([p for p in itertools.product(rng, repeat=dim) if np.all(V @ np.array(p) >= -1 - 1e-9)])
    hull = ConvexHull(pts)
    return {tuple(int(x) for x in pts[i]) for i in hull.vertices}


def count_points_qhull(vertices, box_pad: int = 1) -> int:
    """Lattice points of ``conv(vertices)`` (full-dimensional), via qhull facet equations."""
    V = np.array(vertices, dtype=float)
    hull = ConvexHull(V)
    lo, hi = V.min(axis=0).astype(int) - box_pad, V.max(axis=0).astype(int) + box_pad
    grid = np.array(list(itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])), dtype=float)
    inside = np.all(grid @ hull.equations[:, :-1].T + hull.equations[:, -1] <= 1e-9, axis=1)
    return int(inside.sum())


# -- amoeba of a line ----------------------------------------------------------------

def in_line_amoeba(x: float, y: float, a: float, b: float, c: float, slack: float = 1e-9) -> bool:
    """``(x, y)`` is in the log-amoeba of ``a + b z1 + c z2 = 0`` iff the three
    moduli satisfy the triangle inequalities."""
    r = sorted([abs(a), abs(b) * math.exp(x), abs(c) * math.exp(y)])
    return r[2] <= (r[0] + r[1]) * (1 + slack)


# -- corner locus numerically ---------------------------------------------------------

def tropical_vertices(points, w, tol: float = 1e-9) -> set[tuple[float, float]]:
    """Points ``u`` where ``min_m (w(m) - <m, u>)`` is attained by three
    non-collinear monomials, found by brute force over triples."""
    out = set()
    pts = [tuple(p) for p in points]
    wf = {p: float(w(p)) for p in pts}
    for a, b, c in itertools.combinations(pts, 3):
        A = np.array([[a[0] - b[0], a[1] - b[1]], [a[0] - c[0], a[1] - c[1]]], dtype=float)
        if abs(np.linalg.det(A)) < 1e-12:
            continue
        u = np.linalg.solve(A, [wf[a] - wf[b], wf[a] - wf[c]])
        vals = {p: wf[p] - p[0] * u[0] - p[1] * u[1] for p in pts}
        m = min(vals.values())
        if abs(vals[a] - m) < tol:
            out.add((round(float(u[0]), 9), round(float(u[1]), 9)))
    return out


# -- Fubini-Study metric from its potential ------------------------------------------

def fs_real_metric_fd(w: np.ndarray, h: float = 1e-4) -> np.ndarray:
    """Real Gram matrix of the Fubini-Study metric on the basis
    ``(e_1, .., e_n, i e_1, .., i e_n)``, from central second differences of
    the Kahler potential ``log(1 + |w|^2)``.

    For a Kahler metric ``g(U, U) = (1/2) (Hess phi(U, U) + Hess phi(iU, iU))``.
    """
    n = len(w)
    basis = [np.eye(n, dtype=complex)[k] for k in range(n)] + [1j * np.eye(n, dtype=complex)[k] for k in range(n)]

    def phi(x):
        return math.log(1.0 + float(np.vdot(x, x).real))

    def hess(u, v):
        return (phi(w + h * u + h * v) - phi(w + h * u - h * v) - phi(w - h * u + h * v)
                + phi(w - h * u - h * v)) / (4 * h * h)

    G = np.zeros((2 * n, 2 * n))
    for a, u in enumerate(basis):
        for b, v in enumerate(basis):
            G[a, b] = 0.5 * (hess(u, v) + hess(1j * u, 1j * v))
    return G


# -- symplectic reduction on the resolved conifold --------------------------------------

def kahler_omega_fd(phi, x: np.ndarray, A: np.ndarray, B: np.ndarray, h: float = 1e-4) -> float:
    """``omega(A, B)`` for the Kahler form with potential ``phi`` normalized so
    that ``phi = |z|^2`` gives ``Im(conj(A) B)``.

    Uses ``omega(A, B) = g(iA, B)`` and ``g(U, W) = (Hess(U, W) + Hess(iU, iW)) / 4``.
    """
    def hess(u, v):
        return (phi(x + h * u + h * v) - phi(x + h * u - h * v) - phi(x - h * u + h * v)
                + phi(x - h * u - h * v)) / (4 * h * h)

    U = 1j * A
    return 0.25 * (hess(U, B) + hess(1j * U, 1j * B))


def action_generator_fd(act_in_chart, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Chart components of ``d/dtheta`` of a one-parameter action at ``theta = 0``."""
    return (act_in_chart(x, h) - act_in_chart(x, -h)) / (2 * h)
