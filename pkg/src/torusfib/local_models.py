"""Explicit local fibrations near a conifold point.

``X_eps = {z1 z2 - z3 z4 = eps}`` and its small resolution
``Y = {t1 z1 = t2 z3, t2 z2 = t1 z4}``. A point of ``Y`` is a pair
``(z, t)`` with ``t = t2 / t1`` in ``C u {inf}`` (``math.inf`` for the pole).

Two charts cover ``Y``: ``(z2, z3, t)`` with ``z1 = t z3, z4 = t z2`` and
``(z1, z4, s)`` with ``s = 1/t``, ``z3 = s z1, z2 = s z4``.

Conventions: a holomorphic field ``W = sum w_k d/dz_k`` has real part
``2 Re W`` with complex components ``w_k``, so ``2 Im W`` has components
``-i w_k``; ``iota(v) omega = omega(v, .)``; and
``(i/2) dz ^ dzbar (A, B) = Im(conj(A) B)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NotOnVariety, OnStabilizerLocus

T2R_Y, T2R_X, S1R2_Y, S1R2_X = "T2R_Y", "T2R_X", "S1R2_Y", "S1R2_X"
MODELS = (T2R_Y, T2R_X, S1R2_Y, S1R2_X)
VARIETY_TOL = 1e-10


@dataclass(frozen=True)
class LocalModelParams:
    model: str
    eps: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if not (math.isfinite(self.eps) and math.isfinite(self.delta)) or self.eps < 0 or self.delta < 0:
            raise ValueError("eps and delta must be finite and nonnegative")

    @property
    def on_resolution(self) -> bool:
        return self.model.endswith("_Y")


@dataclass(frozen=True)
class YPoint:
    z: tuple[complex, complex, complex, complex]
    t: complex | float   # math.inf at the pole

    @property
    def at_infinity(self) -> bool:
        return isinstance(self.t, float) and math.isinf(self.t)

    @property
    def fs_term(self) -> float:
        """``1 / (1 + |t|^2)``."""
        return 0.0 if self.at_infinity else 1.0 / (1.0 + abs(self.t) ** 2)


def y_point_t_chart(z2: complex, z3: complex, t: complex) -> YPoint:
    return YPoint((t * z3, z2, z3, t * z2), t)


def y_point_s_chart(z1: complex, z4: complex, s: complex) -> YPoint:
    t = math.inf if s == 0 else 1 / s
    return YPoint((z1, s * z4, s * z1, z4), t)


def y_residual(p: YPoint) -> float:
    z1, z2, z3, z4 = p.z
    if p.at_infinity:
        return max(abs(z3), abs(z2))
    return max(abs(z1 - p.t * z3), abs(p.t * z2 - z4))


def x_residual(z: Sequence[complex], eps: float) -> float:
    z1, z2, z3, z4 = z
    return abs(z1 * z2 - z3 * z4 - eps)


def rho(params: LocalModelParams, point) -> tuple[float, float, float]:
    m = params.model
    if params.on_resolution:
        if not isinstance(point, YPoint):
            raise NotOnVariety("resolution models need a YPoint")
        scale = 1.0 + max(abs(x) for x in point.z)
        if y_residual(point) > VARIETY_TOL * scale:
            raise NotOnVariety(f"residual {y_residual(point):.3g}")
        z1, z2, z3, z4 = point.z
        c = params.delta * point.fs_term
        if m == T2R_Y:
            return (abs(z1) ** 2 - abs(z2) ** 2 - c, abs(z3) ** 2 - abs(z4) ** 2 + c, (z1 * z2 + z3 * z4).real)
        return (z1.real, z2.real, abs(z3) ** 2 - abs(z4) ** 2 + c)
    z = tuple(complex(x) for x in (point.z if isinstance(point, YPoint) else point))
    scale = 1.0 + max(abs(x) for x in z) ** 2
    if x_residual(z, params.eps) > VARIETY_TOL * scale:
        raise NotOnVariety(f"residual {x_residual(z, params.eps):.3g}")
    z1, z2, z3, z4 = z
    if m == T2R_X:
        return (abs(z1) ** 2 - abs(z2) ** 2, abs(z3) ** 2 - abs(z4) ** 2, (z1 * z2 + z3 * z4).real)
    return (z1.real, z2.real, abs(z3) ** 2 - abs(z4) ** 2)


def act(params: LocalModelParams, point, angles: Sequence[float]):
    """The torus (``T2R``) or circle (``S1R2``) action."""
    if params.model.startswith("T2R"):
        a, b = (complex(math.cos(x), math.sin(x)) for x in angles[:2])
        ta = a / b
        za = (a, 1 / a, b, 1 / b)
    else:
        b = complex(math.cos(angles[0]), math.sin(angles[0]))
        ta = 1 / b
        za = (1, 1, b, 1 / b)
    if isinstance(point, YPoint):
        z = tuple(f * x for f, x in zip(za, point.z))
        return YPoint(z, point.t if point.at_infinity else ta * point.t)
    return tuple(f * x for f, x in zip(za, point))


# -- random points -------------------------------------------------------------------

def random_y_point(rng: np.random.Generator, scale: float = 1.0) -> YPoint:
    c = lambda: complex(*rng.standard_normal(2)) * scale
    return y_point_t_chart(c(), c(), c())


def random_x_point(rng: np.random.Generator, eps: float, scale: float = 1.0) -> tuple:
    while True:
        z1, z2, z3 = (complex(*rng.standard_normal(2)) * scale for _ in range(3))
        if abs(z3) > 0.1:
            return (z1, z2, z3, (z1 * z2 - eps) / z3)


def vanishing_circle_point(eps: float, theta: float) -> tuple:
    """A point of the vanishing circle of the ``S1R2_X`` model.

    Lying on ``z1 z2 = eps`` forces opposite phases on ``z1`` and ``z2``.
    """
    r = math.sqrt(eps)
    return (r * complex(math.cos(theta), math.sin(theta)), r * complex(math.cos(theta), -math.sin(theta)), 0j, 0j)


# -- singular locus ---------------------------------------------------------------------

@dataclass
class LocusPiece:
    name: str
    points: np.ndarray            # (k, 3) images
    finite_ends: list[np.ndarray] = field(default_factory=list)

    @property
    def length(self) -> float:
        if len(self.points) < 2:
            return 0.0
        return float(np.max(np.linalg.norm(self.points - self.points[0], axis=1)))


@dataclass
class LocusImage:
    params: LocalModelParams
    pieces: list[LocusPiece]
    reference: str

    @property
    def cloud(self) -> np.ndarray:
        return np.vstack([p.points for p in self.pieces])

    def junctions(self, tol: float = 1e-9) -> list[tuple[np.ndarray, int]]:
        """Points where the finite ends of three or more nondegenerate pieces meet."""
        ends = [(e, p.name) for p in self.pieces if p.length > tol for e in p.finite_ends]
        clusters: list[list] = []
        for e, name in ends:
            for cl in clusters:
                if np.linalg.norm(cl[0][0] - e) <= tol:
                    cl.append((e, name))
                    break
            else:
                clusters.append([(e, name)])
        return [(cl[0][0], len(cl)) for cl in clusters if len(cl) >= 3]


def _moduli(n: int, rmax: float, rng) -> np.ndarray:
    return np.concatenate([[0.0], np.sort(rng.uniform(0, rmax, n - 1))]) if n > 1 else np.array([0.0])


def _phases(n: int, rng) -> np.ndarray:
    return np.exp(1j * rng.uniform(0, 2 * math.pi, n))


def singular_locus_image(params: LocalModelParams, n: int = 200, seed: int = 0, rmax: float = 2.0) -> LocusImage:
    """Sample the stabilizer locus and map it by :func:`rho`."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    m, eps, delta = params.model, params.eps, params.delta
    pieces: list[LocusPiece] = []

    def mapped(pts):
        return np.array([rho(params, p) for p in pts])

    if m == T2R_Y:
        # Gamma_0: z = 0, t over CP^1 (including both poles)
        ts = [0j] + list(np.tan(rng.uniform(0, math.pi / 2, n - 2)) * _phases(n - 2, rng)) + [math.inf]
        g0 = [YPoint((0j,) * 4, t) for t in ts]
        pieces.append(LocusPiece("Gamma0", mapped(g0), [np.array(rho(params, g0[0])), np.array(rho(params, g0[-1]))]))
        for i, name in ((1, "Gamma1"), (2, "Gamma2"), (3, "Gamma3"), (4, "Gamma4")):
            vals = _moduli(n, rmax, rng) * _phases(n, rng)
            pts = []
            for v in vals:
                z = [0j] * 4
                z[i - 1] = complex(v)
                # z1, z4 nonzero force t = inf; z2, z3 force t = 0
                pts.append(YPoint(tuple(z), math.inf if i in (1, 4) else 0j))
            img = mapped(pts)
            pieces.append(LocusPiece(name, img, [img[0]]))
        ref = "Gamma0 segment (-delta,delta)-(0,0); rays +rho1, -rho2 from (0,0); -rho1, +rho2 from (-delta,delta); rho3 = 0"
    elif m == T2R_X:
        r = np.exp(rng.uniform(-2, 2, n)) * 1.0
        ph = _phases(n, rng)
        a = [(x * p, eps / (x * p), 0j, 0j) for x, p in zip(r, ph)]
        b = [(0j, 0j, x * p, -eps / (x * p)) for x, p in zip(r, ph)]
        pieces.append(LocusPiece("Delta12", mapped(a)))
        pieces.append(LocusPiece("Delta34", mapped(b)))
        ref = "lines (s, 0, eps) and (0, s, -eps)"
    elif m == S1R2_Y:
        for i, name, t in ((1, "Gamma1", math.inf), (2, "Gamma2", 0j)):
            vals = (rng.uniform(-rmax, rmax, n) + 1j * rng.uniform(-rmax, rmax, n))
            pts = []
            for v in vals:
                z = [0j] * 4
                z[i - 1] = complex(v)
                pts.append(YPoint(tuple(z), t))
            pieces.append(LocusPiece(name, mapped(pts)))
        ref = "Gamma1 = {rho2 = rho3 = 0}; Gamma2 = {rho1 = 0, rho3 = delta}"
    else:
        r = np.exp(rng.uniform(-2, 2, n))
        ph = _phases(n, rng)
        pts = [(x * p, eps / (x * p), 0j, 0j) for x, p in zip(r, ph)]
        pieces.append(LocusPiece("Delta_eps", mapped(pts)))
        ref = "{0 <= rho1 rho2 <= eps, rho3 = 0}"
    return LocusImage(params, pieces, ref)


# -- reduction identity -------------------------------------------------------------------

def _chart_data(p: YPoint, chart: str):
    """Chart coordinates, pushforward Jacobian to ``(z1..z4, t-or-s)``, and fibre term."""
    z1, z2, z3, z4 = p.z
    if chart == "t":
        if p.at_infinity:
            raise ValueError("t-chart does not contain t = inf")
        t = complex(p.t)
        x = np.array([z2, z3, t])

        def push(B):
            b2, b3, bt = B
            return np.array([t * b3 + z3 * bt, b2, b3, t * b2 + z2 * bt]), bt

        def from_chart(y):
            return y_point_t_chart(*y)
    else:
        if not p.at_infinity and p.t == 0:
            raise ValueError("s-chart does not contain t = 0")
        s = 0j if p.at_infinity else 1 / complex(p.t)
        x = np.array([z1, z4, s])

        def push(B):
            b1, b4, bs = B
            return np.array([b1, s * b4 + z4 * bs, s * b1 + z1 * bs, b4]), bs

        def from_chart(y):
            return y_point_s_chart(*y)
    return x, push, from_chart


def _generator(model: str, which: int, x: np.ndarray, chart: str) -> np.ndarray:
    """Components of the generator field in chart coordinates."""
    a, b, u = x
    if model == S1R2_Y:
        which = 2
    if chart == "t":   # (z2, z3, t)
        # v1 = 2Im(z1 d1 - z2 d2 + t dt); v2 = 2Im(z3 d3 - z4 d4 - t dt)
        return np.array([1j * a, 0, -1j * u]) if which == 1 else np.array([0, -1j * b, 1j * u])
    # (z1, z4, s): ds = -dt / t^2
    return np.array([-1j * a, 0, 1j * u]) if which == 1 else np.array([0, 1j * b, -1j * u])


def _potential(model: str, which: int, p: YPoint, delta: float) -> float:
    z1, z2, z3, z4 = p.z
    c = delta * p.fs_term
    if model == S1R2_Y or which == 2:
        return abs(z3) ** 2 - abs(z4) ** 2 + c
    return abs(z1) ** 2 - abs(z2) ** 2 - c


def _omega(push, x, delta: float, A: np.ndarray, B: np.ndarray) -> float:
    za, ua = push(A)
    zb, ub = push(B)
    u = x[2]
    return float(np.sum((za.conj() * zb).imag) + delta / (1 + abs(u) ** 2) ** 2 * (np.conj(ua) * ub).imag)


def on_stabilizer_locus(p: YPoint, tol: float = 1e-12) -> bool:
    return sum(abs(x) > tol for x in p.z) <= 1


def check_reduction_identity(params: LocalModelParams, point: YPoint, fd_step: float = 1e-5,
                             which: int = 1, chart: str = "auto") -> float:
    """Max over chart directions of ``|omega(v, e) - d(H)(e) / 2|``, with ``dH`` by central differences."""
    if not params.on_resolution:
        raise ValueError("the reduction identity lives on the resolution")
    rho(params, point)
    if on_stabilizer_locus(point):
        raise OnStabilizerLocus("the action has nontrivial stabilizer here")
    if chart == "auto":
        chart = "t" if not point.at_infinity and abs(point.t) <= 1 else "s"
    x, push, from_chart = _chart_data(point, chart)
    v = _generator(params.model, which, x, chart)
    res = 0.0
    for k in range(3):
        for unit in (1.0, 1j):
            e = np.zeros(3, dtype=complex)
            e[k] = unit
            hp = _potential(params.model, which, from_chart(x + fd_step * e), params.delta)
            hm = _potential(params.model, which, from_chart(x - fd_step * e), params.delta)
            dH = (hp - hm) / (2 * fd_step)
            res = max(res, abs(_omega(push, x, params.delta, v, e) - 0.5 * dH))
    return res


# -- CSV / SVG ------------------------------------------------------------------------

def format_locus_csv(img: LocusImage) -> str:
    rows = ["piece,rho1,rho2,rho3"]
    for p in img.pieces:
        rows += [f"{p.name},{a!r},{b!r},{c!r}" for a, b, c in p.points.tolist()]
    return "\n".join(rows) + "\n"


def locus_svg(img: LocusImage, size: int = 400) -> str:
    """Projection to the first two coordinates."""
    pts = img.cloud[:, :2]
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    tr = lambda q: (20 + (q[0] - lo[0]) / span * (size - 40), size - 20 - (q[1] - lo[1]) / span * (size - 40))
    colors = ["black", "red", "blue", "green", "orange"]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">']
    for k, p in enumerate(img.pieces):
        for q in p.points:
            x, y = tr(q)
            out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="1.2" fill="{colors[k % len(colors)]}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
