"""Amoebas of plane curves with coefficients ``t^w`` and their spines."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainMismatch, EmptyInput, NoRootsFound, NumericalFailure
from .lattice.polytope import newton_polygon
from .spine import SpineGraph
from .subdivision import WeightFunction, standard_weights

Window = tuple[float, float, float, float]  # xmin, xmax, ymin, ymax
DEFAULT_WINDOW: Window = (-3.0, 3.0, -3.0, 3.0)
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class CurveSpec:
    """``sum_m sign_m t^{w(m)} z1^{m1} z2^{m2}`` on the degree-``d`` triangle."""

    degree: int
    weights: WeightFunction
    t: float
    signs: Mapping[tuple[int, int], complex] | None = None

    def __post_init__(self):
        if not 0 < self.t < 1:
            raise ValueError("t must lie in (0, 1)")
        if self.weights.domain != sorted(newton_polygon(self.degree).integral_points()):
            raise DomainMismatch("weights must live on the degree-d triangle")

    @classmethod
    def standard(cls, d: int, t: float) -> CurveSpec:
        return cls(d, standard_weights(d), t)

    @property
    def scale(self) -> float:
        return abs(math.log(self.t))

    def coefficients(self) -> dict[tuple[int, int], complex]:
        out = {}
        for m, wm in self.weights.items():
            sign = (-1) ** (m[0] + m[1]) if self.signs is None else self.signs.get(m, 1)
            out[m] = sign * self.t ** float(wm)
        return out


@dataclass
class PointCloud:
    points: np.ndarray
    window: Window = DEFAULT_WINDOW
    stats: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.points)


def moment_map(z: Sequence[complex], d: float = 1) -> tuple[float, float]:
    a = [abs(x) ** 2 for x in z]
    s = sum(a)
    if s == 0:
        raise ValueError("the zero vector is not a projective point")
    return (d * a[1] / s, d * a[2] / s)


def log_coordinates(z: Sequence[complex], scale: float = 1.0) -> tuple[float, float]:
    """``(log|z1/z0|, log|z2/z0|) / scale``."""
    return (math.log(abs(z[1] / z[0])) / scale, math.log(abs(z[2] / z[0])) / scale)


def _in_window(p, window: Window) -> bool:
    return window[0] <= p[0] <= window[1] and window[2] <= p[1] <= window[3]


def _slice_coeffs(coef, d: int, fixed: complex, free_index: int) -> np.ndarray:
    """Coefficients, highest degree first, of the polynomial in the free variable."""
    c = np.zeros(d + 1, dtype=complex)
    for m, a in coef.items():
        k = m[free_index]
        c[d - k] += a * fixed ** m[1 - free_index]
    return c


def _polish(c: np.ndarray, r: complex, iters: int = 3) -> complex:
    dc = np.polyder(c)
    for _ in range(iters):
        fp = np.polyval(dc, r)
        if fp == 0:
            break
        r = r - np.polyval(c, r) / fp
    return r


def _normalized_residual(c: np.ndarray, r: complex) -> float:
    n = len(c) - 1
    terms = np.abs(c) * np.abs(r) ** np.arange(n, -1, -1)
    big = terms.max()
    return float(abs(np.polyval(c, r)) / big) if big > 0 else math.inf


def sample_amoeba(spec: CurveSpec, n: int, seed: int = 0, window: Window = DEFAULT_WINDOW,
                  max_slices: int | None = None) -> PointCloud:
    """At least ``n`` points of the rescaled amoeba inside ``window``.

    Slices alternate between fixing ``z1`` and fixing ``z2``: the fixed
    coordinate gets a log-modulus uniform over the window and a uniform
    phase, and the other one is found as a root of a univariate polynomial
    (companion-matrix eigenvalues, Newton-polished).
    """
    if n < 1:
        raise ValueError("n must be positive")
    coef = spec.coefficients()
    d, L = spec.degree, spec.scale
    rng = np.random.default_rng(seed)
    cap = max_slices if max_slices is not None else 50 * n + 100
    pts: list[tuple[float, float]] = []
    rejected = 0
    slices = 0
    while len(pts) < n:
        if slices >= cap:
            if not pts:
                raise NoRootsFound("no curve points found in the window")
            raise NumericalFailure(f"only {len(pts)} of {n} points after {slices} slices")
        free = slices % 2  # 0: solve for z1 with z2 fixed; 1: solve for z2 with z1 fixed
        fixed_idx = 1 - free
        lo, hi = window[2 * fixed_idx], window[2 * fixed_idx + 1]
        u = rng.uniform(lo, hi)
        theta = rng.uniform(0.0, 2 * math.pi)
        slices += 1
        fixed = math.exp(L * u) * complex(math.cos(theta), math.sin(theta))
        c = _slice_coeffs(coef, d, fixed, free)
        nz = np.flatnonzero(np.abs(c) > 0)
        if len(nz) == 0:
            continue
        c = c[nz[0]:]
        if len(c) < 2:
            continue
        # roots at 0 (trailing zero coefficients) map to -infinity; drop them
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        if len(c) < 2:
            continue
        for r in np.roots(c):
            r = _polish(c, complex(r))
            if r == 0 or not np.isfinite(r):
                continue
            if _normalized_residual(c, r) > RESIDUAL_TOL:
                rejected += 1
                continue
            v = math.log(abs(r)) / L
            p = (u, v) if free == 1 else (v, u)
            if _in_window(p, window):
                pts.append(p)
    return PointCloud(np.array(pts), window, {"slices": slices, "rejected": rejected})


# -- distances --------------------------------------------------------------

def _clip_ray(p, d, window: Window) -> tuple[float, float] | None:
    """Endpoint where the ray ``p + s d`` leaves the window (``p`` inside)."""
    smax = math.inf
    for k in range(2):
        if d[k] > 0:
            smax = min(smax, (window[2 * k + 1] - p[k]) / d[k])
        elif d[k] < 0:
            smax = min(smax, (window[2 * k] - p[k]) / d[k])
    if not math.isfinite(smax):
        return None
    return (p[0] + smax * d[0], p[1] + smax * d[1])


def _clip_segment(a, b, window: Window):
    """Liang-Barsky clipping; returns ``None`` when the segment misses the window."""
    t0, t1 = 0.0, 1.0
    dx, dy = b[0] - a[0], b[1] - a[1]
    for p, q in ((-dx, a[0] - window[0]), (dx, window[1] - a[0]),
                 (-dy, a[1] - window[2]), (dy, window[3] - a[1])):
        if p == 0:
            if q < 0:
                return None
        else:
            r = q / p
            if p < 0:
                t0 = max(t0, r)
            else:
                t1 = min(t1, r)
    if t0 > t1:
        return None
    return ((a[0] + t0 * dx, a[1] + t0 * dy), (a[0] + t1 * dx, a[1] + t1 * dy))


def graph_segments(G: SpineGraph, window: Window = DEFAULT_WINDOW) -> np.ndarray:
    """Edges and legs of ``G`` clipped to the window, as an ``(k, 2, 2)`` array."""
    pos = {v.id: (float(v.position[0]), float(v.position[1])) for v in G.vertices}
    segs = []
    for e in G.edges:
        s = _clip_segment(pos[e.u], pos[e.v], window)
        if s:
            segs.append(s)
    big = 4 * max(abs(x) for x in window) + 1
    for l in G.legs:
        p = pos[l.v]
        q = (p[0] + big * l.direction[0], p[1] + big * l.direction[1])
        s = _clip_segment(p, q, window)
        if s:
            segs.append(s)
    for v in G.vertices:
        if _in_window(pos[v.id], window):
            segs.append((pos[v.id], pos[v.id]))
    if not segs:
        raise EmptyInput("graph does not meet the window")
    return np.array(segs, dtype=float)


def point_segment_distances(points: np.ndarray, segs: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest segment."""
    P = np.asarray(points, dtype=float)[:, None, :]
    A = segs[None, :, 0, :]
    B = segs[None, :, 1, :]
    AB = B - A
    den = np.einsum("...i,...i", AB, AB)
    num = np.einsum("...i,...i", P - A, AB)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(den > 0, np.clip(num / np.where(den > 0, den, 1), 0, 1), 0)
    C = A + s[..., None] * AB
    return np.sqrt(((P - C) ** 2).sum(-1)).min(axis=1)


def sample_segments(segs: np.ndarray, spacing: float) -> np.ndarray:
    out = []
    for a, b in segs:
        k = max(1, int(math.ceil(np.linalg.norm(b - a) / spacing)))
        s = np.linspace(0, 1, k + 1)[:, None]
        out.append(a + s * (b - a))
    return np.vstack(out)


def hausdorff_distance(cloud: PointCloud | np.ndarray, G: SpineGraph, window: Window | None = None,
                       spacing: float = 2e-3) -> float:
    """Symmetric Hausdorff distance between a point cloud and the clipped graph.

    Cloud-to-graph uses exact point-to-segment distances; graph-to-cloud
    samples the segments at the given spacing.
    """
    pts = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=float)
    if window is None:
        window = cloud.window if isinstance(cloud, PointCloud) else DEFAULT_WINDOW
    if len(pts) == 0:
        raise EmptyInput("empty point cloud")
    segs = graph_segments(G, window)
    d1 = 0.0
    for chunk in np.array_split(pts, max(1, len(pts) // 2000)):
        d1 = max(d1, float(point_segment_distances(chunk, segs).max()))
    d2, _ = cKDTree(pts).query(sample_segments(segs, spacing))
    return max(d1, float(d2.max()))


@dataclass
class FatteningReport:
    rows: list[tuple[float, float]]
    monotone: bool | None
    noise: float

    def table(self) -> str:
        lines = [f"{'t':>8}  {'distance':>10}"]
        lines += [f"{t:8.4g}  {dist:10.5f}" for t, dist in self.rows]
        verdict = {None: "n/a (single t)", True: "decreasing", False: "NOT decreasing"}[self.monotone]
        lines.append(f"monotone: {verdict}")
        return "\n".join(lines) + "\n"


def verify_fattening(specs: Iterable[CurveSpec], G: SpineGraph, n: int = 2000, seed: int = 0,
                     window: Window = DEFAULT_WINDOW, noise: float = 0.0) -> FatteningReport:
    """Hausdorff distance to ``G`` for each spec, sorted by decreasing ``t``.

    The sequence counts as decreasing when each distance is below the
    previous one by more than ``-noise``.
    """
    specs = sorted(specs, key=lambda s: -s.t)
    rows = []
    for s in specs:
        cloud = sample_amoeba(s, n, seed=seed, window=window)
        rows.append((s.t, hausdorff_distance(cloud, G, window)))
    mono = None
    if len(rows) >= 2:
        mono = all(b[1] < a[1] + noise for a, b in zip(rows, rows[1:]))
    return FatteningReport(rows, mono, noise)


# -- CSV --------------------------------------------------------------------

def format_cloud_csv(cloud: PointCloud) -> str:
    return "x,y\n" + "".join(f"{float(x)!r},{float(y)!r}\n" for x, y in cloud.points)


def parse_cloud_csv(text: str, window: Window = DEFAULT_WINDOW) -> PointCloud:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "x,y":
        raise ValueError("expected header 'x,y'")
    pts = [tuple(float(v) for v in ln.split(",")) for ln in lines[1:] if ln.strip()]
    return PointCloud(np.array(pts, dtype=float).reshape(-1, 2), window)


def write_cloud_csv(cloud: PointCloud, path: str | Path) -> None:
    Path(path).write_text(format_cloud_csv(cloud))
