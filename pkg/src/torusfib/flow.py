"""Gradient flow of ``Re(s)`` on the quintic pencil.

For ``p_psi = p_a + psi * z0 z1 z2 z3 z4`` put ``s = p_inf / p_a`` with
``p_inf = z0 z1 z2 z3 z4``. Then ``s = 0`` on the coordinate simplex and
``s = -1/psi`` on ``{p_psi = 0}``. The Fubini-Study gradient of ``f = Re(s)``
preserves ``Im(s)``, so flowing the normalized field ``V = grad f / |grad f|^2``
for time ``1/|psi|`` carries points of the coordinate simplex onto the
quintic.

All computation happens in the affine chart ``z_c = 1`` with ``c`` the
largest coordinate, re-chosen after every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import HitCriticalSet, PoleOfS, StepLimitExceeded

NVAR = 5
DEGREE = 5
CENTER = (1, 1, 1, 1, 1)


def quintic_monomials() -> np.ndarray:
    """Exponents of all degree-5 monomials in 5 variables except ``z0 z1 z2 z3 z4``."""
    out = []
    for combo in combinations_with_replacement(range(NVAR), DEGREE):
        e = [0] * NVAR
        for i in combo:
            e[i] += 1
        if tuple(e) != CENTER:
            out.append(e)
    return np.array(sorted(out, reverse=True), dtype=int)


@dataclass
class QuinticFamilySpec:
    exponents: np.ndarray   # (K, 5)
    coeffs: np.ndarray      # (K,) complex
    psi: complex

    def __post_init__(self):
        self.exponents = np.asarray(self.exponents, dtype=int)
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if any(tuple(e) == CENTER for e in self.exponents):
            raise ValueError("the z0 z1 z2 z3 z4 slot is reserved for psi")
        if not np.any(self.coeffs):
            raise ValueError("p_a is identically zero")

    @classmethod
    def generic(cls, psi: complex = 100.0, seed: int = 0, scale: float = 0.1) -> QuinticFamilySpec:
        """Fermat quintic plus small random complex coefficients on every other monomial."""
        E = quintic_monomials()
        rng = np.random.default_rng(seed)
        a = scale * (rng.standard_normal(len(E)) + 1j * rng.standard_normal(len(E))) / math.sqrt(2)
        for k, e in enumerate(E):
            if max(e) == DEGREE:
                a[k] += 1.0
        return cls(E, a, psi)

    # polynomial evaluation ------------------------------------------------

    def p_a(self, z: Sequence[complex]) -> complex:
        z = np.asarray(z, dtype=complex)
        return complex(self.coeffs @ np.prod(z[None, :] ** self.exponents, axis=1))

    def grad_p_a(self, z: Sequence[complex]) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.zeros(NVAR, dtype=complex)
        for j in range(NVAR):
            e = self.exponents.copy()
            c = self.coeffs * e[:, j]
            e[:, j] = np.maximum(e[:, j] - 1, 0)
            out[j] = c @ np.prod(z[None, :] ** e, axis=1)
        return out

    @staticmethod
    def p_inf(z: Sequence[complex]) -> complex:
        return complex(np.prod(np.asarray(z, dtype=complex)))

    @staticmethod
    def grad_p_inf(z: Sequence[complex]) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.array([np.prod(np.delete(z, j)) for j in range(NVAR)])

    def p_psi(self, z: Sequence[complex]) -> complex:
        return self.p_a(z) + self.psi * self.p_inf(z)

    def residual(self, z: Sequence[complex]) -> float:
        """``|p_psi| / (|p_a| + |psi p_inf|)`` at the unit representative."""
        z = np.asarray(z, dtype=complex)
        z = z / np.linalg.norm(z)
        pa, pinf = self.p_a(z), self.p_inf(z)
        den = abs(pa) + abs(self.psi * pinf)
        return abs(pa + self.psi * pinf) / den if den > 0 else math.inf


def evaluate_s(spec: QuinticFamilySpec, z: Sequence[complex], pole_tol: float = 1e-14) -> complex:
    z = np.asarray(z, dtype=complex)
    z = z / np.linalg.norm(z)
    pa = spec.p_a(z)
    if abs(pa) <= pole_tol:
        raise PoleOfS("p_a vanishes here")
    return spec.p_inf(z) / pa


# -- chart geometry -----------------------------------------------------------

def _insert(w: np.ndarray, c: int) -> np.ndarray:
    return np.insert(w, c, 1.0 + 0j)


def _to_chart(z: np.ndarray, c: int) -> np.ndarray:
    return np.delete(z / z[c], c)


def fs_metric(w: np.ndarray) -> np.ndarray:
    """``h[i, j] = h_{i jbar}`` of the Fubini-Study form in an affine chart."""
    r = 1.0 + np.vdot(w, w).real
    return (np.eye(len(w)) * r - np.outer(w.conj(), w)) / r ** 2


def s_and_ds(spec: QuinticFamilySpec, w: np.ndarray, c: int) -> tuple[complex, np.ndarray]:
    """``s`` and its holomorphic chart derivatives at ``w`` (chart ``z_c = 1``)."""
    z = _insert(w, c)
    pa = spec.p_a(z)
    if pa == 0:
        raise PoleOfS("p_a vanishes here")
    pinf = spec.p_inf(z)
    g = (spec.grad_p_inf(z) * pa - pinf * spec.grad_p_a(z)) / pa ** 2
    return pinf / pa, np.delete(g, c)


def gradient_f(spec: QuinticFamilySpec, w: np.ndarray, c: int) -> tuple[complex, np.ndarray, float]:
    """``(s, grad f, |grad f|^2)`` with ``grad f`` as a complex chart vector.

    ``g(X, W) = Re sum h_{i jbar} X_i conj(W_j)`` and ``df(W) = Re(ds . W)``
    give ``H^T X = conj(ds)``.
    """
    s, ds = s_and_ds(spec, w, c)
    H = fs_metric(w)
    X = np.linalg.solve(H.T, ds.conj())
    n2 = (ds @ X).real
    return s, X, n2


# -- integrator ---------------------------------------------------------------

# Dormand-Prince 5(4)
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])


@dataclass
class FlowSample:
    time: float
    z: np.ndarray
    s: complex


@dataclass
class FlowTrajectory:
    samples: list[FlowSample]
    accepted: int = 0
    rejected: int = 0
    charts_used: set = field(default_factory=set)

    @property
    def end(self) -> np.ndarray:
        return self.samples[-1].z

    @property
    def max_im_s(self) -> float:
        return max(abs(x.s.imag) for x in self.samples)

    def __len__(self) -> int:
        return len(self.samples) - 1


def _unit(z: np.ndarray) -> np.ndarray:
    z = z / np.linalg.norm(z)
    k = int(np.argmax(np.abs(z)))
    return z * (abs(z[k]) / z[k])  # fix the phase so the largest entry is real positive


def flow_point(spec: QuinticFamilySpec, z0: Sequence[complex], target: float | None = None,
               tol: float = 1e-9, grad_min: float = 1e-6, max_steps: int = 20000,
               h0: float = 1e-3) -> FlowTrajectory:
    """Flow ``z0`` along ``+-V`` until ``Re(s)`` equals ``target``.

    ``target`` defaults to ``Re(-1/psi)``. Steps are rejected when the
    embedded error estimate or the drift of ``Im(s)`` exceeds ``tol``.
    """
    if target is None:
        target = (-1 / spec.psi).real
    z = _unit(np.asarray(z0, dtype=complex))
    s = evaluate_s(spec, z)
    if abs(s.imag) > max(tol, 1e-12):
        raise ValueError(f"starting point has Im(s) = {s.imag:.3g}")
    T = float(s.real - target)
    sign = -1.0 if T > 0 else 1.0
    T = abs(T)
    traj = FlowTrajectory([FlowSample(0.0, z, s)])
    if T <= tol:
        return traj

    def field_at(w, c):
        _, X, n2 = gradient_f(spec, w, c)
        if math.sqrt(max(n2, 0.0)) < grad_min:
            raise HitCriticalSet(f"|grad f| = {math.sqrt(max(n2, 0.0)):.3g} below threshold")
        return sign * X / n2

    tau, h = 0.0, min(h0, T)
    im0 = s.imag
    while tau < T:
        if traj.accepted + traj.rejected >= max_steps:
            raise StepLimitExceeded(f"no arrival after {max_steps} steps")
        h = min(h, T - tau)
        c = int(np.argmax(np.abs(z)))
        traj.charts_used.add(c)
        w = _to_chart(z, c)
        k = []
        for a in _A:
            wi = w + h * sum(aj * kj for aj, kj in zip(a, k)) if a else w
            k.append(field_at(wi, c))
        K = np.array(k)
        w5 = w + h * (_B5 @ K)
        err = h * np.linalg.norm((_B5 - _B4) @ K, ord=np.inf)
        z_new = _unit(_insert(w5, c))
        try:
            s_new = evaluate_s(spec, z_new)
        except PoleOfS:
            s_new = complex(math.nan, math.nan)
        drift = abs(s_new.imag - im0) if np.isfinite(s_new) else math.inf
        if err <= tol and drift <= tol:
            tau += h
            z, s = z_new, s_new
            traj.samples.append(FlowSample(tau, z, s))
            traj.accepted += 1
            fac = 0.9 * (tol / max(err, 1e-300)) ** 0.2
            h *= min(4.0, max(0.5, fac))
        else:
            traj.rejected += 1
            h *= 0.25 if not np.isfinite(drift) else max(0.1, 0.9 * (tol / max(err, drift, 1e-300)) ** 0.2)
        if h < 1e-14:
            raise StepLimitExceeded("step size underflow")
    # land on the level set: ds(V) = 1, so move by the remaining real gap along V
    for _ in range(3):
        c = int(np.argmax(np.abs(z)))
        w = _to_chart(z, c)
        s, X, n2 = gradient_f(spec, w, c)
        gap = target - s.real
        if abs(gap) < 1e-15:
            break
        z = _unit(_insert(w + gap * X / n2, c))
    traj.samples[-1] = FlowSample(traj.samples[-1].time, z, evaluate_s(spec, z))
    return traj


def random_start_on_infinity(spec: QuinticFamilySpec, rng: np.random.Generator,
                             min_mod: float = 0.3) -> np.ndarray:
    """A point with one coordinate zero and the others of modulus at least ``min_mod``."""
    while True:
        z = rng.standard_normal(NVAR) + 1j * rng.standard_normal(NVAR)
        if np.min(np.abs(z)) < min_mod * np.max(np.abs(z)):
            continue
        z[rng.integers(NVAR)] = 0
        z = _unit(z)
        if abs(spec.p_a(z)) > 1e-3:
            return z


# -- Hamiltonian identity -------------------------------------------------------

def _real_forms(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gram matrices of ``g`` and ``omega`` on the real basis
    ``(e_1, .., e_n, i e_1, .., i e_n)`` of the chart."""
    H = fs_metric(w)
    n = len(w)
    basis = np.vstack([np.eye(n), 1j * np.eye(n)]).astype(complex)
    hv = basis @ H @ basis.conj().T   # hv[a, b] = sum h_{ij} U_i conj(W_j)
    G = hv.real
    # omega(U, W) = g(iU, W)
    Om = (1j * basis @ H @ basis.conj().T).real
    return G, Om


def _to_real(v: np.ndarray) -> np.ndarray:
    return np.concatenate([v.real, v.imag])


def check_hamiltonian_equality(spec: QuinticFamilySpec, z: Sequence[complex], fd_step: float = 1e-5) -> float:
    """Max componentwise difference between ``grad f`` and the Hamiltonian
    field of ``h = Im(s)``, the latter from central differences of ``h``.

    The difference is divided by ``max(1, |grad f|_inf)`` so that points
    near the poles of ``s``, where the field is large, are judged on the
    same relative scale as the rest.
    """
    z = _unit(np.asarray(z, dtype=complex))
    evaluate_s(spec, z)
    c = int(np.argmax(np.abs(z)))
    w = _to_chart(z, c)
    _, X, _ = gradient_f(spec, w, c)
    n = len(w)
    dh = np.zeros(2 * n)
    for a in range(2 * n):
        e = np.zeros(n, dtype=complex)
        e[a % n] = 1.0 if a < n else 1j
        hp = s_and_ds(spec, w + fd_step * e, c)[0].imag
        hm = s_and_ds(spec, w - fd_step * e, c)[0].imag
        dh[a] = (hp - hm) / (2 * fd_step)
    _, Om = _real_forms(w)
    Xh = np.linalg.solve(Om.T, dh)   # omega(Xh, .) = dh
    Xr = _to_real(X)
    return float(np.max(np.abs(Xh - Xr)) / max(1.0, float(np.max(np.abs(Xr)))))


def random_regular_point(spec: QuinticFamilySpec, rng: np.random.Generator) -> np.ndarray:
    while True:
        z = _unit(rng.standard_normal(NVAR) + 1j * rng.standard_normal(NVAR))
        if abs(spec.p_a(z)) > 1e-2:
            return z


# -- CSV ------------------------------------------------------------------------

def format_trajectory_csv(spec: QuinticFamilySpec, traj: FlowTrajectory) -> str:
    rows = ["time,abs_im_s,residual"]
    for x in traj.samples:
        rows.append(f"{float(x.time)!r},{float(abs(x.s.imag))!r},{float(spec.residual(x.z))!r}")
    return "\n".join(rows) + "\n"


def write_trajectory_csv(spec: QuinticFamilySpec, traj: FlowTrajectory, path: str | Path) -> None:
    Path(path).write_text(format_trajectory_csv(spec, traj))
