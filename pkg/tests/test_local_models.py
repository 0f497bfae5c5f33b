from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from torusfib.errors import NotOnVariety, OnStabilizerLocus
from torusfib.local_models import (
    S1R2_X, S1R2_Y, T2R_X, T2R_Y, LocalModelParams, YPoint, act, check_reduction_identity, format_locus_csv,
    locus_svg, random_x_point, random_y_point, rho, singular_locus_image, vanishing_circle_point, x_residual,
    y_point_s_chart, y_point_t_chart, y_residual,
)

from oracles import action_generator_fd, kahler_omega_fd


def test_params_validation():
    with pytest.raises(ValueError):
        LocalModelParams("T3R")
    with pytest.raises(ValueError):
        LocalModelParams(T2R_X, eps=-1)
    with pytest.raises(ValueError):
        LocalModelParams(T2R_Y, delta=math.nan)
    assert LocalModelParams(T2R_Y).on_resolution and not LocalModelParams(S1R2_X).on_resolution


def test_rho_examples():
    P = LocalModelParams(T2R_Y, delta=0.5)
    assert rho(P, YPoint((0j,) * 4, 0j)) == (-0.5, 0.5, 0.0)
    assert rho(P, YPoint((0j,) * 4, math.inf)) == (0.0, 0.0, 0.0)
    assert rho(P, YPoint((2j, 0j, 0j, 0j), math.inf)) == pytest.approx((4.0, 0.0, 0.0))
    S = LocalModelParams(S1R2_Y, delta=0.5)
    assert rho(S, YPoint((0j, 3 + 1j, 0j, 0j), 0j)) == pytest.approx((0.0, 3.0, 0.5))
    X = LocalModelParams(T2R_X, eps=1.0)
    assert rho(X, (2, 0.5, 0, 0)) == pytest.approx((4 - 0.25, 0.0, 1.0))


def test_vanishing_circle():
    eps, theta = 1.0, 0.7
    S = LocalModelParams(S1R2_X, eps=eps)
    z = vanishing_circle_point(eps, theta)
    assert x_residual(z, eps) < 1e-15
    c = math.sqrt(eps) * math.cos(theta)
    assert rho(S, z) == pytest.approx((c, c, 0.0))
    # equal phases on z1 and z2 miss the variety
    with pytest.raises(NotOnVariety):
        rho(S, (complex(math.cos(theta), math.sin(theta)),) * 2 + (0j, 0j))


def test_not_on_variety():
    P = LocalModelParams(T2R_Y, delta=0.1)
    with pytest.raises(NotOnVariety):
        rho(P, YPoint((1 + 0j, 1 + 0j, 1 + 0j, 1 + 0j), 2.0))
    with pytest.raises(NotOnVariety):
        rho(P, (0, 0, 0, 0))
    with pytest.raises(NotOnVariety):
        rho(LocalModelParams(T2R_X, eps=1.0), (0, 0, 0, 0))


def test_chart_constructors():
    rng = np.random.default_rng(0)
    for _ in range(10):
        a, b, c = (complex(*rng.standard_normal(2)) for _ in range(3))
        assert y_residual(y_point_t_chart(a, b, c)) < 1e-14
        assert y_residual(y_point_s_chart(a, b, c)) < 1e-14
    assert y_point_s_chart(1j, 2, 0).at_infinity
    assert y_point_t_chart(1, 1, 0).fs_term == 1.0


@settings(max_examples=60)
@given(st.integers(0, 10 ** 6), st.sampled_from([T2R_Y, S1R2_Y, T2R_X, S1R2_X]),
       st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_rho_is_invariant(seed, model, a, b):
    rng = np.random.default_rng(seed)
    P = LocalModelParams(model, eps=0.7, delta=0.3)
    p = random_y_point(rng) if P.on_resolution else random_x_point(rng, 0.7)
    q = act(P, p, (a, b))
    if P.on_resolution:
        assert y_residual(q) < 1e-12
    else:
        assert x_residual(q, 0.7) < 1e-10
    assert rho(P, q) == pytest.approx(rho(P, p), abs=1e-10)


# -- reduction identity ---------------------------------------------------------------------

def _oracle_residual(P, p, which, chart):
    """``max |omega(X, e) + dH(e) / 2|`` with ``X`` from differentiating the action."""
    delta = P.delta
    if chart == "t":
        x = np.array([p.z[1], p.z[2], p.t])
        to_point, coords = (lambda y: y_point_t_chart(*y)), (lambda q: np.array([q.z[1], q.z[2], q.t]))
    else:
        x = np.array([p.z[0], p.z[3], 0j if p.at_infinity else 1 / p.t])
        to_point = lambda y: y_point_s_chart(*y)
        coords = lambda q: np.array([q.z[0], q.z[3], 0j if q.at_infinity else 1 / q.t])

    def phi(y):
        return sum(abs(c) ** 2 for c in to_point(y).z) + delta * math.log(1 + abs(y[2]) ** 2)

    def acted(y, th):
        angles = (th, 0.0) if which == 1 else (0.0, th)
        if P.model == S1R2_Y:
            angles = (th,)
        return coords(act(P, to_point(y), angles))

    comp = {T2R_Y: which - 1, S1R2_Y: 2}[P.model]
    X = action_generator_fd(acted, x)
    h = 1e-5
    worst = 0.0
    for k in range(3):
        for u in (1.0, 1j):
            e = np.zeros(3, dtype=complex)
            e[k] = u
            dH = (rho(P, to_point(x + h * e))[comp] - rho(P, to_point(x - h * e))[comp]) / (2 * h)
            worst = max(worst, abs(kahler_omega_fd(phi, x, X, e) + 0.5 * dH))
    return worst


@pytest.mark.parametrize("model", [T2R_Y, S1R2_Y])
@pytest.mark.parametrize("delta", [0.5, 0.01])
def test_reduction_identity_against_potential_oracle(model, delta):
    rng = np.random.default_rng(1)
    P = LocalModelParams(model, delta=delta)
    for _ in range(4):
        p = random_y_point(rng)
        for which in (1, 2):
            assert _oracle_residual(P, p, which, "t") < 1e-5
            assert check_reduction_identity(P, p, 1e-5, which, chart="t") < 1e-6


@pytest.mark.parametrize("model", [T2R_Y, S1R2_Y])
def test_reduction_identity_near_the_pole(model):
    rng = np.random.default_rng(2)
    P = LocalModelParams(model, delta=0.5)
    for s in (0j, 0.01 + 0.02j, 0.3 - 0.1j):
        a, b = (complex(*rng.standard_normal(2)) for _ in range(2))
        p = y_point_s_chart(a, b, s)
        for which in (1, 2):
            assert _oracle_residual(P, p, which, "s") < 1e-5
            assert check_reduction_identity(P, p, 1e-5, which, chart="s") < 1e-6
            assert check_reduction_identity(P, p, 1e-5, which) < 1e-6


def test_charts_agree_on_overlap():
    p = y_point_t_chart(0.3 + 0.2j, -0.5j, 1.5 - 0.5j)
    P = LocalModelParams(T2R_Y, delta=0.2)
    for which in (1, 2):
        assert check_reduction_identity(P, p, 1e-5, which, "t") < 1e-6
        assert check_reduction_identity(P, p, 1e-5, which, "s") < 1e-6


def test_fd_error_is_second_order():
    rng = np.random.default_rng(3)
    P = LocalModelParams(T2R_Y, delta=0.5)
    p = random_y_point(rng)
    a = check_reduction_identity(P, p, 2e-2)
    b = check_reduction_identity(P, p, 1e-2)
    assert 3.5 < a / b < 4.5


def test_stabilizer_locus_and_wrong_model():
    P = LocalModelParams(T2R_Y, delta=0.5)
    with pytest.raises(OnStabilizerLocus):
        check_reduction_identity(P, YPoint((1j, 0j, 0j, 0j), math.inf))
    with pytest.raises(OnStabilizerLocus):
        check_reduction_identity(P, YPoint((0j,) * 4, 0.5 + 0j))
    with pytest.raises(ValueError):
        check_reduction_identity(LocalModelParams(T2R_X, eps=1.0), random_y_point(np.random.default_rng(0)))


# -- singular loci -----------------------------------------------------------------------

@pytest.mark.parametrize("delta", [0.5, 0.1, 0.01])
def test_t2r_y_has_two_trivalent_junctions(delta):
    img = singular_locus_image(LocalModelParams(T2R_Y, delta=delta), 100, seed=0)
    j = img.junctions()
    assert [k for _, k in j] == [3, 3]
    pts = sorted(tuple(np.round(p, 12)) for p, _ in j)
    assert pts == sorted([(0.0, 0.0, 0.0), (-delta, delta, 0.0)])
    c = img.cloud
    assert np.abs(c[:, 2]).max() == 0
    by = {p.name: p.points for p in img.pieces}
    assert np.all(by["Gamma1"][:, 0] >= 0) and np.all(by["Gamma1"][:, 1] == 0)
    assert np.all(by["Gamma4"][:, 1] <= 0) and np.all(by["Gamma4"][:, 0] == 0)
    assert np.all(by["Gamma2"][:, 0] <= -delta) and np.allclose(by["Gamma2"][:, 1], delta)
    assert np.all(by["Gamma3"][:, 1] >= delta) and np.allclose(by["Gamma3"][:, 0], -delta)


def test_t2r_y_degenerates_to_a_four_valent_point():
    img = singular_locus_image(LocalModelParams(T2R_Y, delta=0.0), 100, seed=0)
    assert [k for _, k in img.junctions()] == [4]


def test_t2r_x_lines():
    img = singular_locus_image(LocalModelParams(T2R_X, eps=0.4), 200, seed=1)
    a, b = (p.points for p in img.pieces)
    assert np.allclose(a[:, 1:], [0.0, 0.4]) and np.allclose(b[:, [0, 2]], [0.0, -0.4])
    assert a[:, 0].min() < 0 < a[:, 0].max()
    assert not img.junctions()


def test_s1r2_x_lobes():
    eps = 1.0
    c = singular_locus_image(LocalModelParams(S1R2_X, eps=eps), 500, seed=0).cloud
    prod = c[:, 0] * c[:, 1]
    assert prod.min() >= -1e-12 and prod.max() <= eps + 1e-12
    assert np.all(c[:, 2] == 0)
    assert (c[:, 0] > 0).any() and (c[:, 0] < 0).any()


def test_s1r2_y_planes():
    img = singular_locus_image(LocalModelParams(S1R2_Y, delta=0.3), 100, seed=0)
    g1, g2 = (p.points for p in img.pieces)
    assert np.allclose(g1[:, 1:], 0.0)
    assert np.allclose(g2[:, 0], 0.0) and np.allclose(g2[:, 2], 0.3)


def test_locus_outputs():
    img = singular_locus_image(LocalModelParams(T2R_Y, delta=0.5), 20, seed=0)
    lines = format_locus_csv(img).splitlines()
    assert lines[0] == "piece,rho1,rho2,rho3" and len(lines) == 1 + len(img.cloud)
    assert locus_svg(img).startswith("<svg")
    with pytest.raises(ValueError):
        singular_locus_image(LocalModelParams(T2R_Y), 0)


def test_substitution_examples():
    assert rho(LocalModelParams(T2R_X, eps=1.0), (1, 1, 0, 0)) == (0.0, 0.0, 1.0)
    P = LocalModelParams(T2R_Y, delta=0.3)
    for t in (0j, 1 + 1j, -2.5 + 0j):
        c = 0.3 / (1 + abs(t) ** 2)
        assert rho(P, YPoint((0j,) * 4, t)) == pytest.approx((-c, c, 0.0))
