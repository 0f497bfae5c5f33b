from __future__ import annotations

import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from torusfib.errors import FormatError, InvalidPolytope, NonIntegralDual, OriginNotInterior
from torusfib.lattice import (
    LatticePolytope, QuotientLattice, cp4_fan_polytope, dual_polytope, format_polytope, integral_points,
    is_reflexive, newton_polygon, parse_polytope,
)
from torusfib.lattice.gr24 import (
    EDGE_INTERIOR_POINTS, FACE_POINT_COUNTS, I_VECTORS, W_VECTORS, canonical_I, charts, delta_s,
    delta_s_dual, delta_s_from_dual, face_by_labels, label_of_vertex,
)

from oracles import count_points_qhull, dual_by_qhull

CUBE = LatticePolytope(list(itertools.product((-1, 1), repeat=2)))
CROSS = LatticePolytope([(1, 0), (-1, 0), (0, 1), (0, -1)])


def test_square_and_cross_are_dual():
    assert dual_polytope(CUBE) == CROSS
    assert dual_polytope(CROSS) == CUBE


def test_cp4_dual_is_anticanonical_simplex():
    D = dual_polytope(cp4_fan_polytope())
    expected = {tuple(5 * (i == j) - 1 for j in range(4)) for i in range(4)} | {(-1, -1, -1, -1)}
    assert set(D.vertices) == expected
    assert set(D.vertices) == dual_by_qhull(cp4_fan_polytope().vertices)
    assert len(D.integral_points()) == 126


def test_reflexivity_examples():
    assert is_reflexive(dual_polytope(cp4_fan_polytope()))
    assert is_reflexive(CUBE)
    bad = LatticePolytope([(2, 0), (0, 2), (-2, -2)])
    assert not is_reflexive(bad)
    with pytest.raises(NonIntegralDual):
        dual_polytope(bad)


def test_origin_must_be_interior():
    P = LatticePolytope([(0, 0), (1, 0), (0, 1)])
    with pytest.raises(OriginNotInterior):
        dual_polytope(P)
    with pytest.raises(OriginNotInterior):
        is_reflexive(P)


def test_invalid_polytopes():
    with pytest.raises(InvalidPolytope):
        LatticePolytope([])
    with pytest.raises(InvalidPolytope):
        LatticePolytope([(0, 0), (1, 1), (2, 2)])
    with pytest.raises(InvalidPolytope):
        newton_polygon(0)


@pytest.mark.parametrize("d,total,interior", [(1, 3, 0), (3, 10, 1), (5, 21, 6)])
def test_newton_polygon_counts(d, total, interior):
    P = newton_polygon(d)
    assert len(P.integral_points()) == total == (d + 1) * (d + 2) // 2
    assert len(P.interior_points()) == interior


def test_redundant_points_are_dropped():
    P = LatticePolytope([(0, 0), (2, 0), (0, 2), (1, 0), (1, 1)])
    assert P.vertices == ((0, 0), (0, 2), (2, 0))


def test_f_vectors():
    simplex4 = LatticePolytope([(0,) * 4] + [tuple(int(i == j) for j in range(4)) for i in range(4)])
    assert simplex4.f_vector()[:4] == (5, 10, 10, 5)
    assert newton_polygon(2).f_vector() == (3, 3, 1)


def test_gr24_dual_pair():
    assert delta_s_from_dual() == delta_s()
    assert dual_polytope(delta_s_dual(), convention="polar") == delta_s()
    # the >= -1 convention returns the negatives
    assert set(dual_polytope(delta_s_dual()).vertices) == {tuple(-x for x in v) for v in delta_s().vertices}
    assert sorted(label_of_vertex(v) for v in delta_s().vertices) == [f"I{k}" for k in range(1, 7)]


def test_gr24_pairings_with_w():
    # every I pairs to -3 or +1 with every w, so I is in the polar of conv{w}
    for I in I_VECTORS.values():
        vals = {sum(a * b for a, b in zip(I, w)) for w in W_VECTORS.values()}
        assert vals <= {1, -3}


def test_gr24_edge_points_match_listed_classes():
    D = delta_s()
    ch = charts()
    for labels, listed in EDGE_INTERIOR_POINTS.items():
        f = face_by_labels(D, labels)
        pts = D.integral_points(f)
        ends = {D.vertices[i] for i in f.vertices}
        interior = {canonical_I(ch.m_lift(p)) for p in pts if p not in ends}
        assert interior == {canonical_I(p) for p in listed}


@pytest.mark.parametrize("labels,n", list(FACE_POINT_COUNTS.items()))
def test_gr24_face_counts(labels, n):
    D = delta_s()
    assert len(D.integral_points(face_by_labels(D, labels))) == n


def test_gr24_dual_has_square_face():
    P = delta_s_dual()
    ch = charts()
    square = P.face_with_vertices([ch.n_coords(W_VECTORS[k]) for k in ("w3", "w4", "w6", "w5")])
    assert square.dim == 2 and len(square.vertices) == 4


def test_point_count_matches_qhull():
    for P in (delta_s(), dual_polytope(cp4_fan_polytope()), newton_polygon(6)):
        assert len(integral_points(P)) == count_points_qhull(P.vertices)


def test_quotient_lattice():
    Q = QuotientLattice(3, [(1, 1, 1)])
    assert Q.rank == 2
    assert Q.equal((1, 0, 0), (0, -1, -1))
    assert Q.equal(Q.lift(Q.coordinates((4, 1, -2))), (4, 1, -2))
    with pytest.raises(ValueError):
        QuotientLattice(3, [(1, 0, 0), (2, 0, 0)])


def test_polytope_text_round_trip():
    P = delta_s()
    text = format_polytope(P)
    assert format_polytope(parse_polytope(text)) == text
    assert parse_polytope("# c\ndim 2\n1 1\n-1 1\n1 -1\n-1 -1\n") == CUBE
    with pytest.raises(FormatError):
        parse_polytope("dim 2\n1 2 3\n")
    with pytest.raises(FormatError):
        parse_polytope("1 2\n")


# -- properties ------------------------------------------------------------------------

UNIMODULAR2 = st.sampled_from([((1, 0), (0, 1)), ((1, 1), (0, 1)), ((0, 1), (-1, 0)), ((2, 1), (1, 1)),
                               ((1, -1), (0, 1)), ((-1, 0), (0, -1))])


@given(UNIMODULAR2)
def test_reflexive_duality_is_an_involution_and_equivariant(A):
    hexagon = LatticePolytope([(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)])
    for P in (CUBE, hexagon, LatticePolytope([(1, 0), (0, 1), (-1, -1)])):
        Q = LatticePolytope([(A[0][0] * x + A[0][1] * y, A[1][0] * x + A[1][1] * y) for x, y in P.vertices])
        assert dual_polytope(dual_polytope(Q)) == Q
        assert len(Q.integral_points()) == len(P.integral_points())


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)), min_size=4, max_size=9))
def test_face_lattice_euler_relation(pts):
    try:
        P = LatticePolytope(pts)
    except InvalidPolytope:
        return
    f = P.f_vector()
    assert sum((-1) ** k * f[k] for k in range(P.dim)) == 1 - (-1) ** P.dim
    assert len(P.integral_points()) == count_points_qhull(P.vertices)


def test_dual_vertices_are_tight_on_enough_vertices():
    from torusfib.lattice.intlinalg import rank
    for P in (cp4_fan_polytope(), delta_s_dual(), CUBE):
        for n in dual_polytope(P).vertices:
            tight = [m for m in P.vertices if sum(a * b for a, b in zip(m, n)) == -1]
            diffs = [[a - b for a, b in zip(m, tight[0])] for m in tight[1:]]
            assert rank(diffs) + 1 >= P.dim


def test_binomial_face_counts_of_simplex():
    S = dual_polytope(cp4_fan_polytope())
    assert S.f_vector() == tuple(comb(5, k + 1) for k in range(4)) + (1,)
