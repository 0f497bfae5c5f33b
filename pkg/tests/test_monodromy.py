from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from torusfib.errors import CompositeTypeUndefined, FormatError, UnsupportedType
from torusfib.monodromy import (
    IDENTITY, T_GAMMA, TYPE_II, TYPE_III, _words, det, dual_type, dualize, euler_number, find_conjugator,
    format_matrices, inverse, is_type_I, is_unipotent, matmul, parse_matrices, parse_matrix, product,
    standard_triple, transpose, vertex_consistent,
)

II = (((1, 1, 0), (0, 1, 0), (0, 0, 1)),
      ((1, 0, -1), (0, 1, 0), (0, 0, 1)),
      ((1, -1, 1), (0, 1, 0), (0, 0, 1)))


def npm(A):
    return np.array(A, dtype=np.int64)


def test_published_triples():
    assert standard_triple(TYPE_II) == II
    assert standard_triple(TYPE_III) == tuple(transpose(T) for T in II)


@pytest.mark.parametrize("t", [TYPE_II, TYPE_III])
def test_triples_are_consistent_and_unipotent(t):
    A = standard_triple(t)
    assert vertex_consistent(*A)
    assert np.array_equal(npm(A[0]) @ npm(A[1]) @ npm(A[2]), np.eye(3, dtype=np.int64))
    for T in A:
        assert is_unipotent(T) and is_type_I(T)
        N = npm(T) - np.eye(3, dtype=np.int64)
        assert np.linalg.matrix_rank(N) == 1


def test_type_I_examples():
    assert is_type_I(T_GAMMA)
    assert not is_type_I(IDENTITY)
    assert not is_type_I(((1, 2, 0), (0, 1, 0), (0, 0, 1)))           # not primitive
    assert not is_type_I(((1, 1, 0), (0, 1, 1), (0, 0, 1)))           # rank two


def test_dual_triples_are_conjugate_to_the_other_type():
    A, B = standard_triple(TYPE_II), standard_triple(TYPE_III)
    D = tuple(dualize(a) for a in A)
    P = find_conjugator(D, B)
    assert P is not None and abs(det(P)) == 1
    for d, b in zip(D, B):
        assert np.array_equal(npm(P) @ npm(d) @ np.linalg.inv(npm(P)).round().astype(np.int64), npm(b))
    # the types themselves are not conjugate: the II pieces share an image line, the III pieces a kernel plane
    assert find_conjugator(A, B) is None
    assert dual_type(TYPE_II) == TYPE_III and dual_type(TYPE_III) == TYPE_II and dual_type("I") == "I"


def test_euler_numbers_and_errors():
    assert (euler_number(TYPE_II), euler_number(TYPE_III), euler_number("I"), euler_number("Generic")) == (-1, 1, 0, 0)
    with pytest.raises(CompositeTypeUndefined):
        euler_number("II5x5")
    with pytest.raises(UnsupportedType):
        euler_number("IV")
    with pytest.raises(UnsupportedType):
        standard_triple("I")


def test_inverse_errors():
    with pytest.raises(ValueError):
        inverse(((2, 0, 0), (0, 1, 0), (0, 0, 1)))


def test_text_round_trip():
    text = format_matrices(II)
    assert tuple(parse_matrices(text)) == II
    assert format_matrices(parse_matrices(text)) == text
    with pytest.raises(FormatError):
        parse_matrix("1 0\n0 1\n")
    with pytest.raises(FormatError):
        parse_matrix("1 0 0\n0 x 0\n0 0 1\n")


UNIMODULAR = st.sampled_from(_words(2))


@settings(max_examples=60, deadline=None)
@given(UNIMODULAR, st.sampled_from([TYPE_II, TYPE_III]))
def test_conjugation_invariance(P, t):
    A = standard_triple(t)
    Pi = inverse(P)
    B = tuple(matmul(matmul(P, a), Pi) for a in A)
    assert vertex_consistent(*B)
    assert all(is_unipotent(b) and is_type_I(b) for b in B)
    Q = find_conjugator(A, B, max_len=2)
    assert Q is not None
    assert all(matmul(Q, a) == matmul(b, Q) for a, b in zip(A, B))


@settings(max_examples=60, deadline=None)
@given(UNIMODULAR)
def test_inverse_and_dualize_against_numpy(P):
    assert np.array_equal(npm(inverse(P)), np.linalg.inv(npm(P)).round().astype(np.int64))
    assert det(P) == round(np.linalg.det(npm(P)))
    assert dualize(dualize(P)) == P
    assert product([P, inverse(P)]) == IDENTITY
