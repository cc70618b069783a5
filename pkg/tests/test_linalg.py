from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from filtquiv import linalg as L

entries = st.fractions(-6, 6, max_denominator=3)


def matrices(rows=st.integers(1, 4), cols=st.integers(1, 4)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(entries, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]))


def square(n=st.integers(1, 4)):
    return n.flatmap(lambda k: st.lists(st.lists(entries, min_size=k, max_size=k), min_size=k, max_size=k))


def test_rref_reports_pivots():
    m = L.frac_matrix([[1, 2], [2, 4]])
    assert L.rref(m) == ([[1, 2], [0, 0]], [0])
    assert L.rank(m) == 1


def test_nullspace_and_left_nullspace_examples():
    assert L.nullspace(L.frac_matrix([[1, 2]])) == [[-2], [1]]
    assert L.left_nullspace(L.frac_matrix([[1], [2]])) == [[1, Fraction(-1, 2)]]


def test_inverse_of_singular_matrix_fails():
    with pytest.raises(ZeroDivisionError, match="singular"):
        L.inverse(L.frac_matrix([[1, 2], [2, 4]]))


def test_adapted_basis_extends_chain():
    basis = L.adapted_basis([L.coordinate_subspace(3, 1)], 3)
    assert basis == L.identity(3)


def test_intersection_of_transverse_subspaces_is_zero():
    assert L.span_dim(L.intersect(L.coordinate_subspace(3, 2), L.frac_matrix([[0], [1], [1]]))) == 0


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_nullspace_is_kernel_of_full_dimension(m):
    cols = len(m[0])
    ns = L.nullspace(m, cols)
    for v in L.columns(ns):
        assert all(sum(row[j] * v[j] for j in range(cols)) == 0 for row in m)
    assert L.ncols_of(ns) + L.rank(m) == cols


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_rank_matches_sympy(m):
    assert L.rank(m) == sympy.Matrix(m).rank()


@given(square())
@settings(max_examples=80, deadline=None)
def test_det_and_inverse_match_sympy(m):
    d = L.det(m)
    assert sympy.Rational(d.numerator, d.denominator) == sympy.Matrix(m).det()
    if d:
        assert L.matmul(m, L.inverse(m)) == L.identity(len(m))


@given(matrices(), matrices())
@settings(max_examples=60, deadline=None)
def test_intersection_lies_in_both(a, b):
    if len(a) != len(b):
        return
    meet = L.intersect(a, b)
    assert L.contains(a, meet) and L.contains(b, meet)
    # dim(A ∩ B) = dim A + dim B - dim(A + B)
    assert L.span_dim(meet) == L.rank(a) + L.rank(b) - L.rank(L.hstack(a, b))


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_solve_in_span_round_trip(m):
    cols = len(m[0])
    v = [sum(row[j] * (j + 1) for j in range(cols)) for row in m]
    coeffs = L.solve_in_span(m, v)
    assert coeffs is not None
    assert [sum(row[j] * coeffs[j] for j in range(cols)) for row in m] == v
