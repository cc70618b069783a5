from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filtquiv import linalg
from filtquiv.action import (CapExceededError, ForeignVariableError, GroupError, act_on_poly, act_on_rep,
                             diagonal_monomial_count, elementary_unipotent, invariant_space_dim,
                             is_semi_invariant, is_sl_semi_invariant, is_unipotent_invariant,
                             rational_element, root_positions, torus_weight)
from filtquiv.poly import SymbolicMatrix, Variable, determinant, evaluate, var
from filtquiv.quiver import dynkin, framed, jordan, kronecker
from filtquiv.repspace import ConcreteRep, Filtration, general_rep


def a(r, c):
    return var("a", r, c)


DET_A = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)


@pytest.fixture
def borel_loop():
    return general_rep(jordan(1), (2,), Filtration.complete((2,)))


@pytest.fixture
def kron22():
    return general_rep(kronecker(2), (2, 2))


def invertible(n):
    return st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n).filter(
        lambda m: linalg.det(linalg.frac_matrix(m)) != 0)


class TestGroupElements:
    def test_elementary_unipotent_positions(self, borel_loop):
        assert root_positions(borel_loop) == [(1, 1, 2)]
        with pytest.raises(GroupError, match="not strictly upper"):
            elementary_unipotent(borel_loop, 1, 2, 1)
        with pytest.raises(GroupError, match="outside the parabolic"):
            elementary_unipotent(borel_loop, 1, 2, 1, allow_lower=True)
        with pytest.raises(GroupError, match="off-diagonal"):
            elementary_unipotent(borel_loop, 1, 1, 1)

    def test_framed_vertex_has_no_group(self):
        space = general_rep(framed(jordan(1)), (2, 2))
        with pytest.raises(GroupError, match="framed"):
            elementary_unipotent(space, 2, 1, 2)

    def test_bad_inverse_rejected(self):
        from filtquiv.action import GroupElement
        with pytest.raises(GroupError, match="does not invert"):
            GroupElement((1,), {1: SymbolicMatrix.from_rows([[2]])}, {1: SymbolicMatrix.from_rows([[2]])})


class TestActions:
    def test_unipotent_moves_off_diagonal_entry(self, borel_loop):
        g = elementary_unipotent(borel_loop, 1, 1, 2)
        # g^{-1}.W = (1 - uE12) W (1 + uE12)
        assert act_on_poly(g, a(1, 2), borel_loop) == a(1, 2) + var("u") * a(1, 1) - var("u") * a(2, 2)

    def test_foreign_variables(self, borel_loop):
        with pytest.raises(ForeignVariableError):
            act_on_poly(elementary_unipotent(borel_loop, 1, 1, 2), var("b", 1, 1), borel_loop)

    @given(invertible(2), invertible(2))
    @settings(max_examples=25, deadline=None)
    def test_left_action_law(self, m1, m2):
        space = general_rep(jordan(1), (2,))
        g = rational_element(jordan(1), (2,), {1: m1})
        h = rational_element(jordan(1), (2,), {1: m2})
        f = a(1, 2) * a(2, 1) + a(1, 1)
        assert act_on_poly(g * h, f, space) == act_on_poly(g, act_on_poly(h, f, space), space)

    @given(invertible(2), invertible(2))
    @settings(max_examples=20, deadline=None)
    def test_action_is_multiplicative(self, m1, m2):
        q = kronecker(2)
        space = general_rep(q, (2, 2))
        g = rational_element(q, (2, 2), {1: m1, 2: m2})
        f, h = a(1, 2) + var("b", 2, 1), DET_A - a(2, 2)
        assert act_on_poly(g, f * h, space) == act_on_poly(g, f, space) * act_on_poly(g, h, space)

    @given(invertible(2), invertible(2), st.lists(st.integers(-4, 4), min_size=4, max_size=4))
    @settings(max_examples=20, deadline=None)
    def test_concrete_left_action(self, m1, m2, values):
        q = jordan(1)
        g = rational_element(q, (2,), {1: m1})
        h = rational_element(q, (2,), {1: m2})
        w = ConcreteRep(q, (2,), {"a": [values[:2], values[2:]]})
        assert act_on_rep(g * h, w) == act_on_rep(g, act_on_rep(h, w))

    @given(invertible(2), st.lists(st.integers(-4, 4), min_size=8, max_size=8))
    @settings(max_examples=25, deadline=None)
    def test_symbolic_and_concrete_actions_agree(self, m, values):
        q = kronecker(2)
        space = general_rep(q, (2, 2))
        g = rational_element(q, (2, 2), {2: m})
        w = ConcreteRep(q, (2, 2), {"a": [values[:2], values[2:4]], "b": [values[4:6], values[6:]]})
        f = DET_A + a(1, 2) * var("b", 2, 1)
        point = lambda rep: {Variable.entry(k, r + 1, c + 1): rep.mats[k][r][c]  # noqa: E731
                             for k in rep.mats for r in range(2) for c in range(2)}
        lhs = evaluate(act_on_poly(g, f, space), point(w))
        rhs = evaluate(f, point(act_on_rep(g.inverse(), w)))
        assert lhs == rhs


class TestInvariance:
    @pytest.mark.parametrize("f,ok", [(a(1, 1), True), (a(2, 2), True), (a(1, 2), False)])
    def test_loop_diagonal_entries(self, borel_loop, f, ok):
        assert bool(is_unipotent_invariant(f, borel_loop)) is ok

    def test_failure_carries_generator_and_difference(self, borel_loop):
        res = is_unipotent_invariant(a(1, 2), borel_loop)
        assert res.generator == (1, 1, 2)
        assert res.difference == a(1, 1) * var("u") - a(2, 2) * var("u")

    def test_torus_weight_of_entry(self, borel_loop):
        assert torus_weight(a(1, 2), borel_loop).as_dict() == {1: (1, -1)}

    def test_kronecker_determinant_is_semi_invariant(self, kron22):
        res = is_sl_semi_invariant(DET_A, kron22)
        assert res.semi_invariant
        assert res.character.as_dict() == {1: -1, 2: 1}
        assert is_semi_invariant(DET_A, kron22, res.character)

    def test_single_entry_is_not_semi_invariant(self, kron22):
        assert not is_sl_semi_invariant(a(1, 1), kron22).semi_invariant

    @given(invertible(2), invertible(2))
    @settings(max_examples=20, deadline=None)
    def test_determinant_scales_by_character(self, m1, m2):
        q = kronecker(2)
        space = general_rep(q, (2, 2))
        g = rational_element(q, (2, 2), {1: m1, 2: m2})
        d1, d2 = (linalg.det(linalg.frac_matrix(m)) for m in (m1, m2))
        # (g.f)(W) = f(g2^{-1} W g1) = det(g2)^{-1} det(g1) f(W)
        assert act_on_poly(g, DET_A, space) == DET_A.scale(d1 / d2)


class TestInvariantSpace:
    def test_borel_loop_degree_two(self, borel_loop):
        inv = invariant_space_dim(borel_loop, 2)
        assert inv.dimension == 6 == diagonal_monomial_count(borel_loop, 2)
        assert inv.by_degree == {0: 1, 1: 2, 2: 3}

    def test_cap(self):
        with pytest.raises(CapExceededError, match="exceed the cap 10"):
            invariant_space_dim(general_rep(kronecker(3), (3, 3)), 3, cap=10)

    @pytest.mark.parametrize("r", [2, 3])
    def test_type_a_matches_diagonal_count(self, r):
        space = general_rep(dynkin("A", r), (2,) * r, Filtration.complete((2,) * r))
        assert invariant_space_dim(space, 2).dimension == diagonal_monomial_count(space, 2)

    def test_basis_elements_are_invariant(self, borel_loop):
        for f in invariant_space_dim(borel_loop, 2).basis:
            assert is_unipotent_invariant(f, borel_loop)

    def test_random_invariants_are_fixed(self, borel_loop):
        rng = random.Random(5)
        basis = invariant_space_dim(borel_loop, 2).basis
        f = sum((b.scale(Fraction(rng.randint(-5, 5))) for b in basis), start=var("a", 1, 1) * 0)
        g = elementary_unipotent(borel_loop, 1, 1, 2)
        assert act_on_poly(g, f, borel_loop) == f

    def test_determinant_of_general_loop_is_conjugation_invariant(self):
        space = general_rep(jordan(1), (2,))
        assert determinant(space.matrix("a")) == DET_A
        g = rational_element(jordan(1), (2,), {1: [[1, 2], [3, 5]]})
        assert act_on_poly(g, DET_A, space) == DET_A
