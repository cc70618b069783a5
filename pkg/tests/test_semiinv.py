from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy

from filtquiv import verify
from filtquiv.action import is_sl_semi_invariant, is_unipotent_invariant, linear_rank
from filtquiv.poly import SymbolicMatrix, determinant, var
from filtquiv.quiver import QuiverError, dynkin, framed, jordan, kronecker
from filtquiv.repspace import Filtration, general_rep
from filtquiv.semiinv import (Bitableau, DWProblem, DZProblem, DZTerm, ProblemError, bideterminant,
                              chain_product, dw_generators, dw_matrix, dz_auto_problem, dz_generators,
                              dz_matrix, framed_affine_invariant_check, is_block_standard, normalized,
                              path_matrix, same_up_to_scalar, tag_leq, theorem_harness)
from oracle import sympy_matrix, to_sympy


def a(r, c):
    return var("a", r, c)


def b(r, c):
    return var("b", r, c)


DET_A = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)
DET_B = b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)
MIXED = a(1, 1) * b(2, 2) - a(1, 2) * b(2, 1) - a(2, 1) * b(1, 2) + a(2, 2) * b(1, 1)


def one_by_one(x):
    return SymbolicMatrix.from_rows([[x]])


@pytest.fixture
def kronecker2_dw():
    return DWProblem(kronecker(2), (2, 2), (1, 1), V={"a": one_by_one(1), "b": one_by_one(var("λ"))})


class TestScalarHelpers:
    def test_same_up_to_scalar(self):
        assert same_up_to_scalar(DET_A, DET_A.scale(-3))
        assert not same_up_to_scalar(DET_A, DET_B)
        assert not same_up_to_scalar(DET_A, DET_A + 1)

    def test_normalized_is_scale_free(self):
        assert normalized(DET_A.scale(Fraction(-2, 3))) == normalized(DET_A)


class TestDerksenWeyman:
    def test_matrix_layout(self, kronecker2_dw):
        m = dw_matrix(kronecker2_dw)
        lam = var("λ")
        assert [list(r) for r in m.entries] == [
            [a(1, 1), a(1, 2), -1, 0], [a(2, 1), a(2, 2), 0, -1],
            [b(1, 1), b(1, 2), -lam, 0], [b(2, 1), b(2, 2), 0, -lam]]

    def test_generators_frozen(self, kronecker2_dw):
        assert dw_generators(kronecker2_dw) == [DET_B, -MIXED, DET_A]

    def test_one_kronecker(self):
        assert dw_generators(DWProblem(kronecker(1), (2, 2), (1, 0))) == [DET_A]

    def test_symbolic_v_is_the_default(self):
        p = DWProblem(kronecker(2), (2, 2), (1, 1))
        assert sorted(str(v) for v in p.v_variables()) == ["va11", "vb11"]

    def test_span_does_not_depend_on_the_specialization(self, kronecker2_dw):
        # each rational choice of V gives one determinant, which must lie in the generator span
        rng = random.Random(3)
        base = dw_generators(kronecker2_dw)
        assert linear_rank(base) == 3
        assert linear_rank(base + dw_generators(DWProblem(kronecker(2), (2, 2), (1, 1)))) == 3
        for _ in range(2):
            va, vb = (Fraction(rng.randint(1, 9)) for _ in range(2))
            p = DWProblem(kronecker(2), (2, 2), (1, 1), V={"a": one_by_one(va), "b": one_by_one(vb)})
            sample = dw_generators(p)
            assert len(sample) == 1
            assert linear_rank(base + sample) == 3

    def test_generators_are_semi_invariant(self, kronecker2_dw):
        space = general_rep(kronecker(2), (2, 2))
        for g in dw_generators(kronecker2_dw):
            assert is_sl_semi_invariant(g, space).semi_invariant

    @pytest.mark.parametrize("alpha,msg", [((1, 1), "⟨α, β⟩ = 2"), ((2, 2), "but the construction needs 0")])
    def test_euler_form_condition(self, alpha, msg):
        with pytest.raises(ProblemError, match=msg):
            DWProblem(kronecker(1), (2, 2), alpha)


class TestDomokosZubkov:
    def test_one_jordan_determinant(self):
        s, t, u, v = (var(x) for x in "stuv")
        want = t ** 2 * u ** 2 - (a(1, 1) + a(2, 2)) * s * t * u * v + DET_A * s ** 2 * v ** 2
        m = dz_matrix(verify.dz_jordan1())
        assert determinant(m) == want
        assert sympy.expand(to_sympy(want) - sympy_matrix(m).det(method="berkowitz")) == 0

    def test_one_jordan_generators(self):
        assert dz_generators(verify.dz_jordan1()) == [-a(1, 1) - a(2, 2), DET_A]

    def test_two_jordan_generators(self):
        gens = dz_generators(verify.dz_jordan2())
        assert gens == [-MIXED, DET_A, DET_B]
        space = general_rep(jordan(2, ids=["a", "b"]), (2,))
        assert all(is_sl_semi_invariant(g, space).semi_invariant for g in gens)

    def test_path_matrix_uses_composition_order(self):
        space = general_rep(jordan(2), (2,))
        m = path_matrix(space, ("a", "b"), 1)
        assert m.entries == (space.matrix("b") @ space.matrix("a")).entries
        assert path_matrix(space, (), 1).entries == SymbolicMatrix.identity(2).entries

    def test_auto_problem_uses_short_paths(self):
        p = dz_auto_problem(jordan(1), (2,), (1, 1), (1, 1))
        assert p.entries[(0, 0)] == (DZTerm("t1", ()), DZTerm("t2", ("a",)))
        assert len(p.entries) == 4

    def test_auto_generators_are_invariant(self):
        space = general_rep(jordan(1), (2,))
        gens = dz_generators(dz_auto_problem(jordan(1), (2,), (1, 1), (1, 1)))
        assert any(same_up_to_scalar(g, a(1, 1) + a(2, 2)) for g in gens)
        assert all(is_sl_semi_invariant(g, space).semi_invariant for g in gens)
        assert all(not same_up_to_scalar(g, h) for i, g in enumerate(gens) for h in gens[i + 1:])

    @pytest.mark.parametrize("build,err,msg", [
        (lambda: DZProblem(jordan(1), (2,), (1, 1), (1, 1), {(0, 0): (DZTerm("s", ("z",)),)}),
         QuiverError, "no arrow named 'z'"),
        (lambda: DZProblem(kronecker(1), (2, 2), (1,), (1,), {(0, 0): (DZTerm("s", ("a", "a")),)}),
         ProblemError, "not composable"),
    ])
    def test_bad_paths(self, build, err, msg):
        with pytest.raises(err, match=msg):
            build()


class TestBideterminants:
    def test_example_value(self):
        t, products, want = verify.bitableau_example()
        assert bideterminant(t, products) == want
        assert str(want) == "a11*a22^2*x11*x21^2*x22^2 - a11*a22^2*x12*x21^3*x22"

    def test_block_standard(self):
        t, _, _ = verify.bitableau_example()
        assert is_block_standard(t)
        swapped = Bitableau(tuple(reversed(t.rows)))
        assert not is_block_standard(swapped)

    @pytest.mark.parametrize("p,q,ok", [((0,), (1, 0), True), ((1, 0), (0,), False), ((0,), (0,), True)])
    def test_tag_order(self, p, q, ok):
        assert tag_leq(p, q) is ok

    def test_chain_product(self):
        mats = {0: SymbolicMatrix.general("x", 2, 2), 1: SymbolicMatrix.general("a", 2, 2)}
        assert chain_product(mats, (1, 0)).entries == (mats[1] @ mats[0]).entries

    def test_missing_product_is_reported(self):
        t, products, _ = verify.bitableau_example()
        with pytest.raises(KeyError):
            bideterminant(t, {(0,): products[(0,)]})

    def test_framed_check_accepts_the_example(self):
        t, products, want = verify.bitableau_example()
        space = verify.framed_jordan_space()
        assert framed_affine_invariant_check(want, space)
        assert not framed_affine_invariant_check(var("x", 1, 1), space)


class TestHarness:
    @pytest.mark.parametrize("family,r,dim", [("A", 2, 6), ("A", 3, 15), ("D", 4, 28)])
    def test_dynkin_equality(self, family, r, dim):
        rep = theorem_harness(dynkin(family, r), 2, 2)
        assert rep.equal and rep.invariant_dim == rep.diagonal_dim == dim

    def test_two_loops_have_an_extra_invariant(self):
        rep = theorem_harness(jordan(2, ids=["a", "c"]), 2, 2)
        assert not rep.equal
        c = lambda i, j: var("c", i, j)  # noqa: E731
        assert rep.extra == [-a(1, 1) * c(1, 2) + a(1, 2) * c(1, 1) - a(1, 2) * c(2, 2) + a(2, 2) * c(1, 2)]
        assert is_unipotent_invariant(rep.extra[0], rep.space)

    def test_framed_space_invariants(self):
        space = general_rep(framed(jordan(1)), (2, 2), Filtration.complete((2, 2)))
        assert is_unipotent_invariant(var("x", 2, 1), space)
        assert not is_unipotent_invariant(var("x", 1, 1), space)
