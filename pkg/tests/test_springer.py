from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filtquiv import linalg, verify
from filtquiv import springer as sp
from filtquiv.poly import Variable, var

F = Fraction


@pytest.fixture
def r2():
    return [[F(1), F(3)], [F(0), F(2)]]


@st.composite
def rss_matrices(draw, n=st.integers(2, 4)):
    k = draw(n)
    diag = draw(st.lists(st.integers(-9, 9), min_size=k, max_size=k, unique=True))
    return [[F(diag[a]) if a == b else (F(draw(st.integers(-5, 5)), draw(st.integers(1, 3))) if a < b else F(0))
             for b in range(k)] for a in range(k)]


@st.composite
def upper_invertible(draw, n):
    return [[F(draw(st.sampled_from([-2, -1, 1, 2, 3]))) if a == b else (F(draw(st.integers(-3, 3))) if a < b else F(0))
             for b in range(n)] for a in range(n)]


@st.composite
def rational_points(draw, n=st.integers(2, 4)):
    r = draw(rss_matrices(n))
    k = len(r)
    ent = st.integers(-5, 5)
    s = [[F(draw(ent)) if a >= b else F(0) for b in range(k)] for a in range(k)]
    x = [F(draw(ent)) for _ in range(k)]
    y = [F(draw(ent)) for _ in range(k)]
    return sp.MomentPoint(r, s, x, y)


def conj(b, m):
    return linalg.matmul(linalg.matmul(b, m), linalg.inverse(b))


class TestFrozenValues:
    def test_l_operators(self, r2):
        assert sp.l_operator(r2, 1) == [[1, -3], [0, 0]]
        assert sp.l_operator(r2, 2) == [[0, 3], [0, 1]]

    def test_diagonalizer(self, r2):
        assert sp.diagonalizer(r2) == [[1, -3], [0, 1]]
        assert sp.diagonalizer_inverse(r2) == [[1, 3], [0, 1]]

    def test_invariant_values(self, r2):
        vals = sp.invariant_functions(sp.MomentPoint.rational(r2, x=[5, 7], y=[11, 13]))
        assert vals.F == [-176, 322]
        assert vals.G == [0, 0]
        assert vals.H == [1, 2]
        assert vals.K == {(1, 2): 1, (2, 1): -1}

    def test_symbolic_moment_map_n2(self):
        mu = sp.moment_b(sp.MomentPoint.symbolic(2))
        assert [[str(e) for e in row] for row in mu] == [
            ["r12*s21 + x1*y1", "0"], ["-r11*s21 + r22*s21 + x2*y1", "-r12*s21 + x2*y2"]]

    def test_z_forms_n2(self):
        assert str(sp.f_z_form(2, 1)) == "x2*y1*z12_12 + x1*y1"
        assert str(sp.f_z_form(2, 2)) == "x2*y1*z21_12 + x2*y2"

    @pytest.mark.parametrize("r,want", [([[F(2)]], 1), ([[F(1), F(3)], [F(0), F(2)]], 0),
                                        ([[F(1), F(1), F(0)], [F(0), F(2), F(1)], [F(0), F(0), F(4)]], 0)])
    def test_l_determinant(self, r, want):
        # each L^ι is a rank-one projection, so its determinant vanishes once n >= 2
        assert sp.l_determinant(r, 1) == want


class TestLocal:
    def test_inverse_difference(self):
        d = sp.Local.inv_diff(1, 2)
        assert str(d) == "1/(r11 - r22)"
        assert d * sp.Local(sp.r_var(1, 1) - sp.r_var(2, 2)) == 1
        assert sp.Local.inv_diff(2, 1) == -d

    def test_diagonal_difference_rejected(self):
        with pytest.raises(sp.NotRSSError):
            sp.Local.inv_diff(2, 2)

    def test_evaluation(self):
        d = sp.Local(sp.r_var(1, 2)) * sp.Local.inv_diff(1, 2)
        pt = {Variable.entry("r", 1, 1): 5, Variable.entry("r", 2, 2): 3, Variable.entry("r", 1, 2): 4}
        assert d.evaluate(pt) == 2
        with pytest.raises(sp.NotRSSError):
            d.evaluate({**pt, Variable.entry("r", 2, 2): 5})

    def test_unhashable(self):
        with pytest.raises(TypeError):
            hash(sp.Local(1))


class TestValidation:
    def test_repeated_eigenvalue(self):
        with pytest.raises(sp.NotRSSError, match="repeats"):
            sp.check_rss([[F(1), F(2)], [F(0), F(1)]])

    @pytest.mark.parametrize("kwargs,msg", [
        (dict(r=[[1, 0], [1, 2]]), "upper triangular"),
        (dict(r=[[1, 0], [0, 2]], s=[[0, 1], [0, 0]]), "lower triangular"),
        (dict(r=[[1, 0], [0, 2]], x=[1]), "n entries"),
    ])
    def test_point_shape(self, kwargs, msg):
        with pytest.raises(ValueError, match=msg):
            sp.MomentPoint.rational(**kwargs)

    def test_act_needs_upper_b(self, r2):
        with pytest.raises(ValueError, match="upper triangular"):
            sp.act([[1, 0], [1, 1]], sp.MomentPoint.rational(r2))


class TestProperties:
    @given(rss_matrices())
    @settings(max_examples=60, deadline=None)
    def test_projector_suite(self, r):
        assert verify.l_suite(r)

    @given(rss_matrices(), st.data())
    @settings(max_examples=40, deadline=None)
    def test_support_and_commutation(self, r, data):
        n = len(r)
        s = [[F(data.draw(st.integers(-5, 5))) if a >= b else F(0) for b in range(n)] for a in range(n)]
        for k in range(n):
            L = sp.l_operator(r, k + 1)
            assert linalg.matmul(L, r) == linalg.matmul(r, L)
            assert all(L[g][m] == 0 for g in range(n) for m in range(n) if g > k or m < k)
            Ls = linalg.matmul(L, s)
            assert all(Ls[g][m] == 0 for g in range(k + 1, n) for m in range(n))

    @given(rss_matrices())
    @settings(max_examples=30, deadline=None)
    def test_no_framing_forces_diagonal_s(self, r):
        n = len(r)
        zero = [F(0)] * n
        s = sp.solve_subdiagonals(r, zero, zero, list(range(1, n + 1)))
        assert all(s[a][b] == 0 for a in range(n) for b in range(n) if a != b)

    @given(rss_matrices())
    @settings(max_examples=40, deadline=None)
    def test_closed_form_matches_product(self, r):
        for k in range(1, len(r) + 1):
            assert sp.l_closed_form(r, k) == sp.l_operator(r, k)

    @given(rss_matrices(st.integers(2, 3)), st.data())
    @settings(max_examples=40, deadline=None)
    def test_l_is_equivariant(self, r, data):
        b = data.draw(upper_invertible(len(r)))
        for k in range(1, len(r) + 1):
            assert sp.l_operator(conj(b, r), k) == conj(b, sp.l_operator(r, k))

    @given(rational_points(), st.data())
    @settings(max_examples=40, deadline=None)
    def test_moment_map_is_equivariant(self, p, data):
        b = data.draw(upper_invertible(p.n))
        lhs = sp.moment_b(sp.act(b, p))
        rhs = sp.project_lower(conj(b, sp.moment_b(p)), sp.RATIONAL)
        assert lhs == rhs

    @given(rational_points(), st.data())
    @settings(max_examples=40, deadline=None)
    def test_invariant_functions_are_invariant(self, p, data):
        b = data.draw(upper_invertible(p.n))
        assert sp.invariant_functions(sp.act(b, p)) == sp.invariant_functions(p)

    @given(rational_points())
    @settings(max_examples=30, deadline=None)
    def test_symbolic_and_rational_routes_agree(self, p):
        n = p.n
        P = sp.MomentPoint.symbolic(n, s=False, framing=False)
        point = {Variable.entry("r", a + 1, b + 1): p.r[a][b] for a in range(n) for b in range(a, n)}
        for k in range(1, n + 1):
            sym = sp.l_operator(P.r, k)
            assert [[e.evaluate(point) for e in row] for row in sym] == sp.l_operator(p.r, k)


class TestSolver:
    @given(rational_points())
    @settings(max_examples=40, deadline=None)
    def test_rational_solution(self, p):
        diag = [p.s[k][k] for k in range(p.n)]
        s = sp.solve_subdiagonals(p.r, p.x, p.y, diag)
        q = sp.MomentPoint(p.r, s, p.x, p.y)
        mu = sp.moment_b(q)
        assert all(mu[a][b] == 0 for a in range(p.n) for b in range(a))
        assert all(mu[k][k] == sp.framing_form(q, k + 1) for k in range(p.n))

    @pytest.mark.parametrize("n", [2, 3])
    def test_z_form_matches_framing_form(self, n):
        P = sp.MomentPoint.symbolic(n)
        for k in range(1, n + 1):
            assert sp.z_to_local(sp.f_z_form(n, k)) == sp.framing_form(P, k)

    def test_z_names(self):
        assert sp.z_name(1, 2, 1, 2) == "z12_12"
        assert sp.z_value("z12_12") == sp.Local(sp.r_var(1, 2)) * sp.Local.inv_diff(1, 2)


class TestOrder:
    def test_priority(self):
        assert [str(v) for v in sp.OrderedMonomialSpec(3).priority] == ["x1", "x2", "x3", "y3", "y2", "y1"]

    def test_polynomials_need_an_order(self):
        with pytest.raises(ValueError, match="monomial order"):
            sp.initial_terms_regular([sp.f_z_form(2, 1)])

    @pytest.mark.parametrize("n", [2, 3])
    def test_initial_terms(self, n):
        order = sp.OrderedMonomialSpec(n)
        for k in range(1, n + 1):
            assert sp.initial_term(sp.f_z_form(n, k), order) == ((Variable.scalar(f"x{k}"), 1),
                                                                 (Variable.scalar(f"y{k}"), 1))

    def test_shared_variable_breaks_regularity(self):
        order = sp.OrderedMonomialSpec(2)
        rep = sp.initial_terms_regular([var("x1") * var("y1"), var("x1") * var("y2")], order)
        assert not rep.regular

    @given(st.lists(st.integers(0, 2), min_size=4, max_size=4), st.lists(st.integers(0, 2), min_size=4, max_size=4),
           st.lists(st.integers(0, 2), min_size=4, max_size=4))
    def test_order_is_multiplicative(self, e1, e2, e3):
        order = sp.OrderedMonomialSpec(2)
        names = [Variable.scalar(s) for s in ("x1", "x2", "y1", "y2")]
        mono = lambda es: tuple((v, e) for v, e in sorted(zip(names, es)) if e)  # noqa: E731
        assert order.check_multiplicative(mono(e1), mono(e2), mono(e3))


class TestIdentities:
    def test_n2_report(self):
        rep = sp.n2_identities()
        assert rep.ok
        assert [str(p) for p in rep.forced] == ["R1"]
        assert [str(p) for p in rep.residual_system] == ["R2*T + S1 + S2"]


class TestTorusLimit:
    def test_zero_exponents_fix_the_point(self, r2):
        p = sp.MomentPoint.rational(r2, s=[[1, 0], [2, 3]], x=[5, 7], y=[11, 13])
        lim = sp.torus_limit(p, [0, 0])
        assert lim.exists and lim.point == p

    def test_negative_exponent_on_nonzero_x_blocks(self, r2):
        lim = sp.torus_limit(sp.MomentPoint.rational(r2, x=[1, 0]), [-1, 0])
        assert not lim.exists
        assert lim.blocking == ["r12", "x1"]
        assert str(lim) == "no limit: r12, x1"

    def test_recipe_on_a_zero_fibre_point(self):
        p = sp.MomentPoint.rational([[1, 0], [0, 2]], x=[1, 0], y=[0, 3])
        assert all(e == 0 for row in sp.moment_b(p) for e in row)
        a = sp.recipe_exponents(p)
        assert a == [1, -1]
        lim = sp.torus_limit(p, a)
        assert lim.exists
        assert lim.point.x == [0, 0] and lim.point.y == [0, 0]
        assert lim.point.r == p.r

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_unframed_point_flows_to_its_diagonal(self, n):
        # r_ιγ scales by t^(a_ι - a_γ), so a decreasing exponent sequence kills the upper part
        rng = random.Random(n)
        p = sp.MomentPoint.rational(verify.random_rss(n, rng))
        lim = sp.torus_limit(p, [-k for k in range(n)])
        assert lim.exists
        assert lim.point.r == [[p.r[u][u] if u == v else 0 for v in range(n)] for u in range(n)]
        assert not sp.torus_limit(p, list(range(n))).exists

    def test_recipe_needs_xy_zero(self):
        with pytest.raises(ValueError, match="both nonzero"):
            sp.recipe_exponents(sp.MomentPoint.rational([[1, 0], [0, 2]], x=[1, 0], y=[1, 0]))

    def test_exponent_count(self, r2):
        with pytest.raises(ValueError, match="need 2 exponents"):
            sp.torus_limit(sp.MomentPoint.rational(r2), [1])

    def test_random_seeded_suite(self):
        rng = random.Random(11)
        for n in (2, 3):
            assert verify.l_suite(verify.random_rss(n, rng))
