from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from filtquiv.quiver import (Arrow, PathwayOverflowError, Quiver, QuiverError, affine_a, all_paths_acyclic,
                             at_most_two_pathways, compose, dim_vector, double, dynkin, dynkin_edges,
                             enumerate_pathways, euler_form, framed, is_reduced, jordan, kronecker,
                             letter_ids, max_pathways, opposite, path_from_arrows, sigma, symmetrized_form,
                             trivial_path, unit_vector)


@pytest.fixture
def jordan2():
    return jordan(2)


class TestConstruction:
    def test_letter_ids(self):
        assert letter_ids(3) == ["a", "b", "c"]

    def test_kronecker_and_jordan(self, jordan2):
        assert kronecker(2).arrows == (Arrow("a", 1, 2), Arrow("b", 1, 2))
        assert jordan2.arrows == (Arrow("a", 1, 1), Arrow("b", 1, 1))
        assert list(jordan2.vertices) == [1]
        assert jordan(2, ids=["a", "c"]).arrow_ids() == ["a", "c"]

    def test_dynkin_orientation(self):
        assert dynkin("A", 3).arrows == (Arrow("a", 1, 2), Arrow("b", 2, 3))
        assert dynkin("A", 3, orientation=[True, False]).arrows == (Arrow("a", 1, 2), Arrow("b", 3, 2))

    @pytest.mark.parametrize("family,r,edges", [
        ("D", 4, [(1, 2), (2, 3), (2, 4)]),
        ("E", 6, [(1, 2), (2, 3), (3, 5), (5, 6), (3, 4)]),
    ])
    def test_dynkin_edges(self, family, r, edges):
        assert dynkin_edges(family, r) == edges

    def test_framing_adds_marked_vertex(self):
        q = framed(jordan(1))
        assert q.arrows == (Arrow("a", 1, 1), Arrow("x", 2, 1))
        assert q.is_framed(2) and not q.is_framed(1)
        assert q.vertex_label(2) == "1♮"

    def test_double_and_opposite(self):
        assert double(kronecker(1)).arrows == (Arrow("a", 1, 2), Arrow("aop", 2, 1))
        assert opposite(kronecker(1)).arrows == (Arrow("a", 2, 1),)

    def test_reflection_reverses_arrows_at_vertex(self):
        assert dynkin("A", 2).reflected_at(2).arrows == (Arrow("a", 2, 1),)

    def test_acyclicity(self):
        assert kronecker(1).is_acyclic() and not jordan(1).is_acyclic()
        assert not affine_a(2).is_acyclic()

    @pytest.mark.parametrize("build,msg", [
        (lambda: dynkin("A", 0), "A_r needs r >= 1"),
        (lambda: dynkin("E", 9), r"E_r needs r in \{6, 7, 8\}"),
        (lambda: Quiver(2, [Arrow("a", 1, 3)]), "outside 1..2"),
        (lambda: Quiver(2, [Arrow("a", 1, 2), Arrow("a", 2, 1)]), "unique"),
        (lambda: Quiver(-1, []), "nonnegative"),
        (lambda: jordan(2).arrow("z"), "no arrow named 'z'"),
        (lambda: dim_vector(jordan(1), [-1]), "nonnegative"),
        (lambda: euler_form(jordan(1), (1,), (1, 2)), "does not match"),
    ])
    def test_errors(self, build, msg):
        with pytest.raises(QuiverError, match=msg):
            build()


class TestForms:
    def test_euler_form_affine_a1(self):
        q = affine_a(1)
        assert [[euler_form(q, unit_vector(q, i), unit_vector(q, j)) for j in q.vertices] for i in q.vertices] \
            == [[1, -1], [-1, 1]]

    def test_kronecker_symmetrized_form(self):
        assert symmetrized_form(kronecker(2), (1, 1), (1, 1)) == 0

    def test_sigma(self):
        assert sigma(dynkin("A", 2), 2, (1, 1)) == (1, 0)

    @given(st.lists(st.integers(0, 5), min_size=3, max_size=3), st.lists(st.integers(0, 5), min_size=3, max_size=3))
    def test_symmetrized_form_is_symmetric_and_bilinear(self, x, y):
        q = dynkin("A", 3, orientation=[True, False])
        assert symmetrized_form(q, x, y) == symmetrized_form(q, y, x)
        assert symmetrized_form(q, x, y) == euler_form(q, x, y) + euler_form(q, y, x)

    @given(st.lists(st.integers(0, 6), min_size=3, max_size=3), st.integers(1, 3))
    def test_sigma_is_an_involution_preserving_the_form(self, beta, i):
        q = dynkin("A", 3)
        once = sigma(q, i, beta)
        assert sigma(q, i, once) == tuple(beta)
        assert symmetrized_form(q, once, once) == symmetrized_form(q, beta, beta)


class TestPaths:
    def test_composition_order_rendering(self, jordan2):
        p = path_from_arrows(jordan2, ["a", "b"])
        assert str(p) == "ba"
        assert (p.length, p.tail, p.head) == (2, 1, 1)
        assert compose(trivial_path(1), p) == p

    @pytest.mark.parametrize("word,ok", [(["a", "a"], False), (["a", "b", "a"], True),
                                         (["a", "b", "a", "b"], False), ([], True)])
    def test_square_free_words(self, word, ok):
        assert is_reduced(word) is ok

    def test_seven_pathways_on_two_loops(self, jordan2):
        got = {"".join(p.arrows) for p in enumerate_pathways(jordan2)[(1, 1)]}
        assert got == {"", "a", "b", "ab", "ba", "aba", "bab"}
        assert max_pathways(jordan2) == 7
        assert not at_most_two_pathways(jordan2)

    @pytest.mark.parametrize("q,expected", [
        (jordan(1), True), (affine_a(1), True), (kronecker(2), True), (kronecker(3), False),
    ])
    def test_at_most_two(self, q, expected):
        assert at_most_two_pathways(q) is expected

    def test_three_loops_overflow(self):
        with pytest.raises(PathwayOverflowError, match="exceed length 10"):
            enumerate_pathways(jordan(3), max_length=10)

    def test_acyclic_path_listing(self):
        paths = all_paths_acyclic(dynkin("A", 3))
        assert [p.arrows for p in paths[(1, 3)]] == [("a", "b")]

    @given(st.lists(st.sampled_from("ab"), max_size=8))
    def test_reduced_words_are_exactly_the_enumerated_ones(self, word):
        listed = {p.arrows for p in enumerate_pathways(jordan(2))[(1, 1)]}
        assert is_reduced(word) == (tuple(word) in listed)
