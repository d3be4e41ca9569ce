"""Exact oracle: LP-based chi_f, independence number, certificates, checkers."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraccolor.colorings import MultiColoring
from fraccolor.graphs import (
    DeskCapError,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    from_edges,
    path_graph,
    petersen_graph,
    random_graph,
    random_tree,
)
from fraccolor.oracle import (
    certify_lowerbound_family,
    check_clustering,
    check_multicoloring,
    chi_f_exact,
    chi_f_via_enumeration,
    chromatic_number,
    independence_number,
    max_weight_independent_set,
    maximal_independent_sets,
    simplex_max,
)


class TestSimplex:
    def test_tiny_lp(self):
        # max x + y st x <= 1, y <= 2, x + y <= 2
        A = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)],
             [Fraction(1), Fraction(1)]]
        res = simplex_max(A, [Fraction(1), Fraction(2), Fraction(2)],
                          [Fraction(1), Fraction(1)])
        assert res.value == 2

    def test_duals_price_constraints(self):
        A = [[Fraction(1)]]
        res = simplex_max(A, [Fraction(3)], [Fraction(2)])
        assert res.value == 6
        assert res.duals == [Fraction(2)]


class TestIndependenceNumber:
    def test_known_values(self):
        assert independence_number(cycle_graph(5)) == 2
        assert independence_number(petersen_graph()) == 4
        assert independence_number(complete_bipartite(3, 3)) == 3
        assert independence_number(complete_graph(6)) == 1

    def test_matches_enumeration_on_random_graphs(self):
        for seed in range(6):
            g = random_graph(10, 0.35, seed)
            sets = maximal_independent_sets(g)
            assert independence_number(g) == max(len(s) for s in sets)

    def test_cap(self):
        with pytest.raises(DeskCapError):
            independence_number(cycle_graph(50), cap=40)

    def test_weighted(self):
        g = path_graph(4)
        w, s = max_weight_independent_set(g, [5, 1, 1, 5])
        assert w == 10 and s == frozenset({0, 3})


class TestChiF:
    def test_odd_cycles_closed_form(self):
        for k in range(1, 7):
            g = cycle_graph(2 * k + 1)
            assert chi_f_exact(g).value == Fraction(2 * k + 1, k)

    def test_cliques(self):
        for n in (2, 3, 4, 5):
            assert chi_f_exact(complete_graph(n)).value == n

    def test_petersen(self):
        assert chi_f_exact(petersen_graph()).value == Fraction(5, 2)

    def test_bipartite(self):
        assert chi_f_exact(complete_bipartite(3, 4)).value == 2
        assert chi_f_exact(random_tree(15, seed=2)).value == 2

    def test_certificate_verifies(self):
        for g in (cycle_graph(7), petersen_graph(), random_graph(12, 0.3, 4)):
            res = chi_f_exact(g)
            assert res.verify(g)

    def test_matches_full_enumeration(self):
        for seed in range(5):
            g = random_graph(11, 0.3, seed)
            assert chi_f_exact(g).value == chi_f_via_enumeration(g)

    def test_sandwich_bounds_on_random_graphs(self):
        for seed in range(10):
            g = random_graph(12, 0.3, seed + 50)
            alpha = independence_number(g)
            chif = chi_f_exact(g).value
            chi = chromatic_number(g)
            assert Fraction(g.n, alpha) <= chif <= chi


class TestChromaticNumber:
    def test_known(self):
        assert chromatic_number(cycle_graph(5)) == 3
        assert chromatic_number(cycle_graph(6)) == 2
        assert chromatic_number(petersen_graph()) == 3
        assert chromatic_number(complete_graph(5)) == 5


class TestCheckMulticoloring:
    def test_valid_c5_five_two(self):
        g = cycle_graph(5)
        sets = [{1, 2}, {3, 4}, {5, 1}, {2, 3}, {4, 5}]
        mc = MultiColoring(p=5, q=2,
                           colors={v: frozenset(sets[v]) for v in range(5)})
        rep = check_multicoloring(g, mc)
        assert rep.valid and rep.complete
        assert rep.achieved_q_min == 2 and rep.ratio == 2.5

    def test_shared_color_invalid_with_witness(self):
        g = path_graph(2)
        mc = MultiColoring(p=3, q=1, colors={0: frozenset([1]), 1: frozenset([1])})
        rep = check_multicoloring(g, mc)
        assert not rep.valid
        assert rep.witness[0] == "edge"

    def test_empty_set_not_complete(self):
        g = path_graph(2)
        mc = MultiColoring(p=3, q=1, colors={0: frozenset([1]), 1: frozenset()})
        rep = check_multicoloring(g, mc)
        assert rep.valid and not rep.complete

    def test_palette_violation(self):
        g = path_graph(2)
        mc = MultiColoring(p=2, q=1, colors={0: frozenset([3]), 1: frozenset([1])})
        rep = check_multicoloring(g, mc)
        assert not rep.valid and rep.witness[0] == "palette"


class TestLowerBoundFamily:
    def test_k3_gives_c9(self):
        rep = certify_lowerbound_family(complete_graph(3), k=1)
        assert rep.n == 9
        assert rep.chi_f == Fraction(9, 4)
        assert rep.girth == 9
        assert rep.margin_over_two == Fraction(1, 4)

    def test_bipartite_control_margin_zero(self):
        rep = certify_lowerbound_family(complete_bipartite(2, 3), k=1)
        assert rep.chi_f == 2
        assert rep.margin_over_two == 0
        assert not rep.base_has_odd_cycle


class TestCheckClustering:
    def test_singletons(self):
        g = path_graph(4)
        rep = check_clustering(g, {v: v for v in g.nodes()}, separation=1)
        assert rep.valid_assignment
        assert rep.max_strong_diameter == 0
        assert rep.unclustered_fraction == 0

    def test_separation_violation_witnessed(self):
        g = path_graph(4)
        center = {0: 0, 1: 0, 2: 2, 3: 2}
        rep = check_clustering(g, center, separation=2)
        assert not rep.separation_ok
        assert rep.separation_witness[:2] == (1, 2)

    def test_unclustered_gap_separates(self):
        g = path_graph(5)
        center = {0: 0, 1: 0, 2: None, 3: 3, 4: 3}
        rep = check_clustering(g, center, separation=2)
        assert rep.separation_ok
        assert rep.unclustered_fraction == 0.2
        assert rep.max_strong_diameter == 1
        assert rep.connected_clusters


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_chi_f_bounds_property(seed):
    g = random_graph(9, 0.35, seed)
    chif = chi_f_exact(g).value
    alpha = independence_number(g)
    assert chif >= Fraction(g.n, alpha)
    assert chif <= chromatic_number(g)
