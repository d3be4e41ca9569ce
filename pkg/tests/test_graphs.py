"""Graph construction, generators, powers, subdivisions, serialization."""

import math
from collections import deque

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraccolor.graphs import (
    DeskCapError,
    GenerationError,
    Graph,
    GridSpec,
    SubdivisionSpec,
    complete_graph,
    cycle_graph,
    from_edge_list,
    from_edges,
    generate_grid,
    generate_random_regular,
    girth,
    infinity_distance,
    path_graph,
    petersen_graph,
    power_graph,
    random_tree,
    subdivide_edges,
    subdivision_tags,
    to_edge_list,
)


def brute_distances(g, source):
    """Plain BFS independent of Graph.bfs_distances (different queue style)."""
    dist = {source: 0}
    layer = [source]
    d = 0
    while layer:
        nxt = []
        for v in layer:
            for u in g.adj[v]:
                if u not in dist:
                    dist[u] = d + 1
                    nxt.append(u)
        layer = nxt
        d += 1
    return dist


class TestGrids:
    def test_cycle_via_grid(self):
        g = generate_grid(GridSpec((5,), (True,)))
        assert g.n == 5 and g.m == 5
        assert all(g.degree(v) == 2 for v in g.nodes())

    def test_3x3_open_grid(self):
        g = generate_grid(GridSpec((3, 3), (False, False)))
        assert g.n == 9 and g.m == 12

    def test_4x4_torus_regular(self):
        g = generate_grid(GridSpec((4, 4), (True, True)))
        assert g.n == 16 and g.m == 32
        assert all(g.degree(v) == 4 for v in g.nodes())

    def test_all_wrapped_grids_are_2d_regular(self):
        for sides in [(6,), (3, 4), (3, 3, 4)]:
            g = generate_grid(GridSpec(sides, tuple(True for _ in sides)))
            assert all(g.degree(v) == 2 * len(sides) for v in g.nodes())

    def test_side_2_wrap_has_no_multiedge(self):
        g = generate_grid(GridSpec((2, 3), (True, True)))
        # axis of length 2 with wrap still yields a simple graph
        assert all(len(set(g.adj[v])) == len(g.adj[v]) for v in g.nodes())

    def test_bad_specs(self):
        with pytest.raises(ValueError):
            GridSpec((1,), (False,))
        with pytest.raises(ValueError):
            GridSpec((), ())
        with pytest.raises(DeskCapError):
            generate_grid(GridSpec((2000, 2000), (False, False)))


class TestRandomRegular:
    def test_k4_forced(self):
        g = generate_random_regular(4, 3, seed=7)
        assert g.m == 6  # the unique 3-regular graph on 4 nodes

    def test_regularity_over_seeds(self):
        for seed in range(5):
            g = generate_random_regular(10, 3, seed=seed)
            assert all(g.degree(v) == 3 for v in g.nodes())
            assert g.n == 10

    def test_odd_product_rejected(self):
        with pytest.raises(ValueError):
            generate_random_regular(5, 3, seed=0)

    def test_determinism(self):
        a = generate_random_regular(12, 3, seed=3)
        b = generate_random_regular(12, 3, seed=3)
        assert a.adj == b.adj and a.ids == b.ids

    def test_budget_exhaustion_reported(self):
        with pytest.raises(GenerationError):
            generate_random_regular(6, 5, seed=0, max_tries=1)


class TestPowerGraph:
    def test_c5_squared_is_k5(self):
        g = cycle_graph(5)
        h = power_graph(g, 2)
        assert h.m == 10

    def test_p4_squared_degrees(self):
        g = path_graph(4)
        h = power_graph(g, 2)
        # independent oracle: brute BFS distance for every pair
        expect = set()
        for u in g.nodes():
            d = brute_distances(g, u)
            for v, dv in d.items():
                if u < v and 0 < dv <= 2:
                    expect.add((u, v))
        assert set(h.edges()) == expect
        assert sorted(h.degree(v) for v in h.nodes()) == [2, 2, 3, 3]

    def test_torus_infinity_norm_moore_neighborhood(self):
        g = generate_grid(GridSpec((4, 4), (True, True)))
        h = power_graph(g, 1, metric="infinity")
        assert all(h.degree(v) == 8 for v in h.nodes())

    def test_infinity_needs_coords(self):
        g = complete_graph(4)
        with pytest.raises(ValueError):
            power_graph(g, 1, metric="infinity")

    def test_power_composition_contained(self):
        for build in (lambda: cycle_graph(9), lambda: path_graph(8),
                      lambda: petersen_graph()):
            g = build()
            for a, b in [(2, 2), (2, 3)]:
                lhs = set(power_graph(power_graph(g, a), b).edges())
                rhs = set(power_graph(g, a * b).edges())
                assert lhs <= rhs

    def test_power_composition_equality_on_paths_cycles(self):
        for g in (path_graph(11), cycle_graph(12), cycle_graph(7)):
            lhs = set(power_graph(power_graph(g, 2), 3).edges())
            rhs = set(power_graph(g, 6).edges())
            assert lhs == rhs


class TestSubdivision:
    def test_k3_subdivision_is_c9(self):
        h = subdivide_edges(SubdivisionSpec(k=1, base=complete_graph(3)))
        assert h.n == 9
        assert girth(h) == 9
        assert all(h.degree(v) == 2 for v in h.nodes())

    def test_petersen_node_count(self):
        h = subdivide_edges(SubdivisionSpec(k=1, base=petersen_graph()))
        assert h.n == 10 + 2 * 15

    def test_single_edge_becomes_path(self):
        base = from_edges(2, [(0, 1)])
        h = subdivide_edges(SubdivisionSpec(k=2, base=base))
        assert h.n == 6
        assert sorted(h.degree(v) for v in h.nodes()) == [1, 1, 2, 2, 2, 2]

    def test_tags_distinguish_original_and_inner(self):
        h = subdivide_edges(SubdivisionSpec(k=1, base=complete_graph(3)))
        tags = subdivision_tags(h)
        assert sum(1 for t in tags if t[0] == "orig") == 3
        assert sum(1 for t in tags if t[0] == "inner") == 6

    def test_girth_multiplies(self):
        for base in (complete_graph(4), petersen_graph(), cycle_graph(5)):
            for k in (1, 2):
                h = subdivide_edges(SubdivisionSpec(k=k, base=base))
                assert girth(h) == (2 * k + 1) * girth(base)


class TestGirth:
    def test_trees_have_infinite_girth(self):
        assert math.isinf(girth(random_tree(12, seed=0)))
        assert math.isinf(girth(path_graph(6)))

    def test_cycles(self):
        for n in (3, 5, 8):
            assert girth(cycle_graph(n)) == n

    def test_petersen(self):
        assert girth(petersen_graph()) == 5

    def test_matches_brute_force_on_random_graphs(self):
        import itertools
        import random as _random

        def brute_girth(g):
            best = math.inf
            # shortest cycle through each edge: remove edge, BFS between ends
            for u, v in g.edges():
                adj = [list(nb) for nb in g.adj]
                adj[u].remove(v)
                adj[v].remove(u)
                dist = {u: 0}
                dq = deque([u])
                while dq:
                    x = dq.popleft()
                    for y in adj[x]:
                        if y not in dist:
                            dist[y] = dist[x] + 1
                            dq.append(y)
                if v in dist:
                    best = min(best, dist[v] + 1)
            return best

        for seed in range(8):
            rng = _random.Random(seed)
            n = rng.randrange(5, 12)
            edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                     if rng.random() < 0.25]
            g = from_edges(n, edges)
            assert girth(g) == brute_girth(g)


class TestIdsAndImmutability:
    def test_ids_injective_in_quadratic_space(self):
        g = generate_random_regular(10, 3, seed=1)
        assert len(set(g.ids)) == 10
        assert all(1 <= i <= g.id_space for i in g.ids)
        assert g.id_space == 100

    def test_id_permutation_seeded(self):
        a = from_edges(6, [(0, 1)], id_seed=1)
        b = from_edges(6, [(0, 1)], id_seed=2)
        assert a.ids != b.ids

    def test_invalid_graphs_rejected(self):
        with pytest.raises(ValueError):
            from_edges(3, [(0, 0)])
        with pytest.raises(ValueError):
            Graph(adj=((1,), ()), ids=(1, 2), id_space=4)

    def test_induced_subgraph_keeps_ids(self):
        g = cycle_graph(6)
        sub, keep = g.induced_subgraph([1, 2, 3])
        assert sub.n == 3 and sub.m == 2
        assert [g.ids[v] for v in keep] == list(sub.ids)


class TestEdgeListFormat:
    def test_roundtrip_plain(self):
        g = petersen_graph()
        text = to_edge_list(g)
        h = from_edge_list(text)
        assert set(h.edges()) == set(g.edges())
        assert text == to_edge_list(h)  # deterministic serialization

    def test_roundtrip_grid_keeps_structure(self):
        g = generate_grid(GridSpec((4, 3), (True, False)))
        h = from_edge_list(to_edge_list(g))
        assert h.coords == g.coords
        assert h.sides == g.sides and h.wrap == g.wrap
        # infinity-norm distances survive the round trip
        for u in range(0, g.n, 3):
            for v in range(g.n):
                assert infinity_distance(g, u, v) == infinity_distance(h, u, v)

    def test_header_checked(self):
        with pytest.raises(ValueError):
            from_edge_list("2 3\n0 1\n")


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 16), st.integers(0, 10**6))
def test_power_graph_of_cycle_by_hand(n, seed):
    k = seed % 3 + 1
    g = cycle_graph(n)
    h = power_graph(g, k)
    for u in range(n):
        for v in range(u + 1, n):
            ring = min((u - v) % n, (v - u) % n)
            assert h.has_edge(u, v) == (ring <= k)
