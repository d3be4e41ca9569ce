"""Clustering: degree choosability, ruling-set clusters, separated clusters."""

import math
import statistics

import pytest

from fraccolor.clustering import (
    ClassificationError,
    Clustering,
    brute_degree_choosable,
    derive_alpha,
    gallai_degree_choosable,
    is_degree_choosable,
    mpx_clustering_separated,
    ruling_set_clustering,
)
from fraccolor.graphs import (
    complete_graph,
    cycle_graph,
    from_edges,
    generate_random_regular,
    path_graph,
    petersen_graph,
    random_tree,
)
from fraccolor.oracle import check_clustering


def adj_of(g, nodes):
    ns = set(nodes)
    return {v: set(g.adj[v]) & ns for v in nodes}


class TestDegreeChoosable:
    def test_even_cycle_true(self):
        g = cycle_graph(4)
        assert is_degree_choosable(list(g.nodes()), g)

    def test_odd_cycle_false(self):
        g = cycle_graph(5)
        assert not is_degree_choosable(list(g.nodes()), g)

    def test_k4_false(self):
        g = complete_graph(4)
        assert not is_degree_choosable(list(g.nodes()), g)

    def test_two_triangles_sharing_vertex_false(self):
        g = from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])
        assert not is_degree_choosable(list(g.nodes()), g)

    def test_c4_plus_pendant_true(self):
        g = from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])
        assert is_degree_choosable(list(g.nodes()), g)

    def test_trees_false(self):
        g = random_tree(6, seed=3)
        assert not is_degree_choosable(list(g.nodes()), g)

    def test_gallai_vs_brute_on_small_graphs(self):
        import random as _r

        for seed in range(20):
            rng = _r.Random(seed)
            n = rng.randrange(3, 6)
            edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                     if rng.random() < 0.55]
            g = from_edges(n, edges)
            if not g.is_connected() or g.delta > 3:
                continue  # degree-4 lists make the enumeration explode
            nodes = list(g.nodes())
            assert gallai_degree_choosable(nodes, adj_of(g, nodes)) == \
                brute_degree_choosable(nodes, adj_of(g, nodes))

    def test_disconnected_rejected(self):
        g = from_edges(4, [(0, 1), (2, 3)])
        with pytest.raises(ValueError):
            is_degree_choosable([0, 1, 2, 3], g)


class TestDeriveAlpha:
    def test_inequality_holds(self):
        for q in (1, 2, 4, 8, 16):
            for delta in (3, 4, 5):
                alpha, c, k = derive_alpha(q, delta)
                assert k >= 0 and k % 2 == 0
                assert (delta - 1) ** (k // 2) >= q

    def test_small_delta_large_q_fails(self):
        with pytest.raises(ClassificationError):
            derive_alpha(4, 2)


class TestRulingSetClustering:
    def every_node_clustered(self, g, cl):
        assert all(cl.center_of[v] is not None for v in g.nodes())

    def centers_far_apart(self, g, cl):
        centers = sorted(set(cl.center_of.values()))
        for i, c1 in enumerate(centers):
            d = g.bfs_distances(c1)
            for c2 in centers[i + 1:]:
                assert d.get(c2, math.inf) >= cl.alpha

    def nearest_center_respected(self, g, cl):
        centers = set(cl.members)
        for v in g.nodes():
            dists = {c: g.bfs_distances(c).get(v, math.inf) for c in centers}
            best = min(dists.values())
            choices = {c for c, dv in dists.items() if dv == best}
            assert cl.center_of[v] in choices
            assert cl.dist_to_center[v] == best

    def witnesses_verify(self, g, cl, q):
        for c, tag in cl.tags.items():
            mem = set(cl.members[c])
            if tag.kind == "large":
                assert len(mem) >= q
            elif tag.kind == "lowdeg":
                assert g.degree(tag.witness) <= g.delta - 1
                assert tag.witness in mem
            else:
                comp = list(tag.witness)
                assert set(comp) <= mem
                assert is_degree_choosable(comp, g)
                for x in comp:
                    assert all(u in mem for u in g.adj[x])

    def test_single_clique_is_large(self):
        g = complete_graph(4)  # K_{delta+1} with delta = 3
        cl = ruling_set_clustering(g, q=2)
        assert len(cl.members) == 1
        (tag,) = cl.tags.values()
        assert tag.kind == "large"

    def test_tree_clusters_admit_lowdeg(self):
        g = random_tree(30, seed=1)
        cl = ruling_set_clustering(g, q=40)  # too few nodes for Large
        for tag in cl.tags.values():
            assert tag.kind == "lowdeg"

    def test_three_regular_full_contract(self):
        g = generate_random_regular(60, 3, seed=4)
        for q in (2, 4):
            cl = ruling_set_clustering(g, q=q)
            self.every_node_clustered(g, cl)
            self.centers_far_apart(g, cl)
            self.nearest_center_respected(g, cl)
            self.witnesses_verify(g, cl, q)
            rep = check_clustering(g, cl.center_of, separation=1)
            assert rep.valid_assignment and rep.connected_clusters
            assert rep.max_strong_diameter <= cl.diameter_bound

    def test_classification_error_when_no_case_applies(self):
        # K_4 = K_{delta+1} with q above the clique size: not Large, all
        # degrees delta, every component a clique: the guarantee fails and
        # the artifact must say so rather than proceed.
        g = complete_graph(4)
        with pytest.raises(ClassificationError):
            ruling_set_clustering(g, q=7)


class TestMpxSeparated:
    def test_single_node_always_clustered(self):
        g = from_edges(1, [])
        cl = mpx_clustering_separated(g, epsilon=0.3, seed=0)
        assert cl.center_of[0] == 0

    def test_separation_exact_every_run(self):
        g = generate_random_regular(60, 3, seed=7)
        for seed in range(25):
            cl = mpx_clustering_separated(g, epsilon=0.3, seed=seed)
            rep = check_clustering(g, cl.center_of, separation=2)
            assert rep.separation_ok, rep.separation_witness
            assert rep.valid_assignment

    def test_high_epsilon_still_separated(self):
        g = cycle_graph(20)
        cl = mpx_clustering_separated(g, epsilon=0.95, seed=3)
        rep = check_clustering(g, cl.center_of, separation=2)
        assert rep.separation_ok

    def test_pre_removal_clusters_connected(self):
        g = generate_random_regular(40, 3, seed=2)
        for seed in range(15):
            cl = mpx_clustering_separated(g, epsilon=0.25, seed=seed)
            rep = check_clustering(g, cl.pre_removal, separation=1)
            assert rep.connected_clusters
            assert rep.unclustered_fraction == 0  # everyone assigned pre-removal

    def test_unclustered_rate_below_epsilon(self):
        g = generate_random_regular(40, 3, seed=9)
        eps = 0.3
        rates = [
            mpx_clustering_separated(g, epsilon=eps, seed=s).center_of
            for s in range(120)
        ]
        fracs = [sum(1 for v in g.nodes() if co[v] is None) / g.n for co in rates]
        sigma = math.sqrt(eps * (1 - eps) / len(fracs))
        assert statistics.fmean(fracs) <= eps + 3 * sigma

    def test_truncation_leaves_unfinished_unclustered(self):
        g = cycle_graph(30)
        cl = mpx_clustering_separated(g, epsilon=0.05, seed=1, round_cap=1)
        # with a one-round cap, remote centers cannot certify: some nodes drop
        assert None in cl.center_of.values()

    def test_deterministic_given_seed(self):
        g = generate_random_regular(30, 3, seed=5)
        a = mpx_clustering_separated(g, epsilon=0.2, seed=11)
        b = mpx_clustering_separated(g, epsilon=0.2, seed=11)
        assert a.center_of == b.center_of
        assert a.to_json() == b.to_json()
