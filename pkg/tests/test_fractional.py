"""Multicoloring pipelines: peeling, Theorem-1/2 constructions, combinators."""

import math
import statistics
from fractions import Fraction

import pytest

from fraccolor.clustering import ruling_set_clustering
from fraccolor.colorings import MultiColoring
from fraccolor.fractional import (
    AmplifyParams,
    Theorem1Pipeline,
    amplify,
    enumerate_seeds_derandomize,
    fast_no_logstar,
    partial_delta_coloring_with_marks,
    path_complete,
    q_delta_coloring,
    q_delta_coloring_sloppy,
    sloppy_partial_delta_run,
    small_support_coloring,
)
from fraccolor.graphs import (
    complete_graph,
    cycle_graph,
    from_edges,
    generate_random_regular,
    random_tree,
)
from fraccolor.oracle import check_multicoloring
from fraccolor.sim import derive_seed


class TestPartialDeltaColoring:
    def test_tree_cluster_nothing_uncolored(self):
        g = random_tree(40, seed=3)
        cl = ruling_set_clustering(g, q=50)  # all clusters low-degree
        out, _ = partial_delta_coloring_with_marks(g, cl, marks={})
        out.validate(g)
        assert all(c is not None for c in out.color)

    def test_large_cluster_only_mark_uncolored(self):
        g = generate_random_regular(60, 3, seed=4)
        cl = ruling_set_clustering(g, q=4)
        large = [c for c, t in cl.tags.items() if t.kind == "large"]
        assert large
        marks = {c: min(cl.members[c]) for c in large}
        out, _ = partial_delta_coloring_with_marks(g, cl, marks=marks)
        out.validate(g)
        uncolored = {v for v in g.nodes() if out.color[v] is None}
        assert uncolored == set(marks.values())

    def test_missing_mark_on_large_cluster_rejected(self):
        g = generate_random_regular(60, 3, seed=4)
        cl = ruling_set_clustering(g, q=4)
        with pytest.raises(ValueError):
            partial_delta_coloring_with_marks(g, cl, marks={})


class TestQDeltaColoring:
    def test_q1_disjointness_only(self):
        g = generate_random_regular(20, 3, seed=1)
        res = q_delta_coloring(g, q=1)
        rep = check_multicoloring(g, res.mc)
        assert rep.valid
        assert res.mc.q == 0

    def test_12_3_coloring_on_3_regular(self):
        g = generate_random_regular(60, 3, seed=5)
        res = q_delta_coloring(g, q=4)
        rep = check_multicoloring(g, res.mc)
        assert rep.valid and rep.complete
        assert res.mc.p == 12 and res.mc.q == 3
        assert rep.ratio <= 4.0

    def test_32_7_on_4_regular(self):
        g = generate_random_regular(40, 4, seed=7)
        res = q_delta_coloring(g, q=8)
        rep = check_multicoloring(g, res.mc)
        assert rep.valid and rep.complete
        assert res.mc.p == 32 and res.mc.q == 7

    def test_each_node_missing_at_most_one_run(self):
        g = generate_random_regular(60, 3, seed=6)
        res = q_delta_coloring(g, q=4)
        for v in g.nodes():
            assert len(res.mc.color_set(v)) >= 4 - 1

    def test_direct_fallback_on_small_cycle(self):
        # C5 sits below the clustering guarantee (delta=2), but a (4:1)
        # coloring exists and the whole-ball fallback finds it.
        g = cycle_graph(5)
        res = q_delta_coloring(g, q=2)
        assert res.method == "direct"
        rep = check_multicoloring(g, res.mc)
        assert rep.valid and rep.complete

    def test_infeasible_combination_raises(self):
        # K_4 with q=7 asks for ratio 21/6 < chi_f(K4) = 4: no such coloring
        # exists; the pipeline must fail loudly rather than fake one.
        from fraccolor.clustering import ClassificationError

        g = complete_graph(4)
        with pytest.raises(ClassificationError):
            q_delta_coloring(g, q=7)

    def test_deterministic(self):
        g = generate_random_regular(30, 3, seed=2)
        a = q_delta_coloring(g, q=2)
        b = q_delta_coloring(g, q=2)
        assert a.mc.to_json() == b.mc.to_json()


class TestPathComplete:
    def test_q1_p3(self):
        lists = {0: frozenset([1, 2]), 1: frozenset([1, 2, 3]), 2: frozenset([2, 3])}
        out = path_complete([0, 1, 2], lists, q=1)
        assert all(len(s) == 1 for s in out.values())
        assert out[0].isdisjoint(out[1]) and out[1].isdisjoint(out[2])

    def test_q2_p5(self):
        lists = {v: frozenset(range(1, 6)) for v in range(5)}
        lists[0] = frozenset([1, 2, 3])
        lists[4] = frozenset([3, 4, 5])
        out = path_complete(list(range(5)), lists, q=2)
        for i in range(4):
            assert out[i].isdisjoint(out[i + 1])
        for v, s in out.items():
            assert s <= lists[v] and len(s) == 2

    def test_threshold_violation_rejected(self):
        lists = {v: frozenset(range(1, 5)) for v in range(5)}  # inner needs 5
        with pytest.raises(ValueError):
            path_complete(list(range(5)), lists, q=2)

    def test_random_threshold_instances_always_complete(self):
        import random as _r

        for seed in range(40):
            rng = _r.Random(seed)
            q = rng.choice([1, 2, 3])
            universe = list(range(1, 4 * q + 4))
            lists = {}
            n = 2 * q + 1
            for i in range(n):
                need = q + 1 if i in (0, n - 1) else 2 * q + 1
                lists[i] = frozenset(rng.sample(universe, need))
            out = path_complete(list(range(n)), lists, q=q)
            for i in range(n - 1):
                assert out[i].isdisjoint(out[i + 1])


class TestSmallSupport:
    def test_7_2_on_3_regular(self):
        g = generate_random_regular(60, 3, seed=8)
        res = small_support_coloring(g, q=2)
        rep = check_multicoloring(g, res.mc)
        assert rep.valid and rep.complete
        assert res.mc.p == 7 and res.mc.q == 2
        assert rep.ratio <= 3.5

    def test_q1_plain_delta_plus_one(self):
        g = generate_random_regular(30, 3, seed=9)
        res = small_support_coloring(g, q=1)
        rep = check_multicoloring(g, res.mc)
        assert rep.valid and rep.complete
        assert res.mc.p == 4 and res.mc.q == 1

    def test_small_graph_direct_route(self):
        g = cycle_graph(6)
        res = small_support_coloring(g, q=2)
        rep = check_multicoloring(g, res.mc)
        assert rep.valid and rep.complete
        assert res.mc.p == 5  # q*delta+1 with delta=2
        assert res.method == "direct"


class TestAmplify:
    def make_synthetic_base(self, n, q, p, drop_prob):
        def base(seed):
            import random as _r

            colors = {}
            for v in range(n):
                rng = _r.Random(derive_seed(seed, "syn", v))
                if rng.random() < drop_prob:
                    colors[v] = frozenset()
                else:
                    colors[v] = frozenset(range(1, q + 1))
            return MultiColoring(p=p, q=q, colors=colors)

        return base

    def test_never_failing_base_gets_qt(self):
        n = 12
        base = self.make_synthetic_base(n, q=2, p=4, drop_prob=0.0)
        res = amplify(base, AmplifyParams(epsilon=0.25, t=20), n=n)
        assert all(s == 20 for s in res.successes.values())
        assert res.mc.p == 4 * 20
        assert res.mc.min_count() == 2 * 20

    def test_palette_accounting_exact(self):
        n = 8
        base = self.make_synthetic_base(n, q=1, p=3, drop_prob=0.3)
        res = amplify(base, AmplifyParams(epsilon=0.5, t=11), n=n)
        assert res.mc.p == 3 * 11
        for v in range(n):
            assert len(res.mc.color_set(v)) == res.successes[v]

    def test_repetition_formula(self):
        p = AmplifyParams(epsilon=0.25, f_prime=0.01)
        assert p.repetitions(100) == math.ceil(24 * math.log(100 / 0.01))


class TestDerandomize:
    def test_pool_of_one_equals_base(self):
        g = generate_random_regular(20, 3, seed=3)
        pipe = Theorem1Pipeline(g, 2)

        def base(seed):
            return q_delta_coloring_sloppy(g, 2, seed=seed, pipeline=pipe).mc

        single = base(41)
        res = enumerate_seeds_derandomize(base, [41], n=g.n)
        assert res.pool_size == 1
        assert res.mc.colors == single.colors

    def test_success_counting(self):
        n = 6
        good = MultiColoring(p=2, q=1,
                             colors={v: frozenset([1 + v % 2]) for v in range(n)})
        bad = MultiColoring(p=2, q=1,
                            colors={v: (frozenset([1]) if v else frozenset())
                                    for v in range(n)})

        def base(seed):
            return good if seed % 2 == 0 else bad

        res = enumerate_seeds_derandomize(base, list(range(10)), n=n)
        assert res.successful_runs == 5
        assert res.mc.q == 1 * 5
        assert check_multicoloring(from_edges(n, []), res.mc).valid


class TestSloppyPipeline:
    def test_partial_always_valid(self):
        g = generate_random_regular(30, 3, seed=4)
        pipe = Theorem1Pipeline(g, 4)
        for seed in range(10):
            part, _ = sloppy_partial_delta_run(g, 4, seed, pipeline=pipe)
            part.validate(g)

    def test_uncolored_rate_bound(self):
        g = generate_random_regular(60, 3, seed=11)
        q = 16
        pipe = Theorem1Pipeline(g, q)
        rates = []
        for seed in range(120):
            part, _ = sloppy_partial_delta_run(g, q, seed, pipeline=pipe)
            rates.append(part.uncolored_fraction())
        bound = 2.0 / q
        sigma = math.sqrt(bound * (1 - bound) / len(rates))
        assert statistics.fmean(rates) <= bound + 3 * sigma

    def test_merged_sloppy_valid_partial(self):
        g = generate_random_regular(40, 3, seed=12)
        res = q_delta_coloring_sloppy(g, 4, seed=5)
        rep = check_multicoloring(g, res.mc)
        assert rep.valid


class TestFastVariant:
    def test_partial_structure_valid(self):
        g = generate_random_regular(60, 3, seed=13)
        res = fast_no_logstar(g, q=2, seed=1)
        rep = check_multicoloring(g, res.mc)
        assert rep.valid
        assert res.mc.p == 6 and res.mc.q == 1
        # colored nodes carry at least q-1 colors
        for v in g.nodes():
            s = res.mc.color_set(v)
            assert not s or len(s) >= 1

    def test_palette_one_leaves_everyone_uncolored(self):
        g = generate_random_regular(20, 3, seed=15)
        res = fast_no_logstar(g, q=2, seed=0, palette=1)
        assert res.colored_fraction == 0.0
        rep = check_multicoloring(g, res.mc)
        assert rep.valid and not rep.complete

    def test_rounds_independent_of_n(self):
        totals = []
        for n in (60, 120, 240):
            g = generate_random_regular(n, 3, seed=14)
            res = fast_no_logstar(g, q=2, seed=2)
            totals.append(res.rounds.total)
        assert max(totals) - min(totals) <= 1


def test_disjointness_absolute_over_ops_and_seeds():
    """Every multicoloring from every operation is edge-disjoint, every seed."""
    graphs = [
        generate_random_regular(24, 3, seed=1),
        random_tree(20, seed=2),
        cycle_graph(15),
    ]
    for g in graphs:
        for seed in (0, 1):
            candidates = []
            if g.delta >= 3:
                candidates.append(q_delta_coloring(g, 2, seed=seed).mc)
                candidates.append(q_delta_coloring_sloppy(g, 3, seed=seed).mc)
                candidates.append(fast_no_logstar(g, 2, seed=seed).mc)
            candidates.append(small_support_coloring(g, 1).mc)
            for mc in candidates:
                assert check_multicoloring(g, mc).valid
