"""Fractional multicoloring pipelines.

The centerpiece is the clustered partial coloring: peel the graph in layers
away from a small per-cluster excluded set, solve a (degree+1)-list instance
per layer with the maximum-degree palette, and finish the excluded sets
according to their kind (a marked node stays uncolored, a low-degree witness
colors greedily, a degree-choosable component completes by brute force, a
path is left for the block-coloring completion).  Running the peel q times in
parallel with disjoint palettes and rotating marks yields the (q*delta : q-1)
construction; choosing the excluded set as an induced path of 2q+1 nodes and
expanding colors to q-blocks yields the (q*delta + 1 : q) construction.

On top sit two generic combinators: palette amplification (t independent runs
with disjoint palettes, so every node keeps at least q colors from almost all
runs) and seed-pool derandomization (one run per pool seed, disjoint
palettes, success fraction measured rather than assumed).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional

from .clustering import (
    ClassificationError,
    Clustering,
    ClusterTag,
    derive_alpha,
    ruling_set_clustering,
    voronoi_of_ruling_set,
)
from .colorings import (
    ListAssignment,
    MultiColoring,
    PartialProperColoring,
    ProperColoring,
    expand_to_blocks,
    merge_disjoint_palettes,
)
from .graphs import DeskCapError, Graph
from .primitives import (
    ListInstanceError,
    linial_coloring,
    list_color_det,
    list_color_sloppy,
    random_distance_coloring,
)
from .sim import RoundLog, derive_seed


DEFAULT_SLOPPY_FACTOR = 4          # trials = factor * ceil(log2 q)
PATH_COMPLETION_Q_CAP = 6          # C(2q+1, q) states in the path DP
DIRECT_FALLBACK_CAP = 40           # oracle-backed fallback for tiny instances


# ---------------------------------------------------------------------------
# Layered peeling
# ---------------------------------------------------------------------------


@dataclass
class ExcludedSet:
    """Per-cluster excluded set and how to finish it after the peel."""

    kind: str                      # "mark" | "lowdeg" | "choosable" | "path"
    nodes: tuple[int, ...]


def _restricted(coloring: ProperColoring, keep: list[int]) -> ProperColoring:
    return ProperColoring(palette=coloring.palette,
                          color=tuple(coloring.color[v] for v in keep))


def _cluster_layers(g: Graph, clustering: Clustering,
                    excluded: dict[int, ExcludedSet]) -> dict[int, int]:
    """Distance to the cluster's excluded set, within the cluster."""
    from collections import deque

    depth: dict[int, int] = {}
    for c, mem in clustering.members.items():
        mem_set = set(mem)
        src = excluded[c].nodes
        dist = {v: 0 for v in src}
        dq = deque(src)
        while dq:
            v = dq.popleft()
            for u in g.adj[v]:
                if u in mem_set and u not in dist:
                    dist[u] = dist[v] + 1
                    dq.append(u)
        missing = mem_set - dist.keys()
        if missing:
            raise ClassificationError(
                f"cluster {c}: nodes {sorted(missing)} unreachable from its set"
            )
        depth.update(dist)
    return depth


def _solve_layer(g: Graph, layer_nodes: list[int], colors: dict[int, Optional[int]],
                 delta: int, helper: ProperColoring, solver: str,
                 trials: int, seed: int) -> int:
    """Color one peel layer from {1..delta} lists; returns charged rounds."""
    sub, keep = g.induced_subgraph(layer_nodes)
    lists = []
    for v in keep:
        used = {colors[u] for u in g.adj[v] if colors.get(u) is not None}
        lists.append(frozenset(range(1, delta + 1)) - frozenset(used))
    assignment = ListAssignment(tuple(lists))
    for i, v in enumerate(keep):
        if len(lists[i]) <= sub.degree(i):
            raise ListInstanceError(
                f"layer instance violated at node {v}: "
                f"{len(lists[i])} colors for degree {sub.degree(i)}"
            )
    if solver == "sweep":
        out, _ = list_color_det(sub, assignment, _restricted(helper, keep))
        for i, v in enumerate(keep):
            colors[v] = out.color[i]
        return helper.palette
    elif solver == "sloppy":
        out, _ = list_color_sloppy(sub, assignment, trials=trials, seed=seed)
        for i, v in enumerate(keep):
            if out.color[i] is not None:
                colors[v] = out.color[i]
        return trials + 1
    raise ValueError(f"unknown list solver {solver!r}")


def _finish_excluded(g: Graph, excluded: dict[int, ExcludedSet],
                     colors: dict[int, Optional[int]], delta: int) -> None:
    for c, exc in sorted(excluded.items()):
        if exc.kind in ("mark", "path"):
            continue
        if exc.kind == "lowdeg":
            (w,) = exc.nodes
            used = {colors[u] for u in g.adj[w] if colors.get(u) is not None}
            free = [x for x in range(1, delta + 1) if x not in used]
            if not free:
                raise ClassificationError(
                    f"low-degree witness {w} found no free color"
                )
            colors[w] = free[0]
        elif exc.kind == "choosable":
            nodes = list(exc.nodes)
            lists = {}
            for v in nodes:
                used = {colors[u] for u in g.adj[v] if colors.get(u) is not None}
                lists[v] = sorted(set(range(1, delta + 1)) - used)
            inner = {v: [u for u in g.adj[v] if u in exc.nodes] for v in nodes}

            def place(i, chosen):
                if i == len(nodes):
                    return dict(chosen)
                v = nodes[i]
                for col in lists[v]:
                    if all(chosen.get(u) != col for u in inner[v]):
                        chosen[v] = col
                        got = place(i + 1, chosen)
                        if got is not None:
                            return got
                        del chosen[v]
                return None

            solution = place(0, {})
            if solution is None:
                raise ClassificationError(
                    f"degree-choosable witness {exc.nodes} has no completion; "
                    "this contradicts degree-choosability"
                )
            colors.update(solution)


def peel_partial_coloring(
    g: Graph,
    clustering: Clustering,
    excluded: dict[int, ExcludedSet],
    helper: ProperColoring,
    *,
    delta: Optional[int] = None,
    solver: str = "sweep",
    trials: int = 0,
    seed: int = 0,
) -> tuple[PartialProperColoring, RoundLog]:
    """Partial delta-coloring leaving (at most) the excluded sets uncolored.

    Rounds are charged for the full layer schedule R * T, where R is the
    cluster-diameter bound the layering iterates over and T the per-layer list
    solver bound, plus R rounds for the excluded-set completion.
    """
    delta = g.delta if delta is None else delta
    depth = _cluster_layers(g, clustering, excluded)
    colors: dict[int, Optional[int]] = {v: None for v in g.nodes()}
    max_layer = max(depth.values(), default=0)
    r_bound = clustering.diameter_bound or max_layer
    if max_layer > r_bound:
        raise ClassificationError(
            f"layer depth {max_layer} exceeds the schedule bound {r_bound}"
        )
    per_layer = helper.palette if solver == "sweep" else trials + 1
    log = RoundLog()
    for i in range(max_layer, 0, -1):
        layer = sorted(v for v, d in depth.items() if d == i)
        if layer:
            _solve_layer(g, layer, colors, delta, helper, solver,
                         trials, derive_seed(seed, "layer", i))
    log.add("peel_layers", r_bound * per_layer)
    _finish_excluded(g, excluded, colors, delta)
    log.add("finish_excluded", r_bound)
    out = PartialProperColoring(palette=delta,
                                color=tuple(colors[v] for v in g.nodes()))
    out.validate(g)
    return out, log


# ---------------------------------------------------------------------------
# Theorem 1 pipeline: (q*delta : q-1)
# ---------------------------------------------------------------------------


def _excluded_for_marks(clustering: Clustering, marks: dict[int, int]
                        ) -> dict[int, ExcludedSet]:
    excluded = {}
    for c, tag in clustering.tags.items():
        if c in marks:
            excluded[c] = ExcludedSet("mark", (marks[c],))
        elif tag.kind == "large":
            raise ValueError(f"Large cluster {c} carries no mark")
        elif tag.kind == "lowdeg":
            excluded[c] = ExcludedSet("lowdeg", (tag.witness,))
        else:
            excluded[c] = ExcludedSet("choosable", tuple(tag.witness))
    return excluded


def partial_delta_coloring_with_marks(
    g: Graph,
    clustering: Clustering,
    marks: dict[int, int],
    helper: Optional[ProperColoring] = None,
    *,
    delta: Optional[int] = None,
    list_solver: str = "sweep",
    trials: int = 0,
    seed: int = 0,
) -> tuple[PartialProperColoring, RoundLog]:
    """Partial delta-coloring where only the marked nodes may stay uncolored.

    ``marks`` assigns exactly one marked member to every Large cluster; other
    clusters finish through their classification witness.
    """
    log = RoundLog()
    if helper is None:
        helper, r = linial_coloring(g)
        log.add("helper_coloring", r)
    for c, m in marks.items():
        if m not in clustering.members[c]:
            raise ValueError(f"mark {m} is not a member of cluster {c}")
    excluded = _excluded_for_marks(clustering, marks)
    out, peel_log = peel_partial_coloring(
        g, clustering, excluded, helper,
        delta=delta, solver=list_solver, trials=trials, seed=seed,
    )
    log.extend(peel_log)
    return out, log


@dataclass
class QDeltaResult:
    mc: MultiColoring
    clustering: Optional[Clustering]
    partials: list[PartialProperColoring]
    rounds: RoundLog
    alpha: Optional[int]
    method: str = "clustered"


class Theorem1Pipeline:
    """Precomputed helper coloring and clustering, reusable across runs.

    Splitting construction from execution keeps Monte Carlo studies cheap:
    the clustering and helper coloring are deterministic in the graph, only
    marks and the sloppy solver consume seeds.
    """

    def __init__(self, g: Graph, q: int, *, c_alpha: Optional[int] = None,
                 delta: Optional[int] = None,
                 helper: Optional[ProperColoring] = None,
                 power_precoloring: Optional[ProperColoring] = None,
                 clustering: Optional[Clustering] = None):
        self.g = g
        self.q = q
        self.delta = g.delta if delta is None else delta
        self.prelude = RoundLog()
        if helper is None:
            helper, r = linial_coloring(g)
            self.prelude.add("helper_coloring", r)
        self.helper = helper
        if clustering is None:
            clustering = ruling_set_clustering(
                g, q, c_alpha, delta=self.delta,
                power_precoloring=power_precoloring,
            )
            self.prelude.extend(clustering.rounds)
        self.clustering = clustering
        self.large_members = {
            c: sorted(clustering.members[c], key=lambda v: g.ids[v])
            for c, tag in clustering.tags.items() if tag.kind == "large"
        }

    def deterministic_marks(self, run_index: int) -> dict[int, int]:
        return {c: mem[run_index] for c, mem in self.large_members.items()}

    def random_marks(self, seed: int) -> dict[int, int]:
        marks = {}
        for c, mem in self.large_members.items():
            rng = random.Random(derive_seed(seed, "mark", self.g.ids[c]))
            marks[c] = mem[rng.randrange(len(mem))]
        return marks

    def run_partial(self, marks: dict[int, int], *, solver: str = "sweep",
                    trials: int = 0, seed: int = 0
                    ) -> tuple[PartialProperColoring, RoundLog]:
        return partial_delta_coloring_with_marks(
            self.g, self.clustering, marks, self.helper,
            delta=self.delta, list_solver=solver, trials=trials, seed=seed,
        )


def sloppy_trials(q: int, factor: int = DEFAULT_SLOPPY_FACTOR) -> int:
    return factor * math.ceil(math.log2(q)) if q >= 2 else 0


def q_delta_coloring(
    g: Graph,
    q: int,
    *,
    list_solver: str = "sweep",
    seed: int = 0,
    c_alpha: Optional[int] = None,
    pipeline: Optional[Theorem1Pipeline] = None,
) -> QDeltaResult:
    """Complete (q*delta : q-1)-coloring via q parallel partial colorings.

    Every node is uncolored in at most one of the q runs (checked), so the
    union over disjoint palette blocks gives at least q-1 colors per node.
    Falls back to a direct oracle-scaled construction on tiny instances where
    the clustering guarantee has no room to apply.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    try:
        pipe = pipeline or Theorem1Pipeline(g, q, c_alpha=c_alpha)
    except ClassificationError:
        mc = _direct_scaled_multicoloring(g, q * g.delta, q - 1)
        if mc is None:
            mc = _exhaustive_multicoloring(g, q * g.delta, q - 1)
        if mc is None:
            raise
        log = RoundLog()
        log.add("gather_whole_graph", 2 * g.n)
        return QDeltaResult(mc=mc, clustering=None, partials=[], rounds=log,
                            alpha=None, method="direct")
    trials = sloppy_trials(q) if list_solver == "sloppy" else 0
    partials = []
    branch_rounds = []
    for j in range(q):
        if list_solver == "sloppy":
            marks = pipe.random_marks(derive_seed(seed, "run", j))
        else:
            marks = pipe.deterministic_marks(j)
        part, log_j = pipe.run_partial(
            marks, solver=list_solver, trials=trials,
            seed=derive_seed(seed, "solver", j),
        )
        partials.append(part)
        branch_rounds.append(log_j.total)

    if list_solver == "sweep":
        for v in g.nodes():
            misses = sum(1 for part in partials if part.color[v] is None)
            assert misses <= 1, f"node {v} uncolored in {misses} runs"

    delta = pipe.delta
    merged = merge_disjoint_palettes(
        [MultiColoring(p=delta, q=1,
                       colors={v: (frozenset([p.color[v]]) if p.color[v] else frozenset())
                               for v in g.nodes()})
         for p in partials],
        g.n,
    )
    merged.q = q - 1
    rounds = RoundLog()
    rounds.extend(pipe.prelude)
    rounds.add_parallel("parallel_peels", branch_rounds)
    return QDeltaResult(mc=merged, clustering=pipe.clustering,
                        partials=partials, rounds=rounds, alpha=pipe.clustering.alpha)


def _direct_scaled_multicoloring(g: Graph, p: int, q_target: int
                                 ) -> Optional[MultiColoring]:
    """Scale the oracle's optimal fractional cover to a (p : q_target)-coloring.

    Only for tiny instances (a single ball): the exact cover weights give a
    (D*chi_f : D)-coloring for their common denominator D, which is repeated
    ceil(q_target / D) times if the support budget allows.
    """
    from .oracle import chi_f_exact

    if g.n > DIRECT_FALLBACK_CAP or q_target < 1:
        if q_target < 1:
            return MultiColoring(p=p, q=0,
                                 colors={v: frozenset() for v in g.nodes()})
        return None
    res = chi_f_exact(g)
    denom = math.lcm(*[w.denominator for _, w in res.cover_weights])
    blocks = [(I, int(w * denom)) for I, w in res.cover_weights]
    copies = math.ceil(q_target / denom)
    support = copies * sum(m for _, m in blocks)
    if support > p:
        return None
    colors: dict[int, set[int]] = {v: set() for v in g.nodes()}
    nxt = 1
    for _ in range(copies):
        for I, mult in blocks:
            for _ in range(mult):
                for v in I:
                    colors[v].add(nxt)
                nxt += 1
    mc = MultiColoring(p=p, q=q_target,
                       colors={v: frozenset(s) for v, s in colors.items()})
    assert mc.min_count() >= q_target
    return mc


# ---------------------------------------------------------------------------
# Theorem 2 pipeline: (q*delta + 1 : q) with path completion
# ---------------------------------------------------------------------------


def path_complete(path: list[int], lists: dict[int, frozenset[int]], q: int
                  ) -> dict[int, frozenset[int]]:
    """Assign disjoint q-subsets from the lists along a 2q+1-node path.

    Endpoint lists need q+1 colors, inner lists 2q+1; under those sizes a
    completion always exists and is found by forward reachability over
    candidate subsets.
    """
    if q > PATH_COMPLETION_Q_CAP:
        raise DeskCapError(f"path completion capped at q={PATH_COMPLETION_Q_CAP}")
    if len(path) != 2 * q + 1:
        raise ValueError(f"path must have 2q+1 = {2*q+1} nodes, got {len(path)}")
    need = [q + 1] + [2 * q + 1] * (2 * q - 1) + [q + 1]
    for i, v in enumerate(path):
        if len(lists[v]) < need[i]:
            raise ValueError(
                f"path node {v} has {len(lists[v])} colors, needs {need[i]}"
            )
    trimmed = [tuple(sorted(lists[v]))[: need[i]] for i, v in enumerate(path)]
    cands = [list(combinations(t, q)) for t in trimmed]
    parents: list[dict[tuple, tuple]] = [{c: None for c in cands[0]}]
    for i in range(1, len(path)):
        layer = {}
        for cur in cands[i]:
            cur_set = set(cur)
            for prev in parents[i - 1]:
                if cur_set.isdisjoint(prev):
                    layer[cur] = prev
                    break
        if not layer:
            raise AssertionError("path completion found no assignment")
        parents.append(layer)
    choice = next(iter(parents[-1]))
    out = {}
    for i in range(len(path) - 1, -1, -1):
        out[path[i]] = frozenset(choice)
        choice = parents[i][choice]
    return out


@dataclass
class SmallSupportResult:
    mc: MultiColoring
    rounds: RoundLog
    paths: dict[int, tuple[int, ...]]
    alpha: int
    method: str = "clustered"


def small_support_coloring(g: Graph, q: int, *, list_solver: str = "sweep",
                           seed: int = 0) -> SmallSupportResult:
    """(q*delta + 1 : q)-coloring: peel to per-cluster induced paths, expand
    colors to q-blocks, complete the paths from the leftover color budget."""
    if q < 1:
        raise ValueError("q must be >= 1")
    delta = g.delta
    if delta < 1:
        colors = {v: frozenset(range(1, q + 1)) for v in g.nodes()}
        return SmallSupportResult(
            mc=MultiColoring(p=q * max(delta, 1) + 1, q=q, colors=colors),
            rounds=RoundLog(), paths={}, alpha=0, method="edgeless",
        )
    alpha = 4 * q + 4
    beta_h = max(1, math.ceil(alpha * math.log2(max(delta, 2))))
    log = RoundLog()
    helper, r_helper = linial_coloring(g)
    log.add("helper_coloring", r_helper)

    center_id_of, dist_to_center, vor_log, join_horizon = voronoi_of_ruling_set(
        g, alpha, beta_h
    )
    log.extend(vor_log)
    idx_of_id = {g.ids[v]: v for v in g.nodes()}
    center_of = {v: idx_of_id[center_id_of[v]] for v in g.nodes()}
    members: dict[int, list[int]] = {}
    for v, c in center_of.items():
        members.setdefault(c, []).append(v)

    paths: dict[int, tuple[int, ...]] = {}
    for c, mem in members.items():
        path = _induced_path_from(g, c, set(mem), 2 * q)
        if path is None:
            if len(members) == 1:
                return _small_support_direct(g, q, log)
            raise ClassificationError(
                f"cluster {c} has no depth-{2*q} path but is not the whole graph"
            )
        for x in path:
            assert all(u in set(mem) for u in g.adj[x]), \
                "path neighborhood leaves the cluster"
        paths[c] = tuple(path)

    clustering = Clustering(
        center_of=center_of,
        members={c: tuple(sorted(m)) for c, m in members.items()},
        alpha=alpha,
        diameter_bound=math.ceil(2 * alpha * alpha * math.log2(max(delta, 2))),
        dist_to_center=dist_to_center,
    )
    excluded = {c: ExcludedSet("path", paths[c]) for c in members}
    partial, peel_log = peel_partial_coloring(
        g, clustering, excluded, helper,
        solver=list_solver, trials=sloppy_trials(q) if list_solver == "sloppy" else 0,
        seed=seed,
    )
    log.extend(peel_log)

    palette = q * delta + 1
    blocks = expand_to_blocks(partial, q)       # colored nodes: q-block sets
    colors = dict(blocks.colors)
    for c, path in sorted(paths.items()):
        lists = {}
        for v in path:
            used = set()
            for u in g.adj[v]:
                used |= colors.get(u, frozenset())
            lists[v] = frozenset(range(1, palette + 1)) - frozenset(used)
        completion = path_complete(list(path), lists, q)
        colors.update(completion)
    log.add("path_completion", 2 * q + 1)

    mc = MultiColoring(p=palette, q=q, colors=colors)
    return SmallSupportResult(mc=mc, rounds=log, paths=paths, alpha=alpha)


def _induced_path_from(g: Graph, center: int, members: set[int], depth: int
                       ) -> Optional[list[int]]:
    """Shortest path (within the cluster) from the center to depth ``depth``."""
    from collections import deque

    dist = {center: 0}
    parent = {center: None}
    dq = deque([center])
    target = None
    while dq:
        v = dq.popleft()
        if dist[v] == depth:
            target = v if target is None or g.ids[v] < g.ids[target] else target
            continue
        for u in sorted(g.adj[v], key=lambda x: g.ids[x]):
            if u in members and u not in dist:
                dist[u] = dist[v] + 1
                parent[u] = v
                dq.append(u)
    if target is None:
        return None
    path = []
    v = target
    while v is not None:
        path.append(v)
        v = parent[v]
    return path[::-1]


def _small_support_direct(g: Graph, q: int, log: RoundLog) -> SmallSupportResult:
    """Whole graph inside one ball: oracle-scaled or exhaustive construction."""
    palette = q * g.delta + 1
    mc = _direct_scaled_multicoloring(g, palette, q)
    if mc is None:
        mc = _exhaustive_multicoloring(g, palette, q)
    if mc is None:
        raise DeskCapError(
            f"no (q*delta+1 : q)-coloring found for this {g.n}-node instance"
        )
    log.add("gather_whole_graph", 2 * g.n)
    return SmallSupportResult(mc=mc, rounds=log, paths={}, alpha=4 * q + 4,
                              method="direct")


def _exhaustive_multicoloring(g: Graph, p: int, q: int,
                              node_cap: int = 10) -> Optional[MultiColoring]:
    if g.n > node_cap or q < 1:
        return None
    from fractions import Fraction

    from .oracle import chi_f_exact

    if Fraction(p, q) < chi_f_exact(g).value:
        return None  # certified infeasible, no point searching
    order = sorted(g.nodes(), key=lambda v: -g.degree(v))
    chosen: dict[int, frozenset[int]] = {}

    def place(i):
        if i == g.n:
            return True
        v = order[i]
        used = set()
        for u in g.adj[v]:
            used |= chosen.get(u, frozenset())
        avail = [c for c in range(1, p + 1) if c not in used]
        for combo in combinations(avail, q):
            chosen[v] = frozenset(combo)
            if place(i + 1):
                return True
        chosen.pop(v, None)
        return False

    if not place(0):
        return None
    return MultiColoring(p=p, q=q, colors=dict(chosen))


# ---------------------------------------------------------------------------
# Amplification and seed-pool derandomization
# ---------------------------------------------------------------------------


@dataclass
class AmplifyParams:
    epsilon: float
    f_prime: float = 0.01
    t: Optional[int] = None

    def repetitions(self, n: int) -> int:
        if self.t is not None:
            return self.t
        return math.ceil((6.0 / self.epsilon) * math.log(max(n, 2) / self.f_prime))


@dataclass
class AmplifyResult:
    mc: MultiColoring
    t: int
    successes: dict[int, int]      # per node: runs in which it met the target
    threshold: int                 # ceil((1-eps) * t)

    @property
    def min_successes(self) -> int:
        return min(self.successes.values(), default=0)

    @property
    def met_threshold(self) -> bool:
        return self.min_successes >= self.threshold


def amplify(base: Callable[[int], MultiColoring], params: AmplifyParams,
            n: int, master_seed: int = 0) -> AmplifyResult:
    """Run ``base`` t times in parallel over disjoint palette blocks.

    The output declares q = per-run q times ceil((1-eps) t); each node's
    actual success count is reported so tests can check the concentration
    claim instead of assuming it.
    """
    t = params.repetitions(n)
    runs = [base(derive_seed(master_seed, "amplify", j)) for j in range(t)]
    q_run = runs[0].q
    if any(r.q != q_run or r.p != runs[0].p for r in runs):
        raise ValueError("all base runs must declare the same (p, q)")
    merged = merge_disjoint_palettes(runs, n)
    successes = {
        v: sum(1 for r in runs if len(r.color_set(v)) >= q_run)
        for v in range(n)
    }
    threshold = math.ceil((1 - params.epsilon) * t)
    merged.q = q_run * threshold
    return AmplifyResult(mc=merged, t=t, successes=successes, threshold=threshold)


@dataclass
class DerandResult:
    mc: MultiColoring
    pool_size: int
    successful_runs: int
    success_fraction: float


def enumerate_seeds_derandomize(base: Callable[[int], MultiColoring],
                                pool: list[int], n: int) -> DerandResult:
    """Deterministic union over a fixed seed pool with disjoint palettes.

    A pool run "succeeds" when it is complete (every node reaches its per-run
    target); the union is certified as (p * |pool| : q * successes) from the
    measured success count, never from the existential pool-size bound.
    """
    if not pool:
        raise ValueError("seed pool must be nonempty")
    runs = [base(s) for s in pool]
    q_run = runs[0].q
    if any(r.q != q_run or r.p != runs[0].p for r in runs):
        raise ValueError("all base runs must declare the same (p, q)")
    merged = merge_disjoint_palettes(runs, n)
    wins = sum(
        1 for r in runs
        if all(len(r.color_set(v)) >= q_run for v in range(n))
    )
    merged.q = q_run * wins
    return DerandResult(mc=merged, pool_size=len(pool),
                        successful_runs=wins,
                        success_fraction=wins / len(pool))


# ---------------------------------------------------------------------------
# Fast variants (no dependency on the identifier space)
# ---------------------------------------------------------------------------


@dataclass
class FastResult:
    mc: MultiColoring
    rounds: RoundLog
    colored_fraction: float
    palette_used: int
    alpha: int


def fast_no_logstar(g: Graph, q: int, epsilon: Optional[float] = None,
                    *, seed: int = 0, list_solver: str = "sweep",
                    palette: Optional[int] = None) -> FastResult:
    """Partial (q*delta : q-1)-coloring with rounds independent of n.

    A one-shot random distance coloring at radius alpha replaces every
    identifier-based stage: it precolors the power graph for the ruling set
    and seeds the helper-palette reduction, so all later round counts depend
    only on (delta, q).  Nodes dropped by the distance coloring stay
    uncolored; with the default palette q * delta^alpha that happens with
    probability at most 1/q per node.
    """
    delta = g.delta
    alpha, _, _ = derive_alpha(q, delta)
    if palette is None:
        if epsilon is None:
            palette = q * delta ** alpha
        else:
            palette = math.ceil(delta ** alpha / epsilon)
    log = RoundLog()
    rdc, r_rdc = random_distance_coloring(g, radius=alpha, palette=palette,
                                          seed=seed)
    log.add("distance_coloring", r_rdc)
    colored = [v for v in g.nodes() if rdc.color[v] is not None]
    if not colored:
        mc = MultiColoring(p=q * delta, q=q - 1,
                           colors={v: frozenset() for v in g.nodes()})
        return FastResult(mc=mc, rounds=log, colored_fraction=0.0,
                          palette_used=palette, alpha=alpha)
    sub, keep = g.induced_subgraph(colored)
    sub_pre = ProperColoring(palette=palette,
                             color=tuple(rdc.color[v] for v in keep))
    helper, r_helper = linial_coloring(sub, initial=sub_pre)
    log.add("helper_from_distance_coloring", r_helper)
    pipe = Theorem1Pipeline(sub, q, delta=delta, helper=helper,
                            power_precoloring=sub_pre)
    result = q_delta_coloring(sub, q, list_solver=list_solver, seed=seed,
                              pipeline=pipe)
    log.extend(result.rounds, prefix="sub_")
    colors = {v: frozenset() for v in g.nodes()}
    for i, v in enumerate(keep):
        colors[v] = result.mc.color_set(i)
    mc = MultiColoring(p=q * delta, q=q - 1, colors=colors)
    return FastResult(mc=mc, rounds=log,
                      colored_fraction=len(colored) / g.n,
                      palette_used=palette, alpha=alpha)


def sloppy_partial_delta_run(g: Graph, q: int, seed: int,
                             pipeline: Optional[Theorem1Pipeline] = None
                             ) -> tuple[PartialProperColoring, RoundLog]:
    """One randomized partial delta-coloring: random mark per Large cluster,
    randomized list solver with 4*ceil(log2 q) proposal rounds."""
    pipe = pipeline or Theorem1Pipeline(g, q)
    marks = pipe.random_marks(derive_seed(seed, "sloppy-marks"))
    return pipe.run_partial(marks, solver="sloppy", trials=sloppy_trials(q),
                            seed=derive_seed(seed, "sloppy-solver"))


def q_delta_coloring_sloppy(g: Graph, q: int, seed: int = 0,
                            pipeline: Optional[Theorem1Pipeline] = None
                            ) -> QDeltaResult:
    """Randomized Theorem-1 pipeline: random marks, sloppy list solver."""
    pipe = pipeline or Theorem1Pipeline(g, q)
    return q_delta_coloring(g, q, list_solver="sloppy", seed=seed,
                            pipeline=pipe)
