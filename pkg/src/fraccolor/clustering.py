"""Two clustering procedures feeding the fractional coloring pipelines.

1. Ruling-set clustering: Voronoi cells of an (alpha, (alpha-1)*alpha*log
   Delta)-ruling set, every node clustered, strong diameter bounded, and each
   cluster classified as Large (at least q members), LowDegree (a witness of
   degree below Delta in the core ball), or Choosable (a degree-choosable
   component whose neighborhood stays inside the cluster).  The classification
   search is restricted to the core ball around the center so witness sets of
   distinct clusters are never adjacent.

2. Separated random-shift clustering: every node joins the center minimizing
   hop distance minus an exponentially distributed shift, then for every
   surviving intercluster edge the smaller-ID endpoint is unclustered.  The
   result has no edge between distinct clusters, ever; the shift distribution
   makes the per-node unclustered probability at most epsilon and keeps weak
   diameters logarithmic.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .colorings import ProperColoring
from .graphs import Graph
from .sim import BallProgram, LocalAlgorithmError, NodeProgram, RoundLog, derive_seed, run
from .primitives import linial_coloring, ruling_set


class ClassificationError(LocalAlgorithmError):
    """No cluster class applies; reports the offending (q, delta, alpha)."""


# ---------------------------------------------------------------------------
# Degree choosability
# ---------------------------------------------------------------------------


def _blocks(nodes: list[int], adj: dict[int, set[int]]) -> list[set[int]]:
    """Biconnected components (as node sets) of a connected small graph."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    parent: dict[int, Optional[int]] = {}
    stack: list[tuple[int, int]] = []
    blocks: list[set[int]] = []
    counter = [0]

    def dfs(root):
        work = [(root, iter(adj[root]))]
        disc[root] = low[root] = counter[0]
        counter[0] += 1
        parent[root] = None
        while work:
            v, it = work[-1]
            advanced = False
            for u in it:
                if u not in disc:
                    parent[u] = v
                    disc[u] = low[u] = counter[0]
                    counter[0] += 1
                    stack.append((v, u))
                    work.append((u, iter(adj[u])))
                    advanced = True
                    break
                elif u != parent[v] and disc[u] < disc[v]:
                    stack.append((v, u))
                    low[v] = min(low[v], disc[u])
            if not advanced:
                work.pop()
                if work:
                    p = work[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] >= disc[p]:
                        block = set()
                        while stack:
                            e = stack.pop()
                            block.update(e)
                            if e == (p, v):
                                break
                        if block:
                            blocks.append(block)

    for s in nodes:
        if s not in disc:
            dfs(s)
    return blocks


def _block_is_clique_or_odd_cycle(block: set[int], adj: dict[int, set[int]]) -> bool:
    k = len(block)
    if k <= 2:
        return True  # an edge is a clique
    if all(u in adj[v] for u, v in combinations(block, 2)):
        return True
    inner_deg = [len(adj[v] & block) for v in block]
    return k % 2 == 1 and all(d == 2 for d in inner_deg)


def gallai_degree_choosable(nodes: list[int], adj: dict[int, set[int]]) -> bool:
    """A connected graph is degree-choosable iff some block is neither a
    clique nor an odd cycle (Gallai-tree characterization).  Exact."""
    if len(nodes) == 1:
        return False
    return not all(_block_is_clique_or_odd_cycle(b, adj) for b in _blocks(nodes, adj))


def _has_proper_choice(nodes: list[int], adj: dict[int, set[int]],
                       lists: dict[int, set[int]]) -> bool:
    order = sorted(nodes, key=lambda v: -len(adj[v]))
    chosen: dict[int, int] = {}

    def place(i):
        if i == len(order):
            return True
        v = order[i]
        for c in sorted(lists[v]):
            if all(chosen.get(u) != c for u in adj[v]):
                chosen[v] = c
                if place(i + 1):
                    return True
                del chosen[v]
        return False

    return place(0)


def brute_degree_choosable(nodes: list[int], adj: dict[int, set[int]]) -> bool:
    """Exhaustive check over all list assignments with |L_v| = deg(v).

    Lists are enumerated up to color renaming: node i may reuse previously
    seen colors or take a prefix of fresh ones.  Exponential; for cross-checks
    on tiny components only.
    """
    order = sorted(nodes)
    degs = {v: len(adj[v]) for v in order}

    def gen(i, used, lists):
        if i == len(order):
            yield dict(lists)
            return
        v = order[i]
        d = degs[v]
        for fresh in range(d + 1):
            new = set(range(used + 1, used + fresh + 1))
            for old in combinations(range(1, used + 1), d - fresh):
                lists[v] = set(old) | new
                yield from gen(i + 1, used + fresh, lists)
        lists.pop(v, None)

    for lists in gen(0, 0, {}):
        if not _has_proper_choice(order, adj, lists):
            return False
    return True


def is_degree_choosable(component: list[int], g: Graph, *,
                        brute_cap: int = 5, cross_check: Optional[bool] = None) -> bool:
    """Exact degree-choosability of a connected induced component of ``g``.

    Uses the Gallai-tree characterization; on components of at most
    ``brute_cap`` nodes the answer is cross-checked against exhaustive list
    enumeration (disable by passing ``cross_check=False``).
    """
    comp = sorted(set(component))
    adj = {v: set(g.adj[v]) & set(comp) for v in comp}
    seen = {comp[0]}
    frontier = [comp[0]]
    while frontier:
        v = frontier.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                frontier.append(u)
    if len(seen) != len(comp):
        raise ValueError("component must induce a connected subgraph")
    answer = gallai_degree_choosable(comp, adj)
    do_check = cross_check if cross_check is not None else len(comp) <= brute_cap
    if do_check and len(comp) <= max(brute_cap, 6):
        brute = brute_degree_choosable(comp, adj)
        if brute != answer:
            raise AssertionError(
                f"Gallai test ({answer}) disagrees with enumeration ({brute})"
            )
    return answer


# ---------------------------------------------------------------------------
# Cluster data
# ---------------------------------------------------------------------------


@dataclass
class ClusterTag:
    kind: str                      # "large" | "lowdeg" | "choosable"
    witness: object = None         # None | node id | tuple of node ids
    size: int = 0


@dataclass
class ShiftAssignment:
    gamma: float
    shifts: dict[int, float]       # node -> clamped exponential shift
    clamp: float


@dataclass
class Clustering:
    center_of: dict[int, Optional[int]]
    members: dict[int, tuple[int, ...]]
    tags: dict[int, ClusterTag] = field(default_factory=dict)
    alpha: Optional[int] = None
    core_radius: Optional[int] = None
    diameter_bound: Optional[int] = None
    rounds: Optional[RoundLog] = None
    shifts: Optional[ShiftAssignment] = None
    pre_removal: Optional[dict[int, int]] = None
    dist_to_center: Optional[dict[int, int]] = None

    def unclustered(self) -> list[int]:
        return [v for v, c in self.center_of.items() if c is None]

    def to_json(self) -> str:
        import json

        return json.dumps(
            {str(v): self.center_of[v] for v in sorted(self.center_of)},
            sort_keys=True,
        )


# ---------------------------------------------------------------------------
# Ruling-set clustering with classification
# ---------------------------------------------------------------------------


def derive_alpha(q: int, delta: int, c_alpha: Optional[int] = None
                 ) -> tuple[int, int, int]:
    """Cluster scale alpha = ceil(c * (1 + log_delta q)) and the core radius.

    The core radius k is the even member of {floor(alpha/2)-2, floor(alpha/2)-3};
    the default c is the smallest integer making (delta-1)^(k/2) >= q, which
    is the inequality the classification guarantee rests on.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    base = 1.0 + (math.log(q, delta) if (q > 1 and delta > 1) else 0.0)

    def params(c):
        alpha = max(2, math.ceil(c * base))
        k1, k2 = alpha // 2 - 2, alpha // 2 - 3
        k = k1 if k1 % 2 == 0 else k2
        return alpha, k

    if c_alpha is not None:
        alpha, k = params(c_alpha)
        return alpha, c_alpha, k
    for c in range(1, 500):
        alpha, k = params(c)
        if k >= 0 and (delta - 1) ** (k // 2) >= q:
            return alpha, c, k
    raise ClassificationError(
        f"no usable cluster scale for q={q}, delta={delta}; "
        "the expansion inequality cannot be met"
    )


class _VoronoiJoin(NodeProgram):
    """Claims (dist, center id) flood from the ruling set; lexicographic min."""

    def __init__(self, horizon: int):
        self.horizon = horizon

    def init(self, ctx):
        if ctx.inputs["in_set"]:
            return {"best": (0, ctx.node_id), "fresh": True}
        return {"best": None, "fresh": False}

    def step(self, ctx, state, rnd, inbox):
        out = None
        if rnd == 0 and state["fresh"]:
            out = state["best"]
        improved = False
        for msg in inbox.values():
            cand = (msg[0] + 1, msg[1])
            if state["best"] is None or cand < state["best"]:
                state["best"] = cand
                improved = True
        if improved:
            out = state["best"]
        if rnd >= self.horizon:
            return state, None, state["best"] if state["best"] else ("lost",)
        return state, out, None

    def next_active_round(self, ctx, state, rnd):
        return None  # reactive

    def finalize(self, ctx, state):
        return state["best"]


class _WitnessSearch:
    """Classification run by each center over its gathered cluster."""

    def __init__(self, q, delta, core_radius, alpha):
        self.q = q
        self.delta = delta
        self.k = core_radius
        self.alpha = alpha

    def classify(self, view, ctx):
        if view.labels[ctx.node_id]["center"] != ctx.node_id:
            return None
        members = sorted(
            i for i in view.dist if view.labels[i]["center"] == ctx.node_id
        )
        member_set = set(members)
        adj = {i: set() for i in members}
        for a, b in view.edges:
            if a in member_set and b in member_set:
                adj[a].add(b)
                adj[b].add(a)
        if len(members) >= self.q:
            return {"tag": "large", "witness": None, "members": members}
        core = [i for i in members if view.dist[i] <= self.k]
        low = [i for i in core if view.degree[i] <= self.delta - 1]
        if low:
            return {"tag": "lowdeg", "witness": min(low), "members": members}
        # connected subsets of the core, smallest first, neighbors in-cluster
        core_sorted = sorted(core)
        for size in range(2, len(core_sorted) + 1):
            for subset in combinations(core_sorted, size):
                sset = set(subset)
                seen = {subset[0]}
                queue = [subset[0]]
                while queue:
                    x = queue.pop()
                    for y in adj[x] & sset:
                        if y not in seen:
                            seen.add(y)
                            queue.append(y)
                if len(seen) != size:
                    continue
                nbrs_inside = all(
                    nb in member_set
                    for x in subset
                    for nb in _view_neighbors(view, x)
                )
                if not nbrs_inside:
                    continue
                sub_adj = {x: adj[x] & sset for x in subset}
                if gallai_degree_choosable(list(subset), sub_adj):
                    return {"tag": "choosable", "witness": tuple(subset),
                            "members": members}
        raise ClassificationError(
            f"cluster at center id {ctx.node_id} admits no class "
            f"(q={self.q}, delta={self.delta}, alpha={self.alpha})"
        )


def _view_neighbors(view, node_id):
    for a, b in view.edges:
        if a == node_id:
            yield b
        elif b == node_id:
            yield a


def voronoi_of_ruling_set(
    g: Graph,
    alpha: int,
    beta_h: int,
    power_precoloring: Optional[ProperColoring] = None,
) -> tuple[dict[int, int], dict[int, int], RoundLog, int]:
    """Ruling set plus nearest-center join; every node clustered.

    Returns (center id per node, distance to center, round log, join horizon).
    """
    log = RoundLog()
    rs, rounds_rs, h = ruling_set(g, alpha, (alpha - 1) * beta_h,
                                  precoloring=power_precoloring)
    log.add("ruling_set", rounds_rs)

    join_horizon = (alpha - 1) * beta_h
    join = run(g, _VoronoiJoin(join_horizon),
               inputs={"in_set": {v: v in rs for v in g.nodes()}})
    log.add("voronoi_join", join_horizon)
    center_id_of: dict[int, int] = {}
    dist_to_center: dict[int, int] = {}
    for v in g.nodes():
        best = join.outputs[v]
        if best is None or best == ("lost",):
            raise ClassificationError(
                f"node {v} not dominated within {join_horizon} rounds"
            )
        dist_to_center[v] = best[0]
        center_id_of[v] = best[1]
    return center_id_of, dist_to_center, log, join_horizon


def ruling_set_clustering(
    g: Graph,
    q: int,
    c_alpha: Optional[int] = None,
    *,
    delta: Optional[int] = None,
    power_precoloring: Optional[ProperColoring] = None,
) -> Clustering:
    """Voronoi clustering of an (alpha, (alpha-1)*beta_H)-ruling set, classified.

    ``power_precoloring`` (a proper coloring of g^(alpha-1)) drops the log*
    stage, which is what the constant-time variants rely on.
    """
    delta = g.delta if delta is None else delta
    if delta < 3 and q > 1:
        raise ClassificationError(
            f"classification guarantee needs delta >= 3 (got {delta}) for q={q}"
        )
    alpha, c_used, k_core = derive_alpha(q, delta, c_alpha)
    beta_h = max(1, math.ceil(alpha * math.log2(max(delta, 2))))

    center_id_of, dist_to_center, log, join_horizon = voronoi_of_ruling_set(
        g, alpha, beta_h, power_precoloring
    )
    idx_of_id = {g.ids[v]: v for v in g.nodes()}

    gather_radius = join_horizon + 1
    searcher = _WitnessSearch(q, delta, k_core, alpha)
    classify = BallProgram(gather_radius, searcher.classify, name="classify")
    stage = run(g, classify, inputs={"center": center_id_of})
    log.add("gather_classify", gather_radius + 1)

    disseminate = BallProgram(
        gather_radius,
        lambda view, ctx: view.labels[view.labels[ctx.node_id]["center"]]["record"],
        name="disseminate",
    )
    records = {v: stage.outputs[v] for v in g.nodes() if stage.outputs[v]}
    out = run(g, disseminate,
              inputs={"center": center_id_of,
                      "record": {v: records.get(v) for v in g.nodes()}})
    log.add("disseminate", gather_radius + 1)

    center_of = {v: idx_of_id[center_id_of[v]] for v in g.nodes()}
    members: dict[int, tuple[int, ...]] = {}
    tags: dict[int, ClusterTag] = {}
    for c_idx in sorted(set(center_of.values())):
        rec = stage.outputs[c_idx]
        mem = tuple(sorted(idx_of_id[i] for i in rec["members"]))
        members[c_idx] = mem
        witness = rec["witness"]
        if isinstance(witness, tuple):
            witness = tuple(sorted(idx_of_id[i] for i in witness))
        elif witness is not None:
            witness = idx_of_id[witness]
        tags[c_idx] = ClusterTag(kind=rec["tag"], witness=witness, size=len(mem))
    for v, rec in ((v, out.outputs[v]) for v in g.nodes()):
        assert rec["tag"] == tags[center_of[v]].kind

    diameter_bound = math.ceil(2 * alpha * alpha * math.log2(max(delta, 2)))
    return Clustering(
        center_of=center_of,
        members=members,
        tags=tags,
        alpha=alpha,
        core_radius=k_core,
        diameter_bound=diameter_bound,
        rounds=log,
        dist_to_center=dist_to_center,
    )


# ---------------------------------------------------------------------------
# Separated random-shift clustering
# ---------------------------------------------------------------------------


class _ShiftClaims(NodeProgram):
    """Bellman-Ford claims of shifted distance; certainty via the shift bound."""

    def __init__(self, horizon: int, k_bound: float):
        self.horizon = horizon
        self.k = k_bound

    def init(self, ctx):
        shift = ctx.inputs["shift"]
        return {"best": (-shift, ctx.node_id, 0), "sent": False}

    def step(self, ctx, state, rnd, inbox):
        out = None
        if rnd == 0:
            out = state["best"]
            state["sent"] = True
        improved = False
        for msg in inbox.values():
            cand = (msg[0] + 1, msg[1], msg[2] + 1)
            if cand < state["best"]:
                state["best"] = cand
                improved = True
        if improved:
            out = state["best"]
        if rnd >= state["best"][0] + self.k - 1:
            return state, out, ("ok", state["best"][1], state["best"][2])
        return state, out, None

    def next_active_round(self, ctx, state, rnd):
        need = math.ceil(state["best"][0] + self.k - 1)
        return max(need, rnd + 1)

    def finalize(self, ctx, state):
        return ("unfinished",)


def mpx_clustering_separated(
    g: Graph,
    epsilon: float,
    seed: int,
    round_cap: Optional[int] = None,
) -> Clustering:
    """2-hop-separated clustering: shifted-distance Voronoi plus edge removal.

    Shifts are Exp(epsilon/2), clamped at the whole-number bound K that holds
    for all of them with probability 1 - 1/n; the clamp keeps the per-node
    certainty rule exact on every run (so clusters are connected before the
    removal step, always) at a total-variation cost of at most n^-2 per node.
    Nodes not certain of their center by ``round_cap`` stay unclustered.
    """
    if not (0 < epsilon < 1):
        raise ValueError("epsilon must be in (0, 1)")
    gamma = epsilon / 2.0
    n = max(g.n, 2)
    k_bound = math.ceil((2.0 / gamma) * math.log(n))
    cap = round_cap if round_cap is not None else 2 * k_bound

    shifts = {}
    for v in g.nodes():
        rng = random.Random(derive_seed(seed, "mpx-shift", g.ids[v]))
        shifts[v] = min(rng.expovariate(gamma), float(k_bound))

    log = RoundLog()
    claims = run(
        g,
        _ShiftClaims(horizon=cap, k_bound=k_bound),
        master_seed=seed,
        inputs={"shift": shifts},
    )
    log.add("shift_claims", cap)
    log.add("removal_exchange", 1)

    idx_of_id = {g.ids[v]: v for v in g.nodes()}
    pre: dict[int, Optional[int]] = {}
    for v in g.nodes():
        out = claims.outputs[v]
        if out is None or out[0] != "ok":
            pre[v] = None
        else:
            pre[v] = idx_of_id[out[1]]

    center_of: dict[int, Optional[int]] = dict(pre)
    for u, v in g.edges():
        cu, cv = center_of[u], center_of[v]
        if cu is not None and cv is not None and cu != cv:
            victim = u if g.ids[u] < g.ids[v] else v
            center_of[victim] = None

    members: dict[int, list[int]] = {}
    for v, c in center_of.items():
        if c is not None:
            members.setdefault(c, []).append(v)
    # The removal step may remove the center node itself; the cluster stays,
    # relabeled by its smallest remaining member so the label is a member.
    for c in list(members):
        if center_of.get(c) != c:
            new_label = min(members[c])
            for v in members[c]:
                center_of[v] = new_label
            members[new_label] = members.pop(c)

    return Clustering(
        center_of=center_of,
        members={c: tuple(sorted(m)) for c, m in members.items()},
        rounds=log,
        shifts=ShiftAssignment(gamma=gamma, shifts={g.ids[v]: shifts[v] for v in g.nodes()},
                               clamp=float(k_bound)),
        pre_removal={v: c for v, c in pre.items() if c is not None},
    )
