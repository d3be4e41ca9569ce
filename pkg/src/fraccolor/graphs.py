"""Immutable undirected graphs, generators, power graphs and structural queries.

Every algorithm in this package runs on the ``Graph`` type defined here.  A
graph is simple and undirected; each node carries a unique identifier drawn
from ``{1, ..., n**id_exponent}`` by a seeded permutation, so identifier
patterns are reproducible but not consecutive.  Grid graphs additionally carry
per-node coordinates, which power graphs under the infinity norm rely on.

Derived graphs (powers, subdivisions, induced subgraphs) keep provenance links
back to the graph they were built from so verification code can relate nodes
across constructions.
"""

from __future__ import annotations

import hashlib
import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence


class GenerationError(RuntimeError):
    """Raised when a randomized generator exhausts its rejection budget."""


class DeskCapError(RuntimeError):
    """Raised when an instance exceeds a configured exact-computation cap."""


DEFAULT_NODE_LIMIT = 1_000_000


def _derive_int(*parts) -> int:
    """Stable 64-bit integer derived from a tuple of values (for seeding)."""
    text = "|".join(repr(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def assign_ids(n: int, id_seed: int = 0, id_exponent: int = 2) -> tuple[int, ...]:
    """Injective node -> identifier map into {1..n**id_exponent}, seeded."""
    if id_exponent < 1:
        raise ValueError("id exponent must be >= 1")
    space = max(n, n**id_exponent)
    rng = random.Random(_derive_int("ids", id_seed, n, id_exponent))
    return tuple(rng.sample(range(1, space + 1), n)), space  # type: ignore[return-value]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with sorted adjacency lists and unique IDs."""

    adj: tuple[tuple[int, ...], ...]
    ids: tuple[int, ...]
    id_space: int
    coords: Optional[tuple[tuple[int, ...], ...]] = None
    sides: Optional[tuple[int, ...]] = None
    wrap: Optional[tuple[bool, ...]] = None
    origin: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "_adj_sets", tuple(frozenset(nb) for nb in self.adj))
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("node identifiers must be injective")
        for v, nbrs in enumerate(self.adj):
            if v in nbrs:
                raise ValueError(f"self loop at node {v}")
            for u in nbrs:
                if v not in self.adj[u]:
                    raise ValueError(f"adjacency not symmetric at edge ({v},{u})")

    # -- basic queries ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return sum(len(nb) for nb in self.adj) // 2

    @property
    def delta(self) -> int:
        """Maximum degree (0 on the empty graph)."""
        return max((len(nb) for nb in self.adj), default=0)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj_sets[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def nodes(self) -> range:
        return range(self.n)

    # -- distances ---------------------------------------------------------

    def bfs_distances(self, source: int, limit: Optional[int] = None) -> dict[int, int]:
        """Hop distances from ``source``; restricted to ``limit`` when given."""
        dist = {source: 0}
        frontier = deque([source])
        while frontier:
            v = frontier.popleft()
            d = dist[v]
            if limit is not None and d >= limit:
                continue
            for u in self.adj[v]:
                if u not in dist:
                    dist[u] = d + 1
                    frontier.append(u)
        return dist

    def dist(self, u: int, v: int) -> float:
        d = self.bfs_distances(u).get(v)
        return math.inf if d is None else d

    def ball(self, v: int, radius: int) -> dict[int, int]:
        return self.bfs_distances(v, limit=radius)

    def diameter(self) -> float:
        """Exact diameter; inf when disconnected."""
        if self.n == 0:
            return 0
        best = 0
        for v in self.nodes():
            dist = self.bfs_distances(v)
            if len(dist) < self.n:
                return math.inf
            best = max(best, max(dist.values()))
        return best

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return len(self.bfs_distances(0)) == self.n

    def is_bipartite(self) -> bool:
        side = {}
        for s in self.nodes():
            if s in side:
                continue
            side[s] = 0
            frontier = deque([s])
            while frontier:
                v = frontier.popleft()
                for u in self.adj[v]:
                    if u not in side:
                        side[u] = 1 - side[v]
                        frontier.append(u)
                    elif side[u] == side[v]:
                        return False
        return True

    def bipartition(self) -> Optional[tuple[set[int], set[int]]]:
        side = {}
        for s in self.nodes():
            if s in side:
                continue
            side[s] = 0
            frontier = deque([s])
            while frontier:
                v = frontier.popleft()
                for u in self.adj[v]:
                    if u not in side:
                        side[u] = 1 - side[v]
                        frontier.append(u)
                    elif side[u] == side[v]:
                        return None
        return ({v for v, s in side.items() if s == 0},
                {v for v, s in side.items() if s == 1})

    # -- derived graphs ----------------------------------------------------

    def induced_subgraph(self, nodes: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph; returns (subgraph, old index of each new node).

        Identifiers, coordinates and the ID space carry over unchanged, so
        algorithms running on the subgraph see the same name space as on the
        host graph.
        """
        keep = sorted(set(nodes))
        index = {v: i for i, v in enumerate(keep)}
        adj = tuple(
            tuple(index[u] for u in self.adj[v] if u in index) for v in keep
        )
        coords = tuple(self.coords[v] for v in keep) if self.coords else None
        sub = Graph(
            adj=adj,
            ids=tuple(self.ids[v] for v in keep),
            id_space=self.id_space,
            coords=coords,
            sides=self.sides,
            wrap=self.wrap,
            origin=("induced", tuple(keep)),
        )
        return sub, keep

    def canonical_hash(self) -> str:
        text = to_edge_list(self, include_coords=False)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def from_edges(
    n: int,
    edges: Iterable[tuple[int, int]],
    *,
    id_seed: int = 0,
    id_exponent: int = 2,
    coords: Optional[Sequence[tuple[int, ...]]] = None,
    sides: Optional[tuple[int, ...]] = None,
    wrap: Optional[tuple[bool, ...]] = None,
    origin: Optional[tuple] = None,
) -> Graph:
    """Build a graph from an edge list (0-based endpoints, duplicates merged)."""
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise ValueError(f"self loop at node {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    ids, space = assign_ids(n, id_seed, id_exponent)
    return Graph(
        adj=tuple(tuple(sorted(s)) for s in nbrs),
        ids=ids,
        id_space=space,
        coords=tuple(tuple(c) for c in coords) if coords is not None else None,
        sides=sides,
        wrap=wrap,
        origin=origin,
    )


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """d-dimensional grid description: per-axis extents and torus flags."""

    side_lengths: tuple[int, ...]
    wrap: tuple[bool, ...]

    @property
    def d(self) -> int:
        return len(self.side_lengths)

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("grid dimension must be >= 1")
        if len(self.wrap) != self.d:
            raise ValueError("one wrap flag per axis required")
        if any(s < 2 for s in self.side_lengths):
            raise ValueError("every side length must be >= 2")


def generate_grid(spec: GridSpec, *, id_seed: int = 0,
                  node_limit: int = DEFAULT_NODE_LIMIT) -> Graph:
    """Grid/torus graph; nodes adjacent iff they differ by 1 in one axis."""
    n = 1
    for s in spec.side_lengths:
        n *= s
    if n > node_limit:
        raise DeskCapError(f"grid would have {n} nodes, over the {node_limit} limit")

    coords = []
    cur = [0] * spec.d
    for _ in range(n):
        coords.append(tuple(cur))
        for axis in range(spec.d - 1, -1, -1):
            cur[axis] += 1
            if cur[axis] < spec.side_lengths[axis]:
                break
            cur[axis] = 0
    index = {c: i for i, c in enumerate(coords)}

    edges = set()
    for i, c in enumerate(coords):
        for axis in range(spec.d):
            side = spec.side_lengths[axis]
            nxt = list(c)
            nxt[axis] += 1
            if nxt[axis] >= side:
                if not spec.wrap[axis]:
                    continue
                nxt[axis] = 0
            j = index[tuple(nxt)]
            if i != j:
                edges.add((min(i, j), max(i, j)))
    return from_edges(
        n, edges, id_seed=id_seed, coords=coords,
        sides=tuple(spec.side_lengths), wrap=tuple(spec.wrap), origin=("grid",)
    )


def generate_random_regular(n: int, delta: int, seed: int, *,
                            max_tries: int = 300, id_seed: Optional[int] = None) -> Graph:
    """Random delta-regular simple graph via the pairing model with rejection.

    Deterministic for a fixed seed.  Raises :class:`GenerationError` once the
    rejection budget is exhausted; the caller retries with a different seed.
    """
    if n * delta % 2 != 0:
        raise ValueError("n * delta must be even")
    if delta >= n:
        raise ValueError("delta must be smaller than n")
    rng = random.Random(_derive_int("regular", n, delta, seed))
    for _ in range(max_tries):
        points = [v for v in range(n) for _ in range(delta)]
        rng.shuffle(points)
        edges = set()
        ok = True
        for i in range(0, len(points), 2):
            u, v = points[i], points[i + 1]
            if u == v or (min(u, v), max(u, v)) in edges:
                ok = False
                break
            edges.add((min(u, v), max(u, v)))
        if ok:
            return from_edges(n, edges,
                              id_seed=seed if id_seed is None else id_seed,
                              origin=("random_regular", seed))
    raise GenerationError(
        f"pairing model failed {max_tries} times for n={n}, delta={delta}, seed={seed}"
    )


def cycle_graph(n: int, **kw) -> Graph:
    return generate_grid(GridSpec((n,), (True,)), **kw)


def path_graph(n: int, **kw) -> Graph:
    return generate_grid(GridSpec((n,), (False,)), **kw)


def complete_graph(n: int, *, id_seed: int = 0) -> Graph:
    return from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)],
                      id_seed=id_seed, origin=("complete",))


def complete_bipartite(a: int, b: int, *, id_seed: int = 0) -> Graph:
    return from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)],
                      id_seed=id_seed, origin=("complete_bipartite",))


def petersen_graph(*, id_seed: int = 0) -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edges(10, outer + spokes + inner, id_seed=id_seed, origin=("petersen",))


def random_tree(n: int, seed: int, *, id_seed: Optional[int] = None) -> Graph:
    """Random recursive tree: node i attaches to a uniform earlier node."""
    rng = random.Random(_derive_int("tree", n, seed))
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    return from_edges(n, edges, id_seed=seed if id_seed is None else id_seed,
                      origin=("random_tree", seed))


def random_bipartite(a: int, b: int, p: float, seed: int, *,
                     id_seed: Optional[int] = None) -> Graph:
    rng = random.Random(_derive_int("bipartite", a, b, p, seed))
    edges = [(u, a + v) for u in range(a) for v in range(b) if rng.random() < p]
    return from_edges(a + b, edges, id_seed=seed if id_seed is None else id_seed,
                      origin=("random_bipartite", seed))


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(_derive_int("gnp", n, p, seed))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return from_edges(n, edges, id_seed=seed, origin=("gnp", seed))


# ---------------------------------------------------------------------------
# Power graphs and subdivisions
# ---------------------------------------------------------------------------


def infinity_distance(g: Graph, u: int, v: int) -> int:
    """Coordinate distance under the infinity norm (torus-aware per axis)."""
    if g.coords is None:
        raise ValueError("infinity norm needs grid coordinates")
    best = 0
    for axis, (a, b) in enumerate(zip(g.coords[u], g.coords[v])):
        d = abs(a - b)
        if g.wrap and g.wrap[axis] and g.sides:
            d = min(d, g.sides[axis] - d)
        best = max(best, d)
    return best


def power_graph(g: Graph, k: int, metric: str = "hop") -> Graph:
    """Graph on the same nodes with u~v iff 0 < dist(u, v) <= k.

    ``metric`` is ``"hop"`` (BFS distance) or ``"infinity"`` (grid coordinate
    distance; requires coordinates).
    """
    if k < 1:
        raise ValueError("power radius must be >= 1")
    edges = set()
    if metric == "hop":
        for v in g.nodes():
            for u, d in g.bfs_distances(v, limit=k).items():
                if u != v and d <= k:
                    edges.add((min(u, v), max(u, v)))
    elif metric == "infinity":
        if g.coords is None:
            raise ValueError("infinity norm requested on a graph without coordinates")
        for u in g.nodes():
            for v in range(u + 1, g.n):
                if infinity_distance(g, u, v) <= k:
                    edges.add((u, v))
    else:
        raise ValueError(f"unknown metric {metric!r}")

    nbrs: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    return Graph(
        adj=tuple(tuple(sorted(s)) for s in nbrs),
        ids=g.ids,
        id_space=g.id_space,
        coords=g.coords,
        sides=g.sides,
        wrap=g.wrap,
        origin=("power", k, metric, g.origin),
    )


@dataclass(frozen=True)
class SubdivisionSpec:
    """Replace every edge of ``base`` with a path of length 2k+1."""

    k: int
    base: Graph

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.base.n == 0:
            raise ValueError("base graph must be nonempty")


def subdivide_edges(spec: SubdivisionSpec, *, id_seed: int = 0) -> Graph:
    """Subdivision H with N = n + 2km nodes; nodes tagged original/inner."""
    base = spec.base
    k = spec.k
    base_edges = list(base.edges())
    n_new = base.n + 2 * k * len(base_edges)
    tags: list[tuple] = [("orig", v) for v in base.nodes()]
    edges = []
    nxt = base.n
    for ei, (u, v) in enumerate(base_edges):
        chain = [u]
        for pos in range(2 * k):
            tags.append(("inner", ei, pos))
            chain.append(nxt)
            nxt += 1
        chain.append(v)
        edges.extend(zip(chain, chain[1:]))
    g = from_edges(n_new, edges, id_seed=id_seed,
                   origin=("subdivision", k, tuple(tags)))
    return g


def subdivision_tags(g: Graph) -> tuple:
    if not g.origin or g.origin[0] != "subdivision":
        raise ValueError("graph is not a subdivision")
    return g.origin[2]


def girth(g: Graph):
    """Length of the shortest cycle, ``math.inf`` for forests (exact BFS)."""
    best = math.inf
    for root in g.nodes():
        dist = {root: 0}
        parent = {root: -1}
        frontier = deque([root])
        while frontier:
            v = frontier.popleft()
            if dist[v] * 2 >= best:
                continue
            for u in g.adj[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    frontier.append(u)
                elif parent[v] != u:
                    # Non-tree edge closes a cycle through the BFS tree.
                    best = min(best, dist[v] + dist[u] + 1)
    return best


# ---------------------------------------------------------------------------
# Edge-list interchange format
# ---------------------------------------------------------------------------


def to_edge_list(g: Graph, include_coords: bool = True) -> str:
    """Deterministic edge-list text: ``n m`` header then sorted ``u v`` lines.

    Grid coordinates are emitted as ``# coord u x1 ... xd`` comment lines;
    torus metadata rides along in ``# meta`` comments so a round trip keeps
    the infinity-norm structure.
    """
    lines = [f"{g.n} {g.m}"]
    for u, v in sorted(g.edges()):
        lines.append(f"{u} {v}")
    if include_coords and g.coords is not None:
        if g.sides is not None:
            lines.append("# meta sides " + " ".join(str(s) for s in g.sides))
        if g.wrap is not None:
            lines.append("# meta wrap " + " ".join("1" if w else "0" for w in g.wrap))
        for u, c in enumerate(g.coords):
            lines.append(f"# coord {u} " + " ".join(str(x) for x in c))
    return "\n".join(lines) + "\n"


def from_edge_list(text: str, *, id_seed: int = 0, id_exponent: int = 2) -> Graph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty edge-list text")
    header = lines[0].split()
    n, m = int(header[0]), int(header[1])
    edges = []
    coords: dict[int, tuple[int, ...]] = {}
    sides = wrap = None
    for ln in lines[1:]:
        if ln.startswith("#"):
            parts = ln[1:].split()
            if parts[:1] == ["coord"]:
                coords[int(parts[1])] = tuple(int(x) for x in parts[2:])
            elif parts[:2] == ["meta", "sides"]:
                sides = tuple(int(x) for x in parts[2:])
            elif parts[:2] == ["meta", "wrap"]:
                wrap = tuple(x == "1" for x in parts[2:])
            continue
        u, v = ln.split()
        edges.append((int(u), int(v)))
    if len(edges) != m:
        raise ValueError(f"header claims {m} edges, found {len(edges)}")
    coord_list = None
    if coords:
        if sorted(coords) != list(range(n)):
            raise ValueError("coordinate lines must cover all nodes")
        coord_list = [coords[v] for v in range(n)]
    return from_edges(n, edges, id_seed=id_seed, id_exponent=id_exponent,
                      coords=coord_list, sides=sides, wrap=wrap)
