"""Synchronous round engine for message-passing node programs.

The engine executes one program instance per node in lock-step rounds.  Nodes
know their own identifier, degree, the node count n and the maximum degree of
the graph, plus any declared input labels; everything else must travel over
edges, one hop per round.  Messages and local computation are unbounded.

Round accounting: ``step`` is first called at round 0 with an empty inbox
(before any communication); messages emitted at round r are delivered at round
r+1.  A node that outputs at round r therefore used exactly r communication
rounds, and its output can only depend on its radius-r neighborhood.  This
makes the engine locality-sound by construction: surgery on the graph outside
a node's used-rounds ball can never change that node's output.

Two program forms are supported:

* step programs implementing ``init``/``step`` (optionally ``finalize`` plus a
  declared ``horizon``), and
* :class:`BallProgram`, whose per-node output is a pure function of the exact
  induced, labeled ball of a declared radius.  Collecting that ball costs
  radius+1 communication rounds (the extra round closes the standard gap for
  edges whose endpoints both sit at the boundary distance).

For efficiency the engine only materializes rounds in which some node can act:
programs hand back wake hints ("idle until round t", or "only when a message
arrives"), so long sweeps cost only their active rounds and gossip programs
stop costing anything once stable.  Reported round counts always refer to the
algorithm's rounds, not to how many the simulator materialized.
"""

from __future__ import annotations

import hashlib
import json
import random
import statistics
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional

from .graphs import Graph


def derive_seed(*parts) -> int:
    text = "|".join(repr(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


class NodeContext:
    """Per-node view handed to programs: own ID, degree, globals, inputs."""

    __slots__ = ("node_id", "degree", "n", "delta", "inputs", "_master_seed", "rng")

    def __init__(self, node_id, degree, n, delta, inputs, master_seed):
        self.node_id = node_id
        self.degree = degree
        self.n = n
        self.delta = delta
        self.inputs = inputs
        self._master_seed = master_seed
        self.rng: random.Random = random.Random(0)

    def reseed(self, rnd: int) -> None:
        # Counter-based private stream: pure function of (master seed, id, round).
        self.rng.seed(derive_seed(self._master_seed, self.node_id, rnd))


class NodeProgram:
    """Base class for step programs.

    Subclasses implement ``init`` and ``step``.  ``step`` returns a triple
    ``(state, outbox, output)``: ``outbox`` is ``None`` (silence), a value to
    broadcast to all neighbors, or a dict ``port -> message``; ``output`` is
    ``None`` while the node is still running.  Programs with a ``horizon`` may
    implement ``finalize`` to emit outputs for nodes that have not output when
    the horizon is reached.
    """

    horizon: Optional[int] = None

    def init(self, ctx: NodeContext):
        return None

    def step(self, ctx: NodeContext, state, rnd: int, inbox: dict):
        raise NotImplementedError

    def finalize(self, ctx: NodeContext, state):
        return None

    def next_active_round(self, ctx: NodeContext, state, rnd: int) -> Optional[int]:
        """Earliest future round at which this node may act unprompted.

        ``None`` means "only when a message arrives".  Purely a simulator
        hint; must never affect outputs.
        """
        return rnd + 1


@dataclass
class BallView:
    """Exact induced, labeled ball handed to a :class:`BallProgram`.

    All references are by node identifier (never by engine index):
    ``dist[id]`` is the hop distance from the center, ``edges`` the induced
    edge set as id pairs, ``degree[id]`` the degree in the host graph, and
    ``labels[id]`` the node's declared input labels.
    """

    center_id: int
    radius: int
    n: int
    delta: int
    dist: dict[int, int]
    edges: frozenset[tuple[int, int]]
    degree: dict[int, int]
    labels: dict[int, dict]
    rel_coords: Optional[dict[int, tuple[int, ...]]] = None

    def members(self) -> list[int]:
        return sorted(self.dist)


class BallProgram:
    """Program whose output is a pure function of the radius-r labeled ball.

    This is the literal "T-round algorithm = map of the T-hop neighborhood"
    form.  The engine charges radius+1 rounds (radius 0 costs 0 rounds).
    """

    def __init__(self, radius: int, fn: Callable[[BallView, NodeContext], Any],
                 name: str = "ball"):
        if radius < 0:
            raise ValueError("radius must be >= 0")
        self.radius = radius
        self.fn = fn
        self.name = name

    @property
    def rounds_charged(self) -> int:
        return 0 if self.radius == 0 else self.radius + 1


@dataclass
class AlgorithmRun:
    """Deterministic record of one simulated execution."""

    master_seed: int
    rounds_used: dict[int, int]
    outputs: dict[int, Any]
    finished: dict[int, bool]
    max_rounds: int
    transcript: Optional[list] = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "seed": self.master_seed,
                "rounds": self.max_rounds,
                "outputs": {str(v): self.outputs.get(v) for v in sorted(self.outputs)},
            },
            sort_keys=True,
        )


class LocalAlgorithmError(RuntimeError):
    """Base for domain-level algorithm failures; passes through the engine."""


class ProgramError(RuntimeError):
    """A node program raised unexpectedly; carries node and round context."""


def _normalized_inputs(g: Graph, inputs: Optional[dict]) -> list[dict]:
    per_node: list[dict] = [dict() for _ in range(g.n)]
    if inputs:
        for label, value in inputs.items():
            if isinstance(value, dict):
                for v, x in value.items():
                    per_node[v][label] = x
            else:
                for v in range(g.n):
                    per_node[v][label] = value
    return per_node


def _relative_coords(g: Graph, center: int, v: int) -> tuple[int, ...]:
    """Coordinates of v relative to center, unwrapped to the nearest copy."""
    out = []
    for axis, (a, b) in enumerate(zip(g.coords[center], g.coords[v])):
        d = b - a
        if g.wrap and g.wrap[axis] and g.sides:
            side = g.sides[axis]
            d = (d + side // 2) % side - side // 2
        out.append(d)
    return tuple(out)


def _run_ball_program(g: Graph, prog: BallProgram, master_seed: int,
                      per_node_inputs: list[dict]) -> AlgorithmRun:
    outputs = {}
    rounds = prog.rounds_charged
    id_of = g.ids
    for v in range(g.n):
        dist_idx = g.bfs_distances(v, limit=prog.radius)
        members = set(dist_idx)
        edges = set()
        for u in members:
            for w in g.adj[u]:
                if w in members and id_of[u] < id_of[w]:
                    edges.add((id_of[u], id_of[w]))
        rel = None
        if g.coords is not None:
            rel = {id_of[u]: _relative_coords(g, v, u) for u in members}
        view = BallView(
            center_id=id_of[v],
            radius=prog.radius,
            n=g.n,
            delta=g.delta,
            dist={id_of[u]: d for u, d in dist_idx.items()},
            edges=frozenset(edges),
            degree={id_of[u]: g.degree(u) for u in members},
            labels={id_of[u]: dict(per_node_inputs[u]) for u in members},
            rel_coords=rel,
        )
        ctx = NodeContext(id_of[v], g.degree(v), g.n, g.delta,
                          dict(per_node_inputs[v]), master_seed)
        ctx.reseed(0)
        try:
            outputs[v] = prog.fn(view, ctx)
        except LocalAlgorithmError:
            raise
        except Exception as exc:  # noqa: BLE001 - annotate and rethrow
            raise ProgramError(f"ball program {prog.name!r} failed at node {v}: {exc}") from exc
    return AlgorithmRun(
        master_seed=master_seed,
        rounds_used={v: rounds for v in range(g.n)},
        outputs=outputs,
        finished={v: True for v in range(g.n)},
        max_rounds=rounds,
    )


def run(
    g: Graph,
    prog,
    master_seed: int = 0,
    round_cap: Optional[int] = None,
    inputs: Optional[dict] = None,
    transcript: bool = False,
) -> AlgorithmRun:
    """Execute ``prog`` on every node of ``g`` until all output or the cap.

    Monte Carlo truncation semantics: nodes that have not produced an output
    when ``round_cap`` is reached are reported unfinished (``finished[v]`` is
    False and their output is None), unless the program defines ``finalize``.
    The default cap is ``10 * n`` so buggy programs terminate.
    """
    per_node_inputs = _normalized_inputs(g, inputs)
    if isinstance(prog, BallProgram):
        return _run_ball_program(g, prog, master_seed, per_node_inputs)

    n = g.n
    horizon = getattr(prog, "horizon", None)
    if round_cap is not None:
        cap = round_cap if horizon is None else min(round_cap, horizon)
    else:
        cap = max(10 * n, 10) if horizon is None else horizon

    ctxs = []
    for v in range(n):
        ctxs.append(NodeContext(g.ids[v], g.degree(v), n, g.delta,
                                dict(per_node_inputs[v]), master_seed))
    states: list[Any] = [None] * n
    for v in range(n):
        ctxs[v].reseed(0)
        states[v] = prog.init(ctxs[v])

    port_of = []  # port_of[v][u] = index of u in v's adjacency
    for v in range(n):
        port_of.append({u: i for i, u in enumerate(g.adj[v])})

    outputs: dict[int, Any] = {}
    rounds_used: dict[int, int] = {}
    done = [False] * n
    inboxes: list[dict[int, Any]] = [dict() for _ in range(n)]
    wake: list[int] = [0] * n
    log: Optional[list] = [] if transcript else None

    rnd = 0
    while rnd <= cap:
        active = [v for v in range(n)
                  if not done[v] and (inboxes[v] or wake[v] <= rnd)]
        if not active and all(done[v] or wake[v] > cap for v in range(n)):
            break
        if not active:
            rnd = min(wake[v] for v in range(n) if not done[v])
            continue

        new_outboxes: list[Any] = [None] * n
        for v in active:
            ctx = ctxs[v]
            ctx.reseed(rnd)
            inbox = inboxes[v]
            try:
                state, outbox, output = prog.step(ctx, states[v], rnd, inbox)
            except LocalAlgorithmError:
                raise
            except Exception as exc:  # noqa: BLE001
                raise ProgramError(
                    f"program failed at node {v} (id {g.ids[v]}), round {rnd}: {exc}"
                ) from exc
            states[v] = state
            new_outboxes[v] = outbox
            if output is not None and not done[v]:
                outputs[v] = output
                rounds_used[v] = rnd
                done[v] = True
            else:
                hint = prog.next_active_round(ctx, state, rnd)
                wake[v] = (cap + 1) if hint is None else max(hint, rnd + 1)
            inboxes[v] = dict()
        if log is not None:
            log.append((rnd, {v: new_outboxes[v] for v in active
                              if new_outboxes[v] is not None}))

        for v in active:
            outbox = new_outboxes[v]
            if outbox is None:
                continue
            if isinstance(outbox, dict):
                for port, msg in outbox.items():
                    u = g.adj[v][port]
                    inboxes[u][port_of[u][v]] = msg
            else:
                for u in g.adj[v]:
                    inboxes[u][port_of[u][v]] = outbox
        if all(done):
            break
        rnd += 1

    if horizon is not None and not all(done):
        for v in range(n):
            if not done[v]:
                ctxs[v].reseed(horizon)
                out = prog.finalize(ctxs[v], states[v])
                if out is not None:
                    outputs[v] = out
                    rounds_used[v] = horizon
                    done[v] = True

    finished = {v: done[v] for v in range(n)}
    for v in range(n):
        if not done[v]:
            outputs.setdefault(v, None)
            rounds_used.setdefault(v, cap)
    max_rounds = max(rounds_used.values(), default=0)
    return AlgorithmRun(
        master_seed=master_seed,
        rounds_used=rounds_used,
        outputs=outputs,
        finished=finished,
        max_rounds=max_rounds,
        transcript=log,
    )


# ---------------------------------------------------------------------------
# Stock programs
# ---------------------------------------------------------------------------


def collect_ball(radius: int, fn: Optional[Callable[[BallView, NodeContext], Any]] = None,
                 name: str = "collect_ball") -> BallProgram:
    """Program delivering each node the exact induced labeled radius-ball.

    With no ``fn`` the output is the :class:`BallView` itself.  Gathering the
    exact induced ball (including edges between two nodes both at the boundary
    distance) costs radius+1 communication rounds.
    """
    return BallProgram(radius, fn if fn is not None else (lambda view, ctx: view),
                       name=name)


class EchoIdProgram(NodeProgram):
    """Every node outputs its own identifier in zero rounds."""

    def step(self, ctx, state, rnd, inbox):
        return state, None, ctx.node_id


class FloodMaxProgram(NodeProgram):
    """Flood the maximum identifier; output at the declared horizon."""

    def __init__(self, horizon: int):
        self.horizon = horizon

    def init(self, ctx):
        return ctx.node_id

    def step(self, ctx, state, rnd, inbox):
        best = max([state] + list(inbox.values()))
        out = best if (rnd == 0 or best > state) else None
        if rnd >= self.horizon:
            return best, None, best
        return best, out, None

    def next_active_round(self, ctx, state, rnd):
        return None  # reactive after the initial broadcast

    def finalize(self, ctx, state):
        return state


class RoundLog:
    """Per-stage round accounting for composed pipelines.

    Stages run back to back add; logically parallel branches contribute the
    maximum of their stage totals.
    """

    def __init__(self):
        self.stages: list[tuple[str, int]] = []

    def add(self, name: str, rounds: int) -> None:
        self.stages.append((name, int(rounds)))

    def add_parallel(self, name: str, branch_totals: Iterable[int]) -> None:
        self.stages.append((name, max(list(branch_totals) + [0])))

    def extend(self, other: "RoundLog", prefix: str = "") -> None:
        for name, rounds in other.stages:
            self.stages.append((prefix + name, rounds))

    @property
    def total(self) -> int:
        return sum(r for _, r in self.stages)

    def __repr__(self):
        inner = ", ".join(f"{n}={r}" for n, r in self.stages)
        return f"RoundLog(total={self.total}, {inner})"


def measure_locality(g: Graph, prog_factory: Callable[[], Any],
                     seeds: Iterable[int], **run_kw) -> dict:
    """Round-count statistics of a program over a seed list."""
    maxima = []
    for seed in seeds:
        res = run(g, prog_factory(), master_seed=seed, **run_kw)
        maxima.append(res.max_rounds)
    return {
        "per_seed_max": maxima,
        "max": max(maxima),
        "mean": statistics.fmean(maxima),
    }
