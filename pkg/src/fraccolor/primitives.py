"""Classical LOCAL building blocks used as subroutines by the pipelines.

All operations here are node programs executed by the round engine; the
functions wrap program construction, the engine call, and result packaging,
and return ``(result, rounds)`` pairs so pipelines can account rounds per
stage.

The iterated color reduction keeps a proper coloring while shrinking the
palette from the identifier space down to at most ``16 * delta**2`` colors in
a log*-length schedule: colors are mapped to low-degree polynomials over a
prime field, each node's color becomes a point of its polynomial's graph not
covered by any neighbor's polynomial, and distinct polynomials of degree d
agree on at most d points, so a point survives whenever p > d * delta.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Optional

from .colorings import ListAssignment, PartialProperColoring, ProperColoring
from .graphs import Graph, power_graph
from .sim import BallProgram, NodeProgram, derive_seed, run


class ListInstanceError(ValueError):
    """A list-coloring instance violates its size contract."""


def smallest_prime_above(x: int) -> int:
    p = max(2, x + 1)
    while True:
        if all(p % d for d in range(2, int(math.isqrt(p)) + 1)):
            return p
        p += 1


# ---------------------------------------------------------------------------
# Iterated palette reduction (IDs -> O(delta^2) colors)
# ---------------------------------------------------------------------------


def reduction_schedule(m0: int, delta: int) -> list[tuple[int, int, int]]:
    """Schedule of (palette, prime, degree) steps until no step shrinks it.

    One step maps ``m`` colors to ``p*p`` colors where ``p`` is the smallest
    prime above ``d * delta`` for the smallest degree ``d`` with
    ``p**(d+1) >= m``.  The fixed point is at most the square of the smallest
    prime above ``2 * delta``, i.e. below ``16 * delta**2`` for delta >= 2.
    """
    schedule = []
    m = m0
    dd = max(delta, 1)
    while True:
        d = 1
        while True:
            p = smallest_prime_above(d * dd)
            if p ** (d + 1) >= m:
                break
            d += 1
        if p * p >= m:
            break
        schedule.append((m, p, d))
        m = p * p
    return schedule


def _reduce_color(color0: int, neighbor_colors: list[int], p: int, d: int) -> int:
    """One cover-free reduction step; colors are 0-based here."""
    own = [(color0 // p**i) % p for i in range(d + 1)]

    def evaluate(coeffs, x):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        return acc

    others = []
    for c in neighbor_colors:
        if c != color0:
            others.append([(c // p**i) % p for i in range(d + 1)])
    for x in range(p):
        y = evaluate(own, x)
        if all(evaluate(oc, x) != y for oc in others):
            return x * p + y
    raise ArithmeticError("cover-free step found no free point")  # p > d*delta forbids this


class _LinialProgram(NodeProgram):
    def __init__(self, schedule):
        self.schedule = schedule
        self.horizon = len(schedule)

    def init(self, ctx):
        return ctx.inputs["color0"] - 1  # 0-based internally

    def step(self, ctx, state, rnd, inbox):
        if rnd == 0:
            if not self.schedule:
                return state, None, state + 1
            return state, state, None
        m, p, d = self.schedule[rnd - 1]
        new = _reduce_color(state, list(inbox.values()), p, d)
        if rnd == len(self.schedule):
            return new, None, new + 1
        return new, new, None


def linial_coloring(g: Graph, initial: Optional[ProperColoring] = None
                    ) -> tuple[ProperColoring, int]:
    """Proper coloring with at most 16*delta^2 colors in a log*-length run.

    Starts from the unique identifiers by default; passing a proper
    ``initial`` coloring starts the reduction there instead (this is what
    removes the dependency on the identifier space in the fast variants).
    """
    if g.n == 0:
        return ProperColoring(palette=1, color=()), 0
    if initial is None:
        m0 = g.id_space
        start = {v: g.ids[v] for v in g.nodes()}
    else:
        initial.validate(g)
        m0 = initial.palette
        start = {v: initial.color[v] for v in g.nodes()}
    schedule = reduction_schedule(m0, g.delta)
    final_palette = schedule[-1][1] ** 2 if schedule else m0
    res = run(g, _LinialProgram(schedule), inputs={"color0": start})
    coloring = ProperColoring(
        palette=final_palette,
        color=tuple(res.outputs[v] for v in g.nodes()),
    )
    coloring.validate(g)
    return coloring, res.max_rounds


def linial_palette_bound(delta: int) -> int:
    """Documented constant K = 16: the guaranteed palette is <= 16*delta^2."""
    return smallest_prime_above(2 * max(delta, 1)) ** 2


# ---------------------------------------------------------------------------
# Color-class sweeps: reduction to a target palette, MIS, list coloring
# ---------------------------------------------------------------------------


class _ReductionSweep(NodeProgram):
    """Classes C_in, C_in-1, ..., target+1 recolor greedily, one per round."""

    def __init__(self, c_in: int, target: int):
        self.c_in = c_in
        self.target = target
        self.horizon = max(0, c_in - target)

    def init(self, ctx):
        return {"color": ctx.inputs["color"], "seen": {}}

    def _sweep_class(self, rnd):
        return self.c_in - rnd + 1

    def step(self, ctx, state, rnd, inbox):
        state["seen"].update(inbox)
        out = None
        if rnd == 0:
            if self.horizon == 0:
                return state, None, state["color"]
            out = state["color"]
        elif state["color"] == self._sweep_class(rnd):
            used = set(state["seen"].values())
            state["color"] = min(c for c in range(1, self.target + 1)
                                 if c not in used)
            out = state["color"]
        if rnd == self.horizon:
            return state, out, state["color"]
        return state, out, None

    def next_active_round(self, ctx, state, rnd):
        mine = self.c_in - state["color"] + 1
        return mine if mine > rnd else self.horizon

    def finalize(self, ctx, state):
        return state["color"]


def color_reduction(g: Graph, coloring: ProperColoring, target: int
                    ) -> tuple[ProperColoring, int]:
    """Reduce a proper coloring to ``target`` colors in C_in - target rounds."""
    if target < g.delta + 1:
        raise ValueError(f"target {target} below delta+1 = {g.delta + 1}")
    coloring.validate(g)
    if coloring.palette <= target:
        return coloring, 0
    inputs = {"color": {v: coloring.color[v] for v in g.nodes()}}
    res = run(g, _ReductionSweep(coloring.palette, target), inputs=inputs)
    out = ProperColoring(palette=target,
                         color=tuple(res.outputs[v] for v in g.nodes()))
    out.validate(g)
    return out, res.max_rounds


class _MisSweep(NodeProgram):
    """Greedy sweep over proper color classes; joiners block later classes."""

    def __init__(self, palette: int):
        self.palette = palette
        self.horizon = palette

    def init(self, ctx):
        return {"class": ctx.inputs["class"], "blocked": False}

    def step(self, ctx, state, rnd, inbox):
        if any(inbox.values()):
            state["blocked"] = True
            return state, None, False
        if rnd == state["class"]:
            if state["blocked"]:
                return state, None, False
            return state, True, True
        return state, None, None

    def next_active_round(self, ctx, state, rnd):
        return state["class"] if state["class"] > rnd else None

    def finalize(self, ctx, state):
        return False


def mis(g: Graph, precoloring: ProperColoring) -> tuple[set[int], int]:
    """Maximal independent set; rounds bounded by the precoloring palette."""
    precoloring.validate(g)
    inputs = {"class": {v: precoloring.color[v] for v in g.nodes()}}
    res = run(g, _MisSweep(precoloring.palette), inputs=inputs)
    chosen = {v for v in g.nodes() if res.outputs[v] is True}
    return chosen, res.max_rounds


class _ListSweep(NodeProgram):
    """Class-r nodes pick the smallest list color unused by colored neighbors."""

    def __init__(self, palette: int):
        self.horizon = palette

    def init(self, ctx):
        return {
            "class": ctx.inputs["class"],
            "list": sorted(ctx.inputs["list"]),
            "seen": set(),
            "color": None,
        }

    def step(self, ctx, state, rnd, inbox):
        state["seen"].update(inbox.values())
        if rnd == state["class"]:
            free = [c for c in state["list"] if c not in state["seen"]]
            if not free:
                raise ListInstanceError("no free color at sweep time")
            state["color"] = free[0]
            return state, state["color"], state["color"]
        return state, None, None

    def next_active_round(self, ctx, state, rnd):
        return state["class"] if state["class"] > rnd else None


def list_color_det(g_sub: Graph, lists: ListAssignment, helper: ProperColoring
                   ) -> tuple[ProperColoring, int]:
    """Deterministic (degree+1)-list coloring by helper-class sweep.

    Rounds are bounded by the helper palette size; this is the pluggable T of
    the clustered pipelines.
    """
    helper.validate(g_sub)
    for v in g_sub.nodes():
        if len(lists.lists[v]) <= g_sub.degree(v):
            raise ListInstanceError(
                f"node {v}: list size {len(lists.lists[v])} <= degree {g_sub.degree(v)}"
            )
    inputs = {
        "class": {v: helper.color[v] for v in g_sub.nodes()},
        "list": {v: tuple(lists.lists[v]) for v in g_sub.nodes()},
    }
    res = run(g_sub, _ListSweep(helper.palette), inputs=inputs)
    palette = max((max(L) for L in lists.lists if L), default=1)
    out = ProperColoring(palette=palette,
                         color=tuple(res.outputs[v] for v in g_sub.nodes()))
    out.validate(g_sub)
    for v in g_sub.nodes():
        assert out.color[v] in lists.lists[v]
    return out, res.max_rounds


class _SloppySweep(NodeProgram):
    """Repeated random proposals; symmetric conflicts drop both proposers."""

    def __init__(self, trials: int):
        self.trials = trials
        self.horizon = trials + 1 if trials > 0 else 0

    def init(self, ctx):
        return {
            "list": sorted(ctx.inputs["list"]),
            "color": None,
            "pending": None,
            "taken": set(),
        }

    def step(self, ctx, state, rnd, inbox):
        if self.trials == 0:
            return state, None, 0
        for msg in inbox.values():
            kind, c = msg
            if kind == "commit":
                state["taken"].add(c)
        if state["pending"] is not None:
            clash = any(c == state["pending"] for _, c in inbox.values())
            if not clash:
                state["color"] = state["pending"]
                return state, ("commit", state["color"]), state["color"]
            state["pending"] = None
        if rnd >= self.trials:
            return state, None, 0  # 0 encodes "uncolored"
        free = [c for c in state["list"] if c not in state["taken"]]
        if not free:
            return state, None, 0
        state["pending"] = free[ctx.rng.randrange(len(free))]
        return state, ("propose", state["pending"]), None


def list_color_sloppy(g_sub: Graph, lists: ListAssignment, trials: int,
                      seed: int = 0) -> tuple[PartialProperColoring, int]:
    """Randomized partial list coloring: ``trials`` proposal rounds.

    The colored subset is proper on every run regardless of ``trials``; the
    probability a node stays uncolored decays exponentially in ``trials``.
    """
    inputs = {"list": {v: tuple(lists.lists[v]) for v in g_sub.nodes()}}
    res = run(g_sub, _SloppySweep(trials), master_seed=seed, inputs=inputs)
    palette = max((max(L) for L in lists.lists if L), default=1)
    color = tuple(res.outputs[v] or None for v in g_sub.nodes())
    out = PartialProperColoring(palette=palette, color=color)
    out.validate(g_sub)
    return out, res.max_rounds


# ---------------------------------------------------------------------------
# Ruling sets via digit sweeps on a power graph
# ---------------------------------------------------------------------------


class _DigitSweep(NodeProgram):
    """(2, stages)-ruling set from a proper coloring in stages * radix rounds.

    Colors are written in base ``radix`` with ``stages`` digits.  Stage j
    sweeps the j-th digit, one value per round: a node joins the stage's
    tentative set at its digit's round unless a neighbor joined earlier in the
    same stage, and only stage joiners stay active.  Adjacent survivors of
    every stage would need identical colors, so the final set is independent;
    a node dropped in stage j is adjacent to a stage-j joiner, which gives
    domination radius at most ``stages``.
    """

    def __init__(self, palette: int, stages: int):
        self.stages = stages
        self.radix = max(2, math.ceil(palette ** (1.0 / stages)))
        while self.radix ** stages < palette:
            self.radix += 1
        self.horizon = stages * self.radix

    def _round_of(self, stage: int, value: int) -> int:
        return stage * self.radix + value + 1

    def init(self, ctx):
        c = ctx.inputs["class"] - 1
        digits = []
        for _ in range(self.stages):
            digits.append(c % self.radix)
            c //= self.radix
        return {"digits": digits, "next_stage": 0, "blocked": False}

    def step(self, ctx, state, rnd, inbox):
        stage = state["next_stage"]
        if stage >= self.stages:
            return state, None, None
        # A join message (stage, 1) from a neighbor blocks this stage.
        for msg in inbox.values():
            if msg[0] == stage:
                state["blocked"] = True
        if rnd == self._round_of(stage, state["digits"][stage]):
            if state["blocked"]:
                return state, None, False
            state["next_stage"] = stage + 1
            state["blocked"] = False
            done = stage == self.stages - 1
            return state, (stage, 1), (True if done else None)
        return state, None, None

    def next_active_round(self, ctx, state, rnd):
        stage = state["next_stage"]
        if stage >= self.stages:
            return None
        return max(self._round_of(stage, state["digits"][stage]), rnd + 1)

    def finalize(self, ctx, state):
        return False


def ruling_set_on(h: Graph, coloring: ProperColoring, stages: int
                  ) -> tuple[set[int], int]:
    """(2, stages)-ruling set of ``h`` given a proper coloring of ``h``.

    Reported rounds are the program's fixed schedule length (stages * radix,
    or the palette size for the MIS case), which keeps pipeline round counts
    a pure function of the parameters.
    """
    coloring.validate(h)
    if stages <= 1:
        s, _ = mis(h, coloring)
        return s, coloring.palette
    inputs = {"class": {v: coloring.color[v] for v in h.nodes()}}
    prog = _DigitSweep(coloring.palette, stages)
    res = run(h, prog, inputs=inputs)
    chosen = {v for v in h.nodes() if res.outputs[v] is True}
    return chosen, prog.horizon


def ruling_set(g: Graph, alpha: int, beta: int,
               precoloring: Optional[ProperColoring] = None
               ) -> tuple[set[int], int, Graph]:
    """(alpha, beta)-ruling set built as a (2, beta')-ruling set on g^(alpha-1).

    Returns (set, rounds in g, the power graph).  Rounds on the power graph
    are charged at alpha-1 base rounds each, plus alpha-1 rounds to acquire
    the power neighborhoods.  ``precoloring``, when given, must be proper on
    the power graph and replaces the identifier-based coloring (dropping the
    log* term).
    """
    if alpha < 2:
        raise ValueError("alpha must be >= 2")
    if beta < alpha - 1:
        raise ValueError("beta must be >= alpha - 1")
    h = power_graph(g, alpha - 1) if alpha > 2 else g
    stages = max(1, beta // (alpha - 1))
    rounds_h = 0
    if precoloring is None:
        precoloring, rounds_h = linial_coloring(h)
    chosen, sweep_rounds = ruling_set_on(h, precoloring, stages)
    rounds_g = (alpha - 1) * (rounds_h + sweep_rounds + 1)
    return chosen, rounds_g, h


# ---------------------------------------------------------------------------
# Random distance coloring
# ---------------------------------------------------------------------------


def random_distance_coloring(g: Graph, radius: int, palette: int, seed: int = 0,
                             metric: str = "hop"
                             ) -> tuple[PartialProperColoring, int]:
    """Uniform color draw plus radius-wide conflict erasure.

    Survivors are pairwise distinct within the given radius, i.e. the colored
    subset is properly colored on the radius-power graph.  Under the infinity
    norm the conflict ball is the Chebyshev ball (grid coordinates required)
    and rounds are charged as d * radius hops.
    """
    if palette < 1:
        raise ValueError("palette must be >= 1")

    def draw(node_id: int) -> int:
        return random.Random(derive_seed(seed, "rdc", node_id)).randrange(1, palette + 1)

    if metric == "hop":
        hop_radius = radius
    elif metric == "infinity":
        if g.coords is None:
            raise ValueError("infinity norm needs grid coordinates")
        hop_radius = radius * len(g.coords[0])
    else:
        raise ValueError(f"unknown metric {metric!r}")

    def decide(view, ctx):
        mine = draw(ctx.node_id)
        for other_id, d in view.dist.items():
            if other_id == ctx.node_id:
                continue
            if metric == "infinity":
                rel = view.rel_coords[other_id]
                if max(abs(x) for x in rel) > radius:
                    continue
            if draw(other_id) == mine:
                return 0
        return mine

    prog = BallProgram(hop_radius, decide, name="random_distance_coloring")
    res = run(g, prog, master_seed=seed)
    color = tuple(res.outputs[v] or None for v in g.nodes())
    out = PartialProperColoring(palette=palette, color=color)
    return out, hop_radius
