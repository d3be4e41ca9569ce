"""Ground truth: exact validation of outputs and exact small-instance values.

Everything here is either a straight scan (coloring and clustering checks) or
an exact combinatorial computation: the fractional chromatic number comes from
the independent-set covering LP solved in rational arithmetic (no floating
point anywhere near a certificate), the independence number from branch and
bound, girth from per-node BFS.

The LP is solved by column generation: a restricted dual (one "at most 1 per
independent set" constraint per known set) is solved with an exact simplex,
and an exact maximum-weight-independent-set search prices missing sets.  When
no set of dual weight above 1 exists, the current weights form a feasible
fractional clique and the bound is tight, so the optimum is certified.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .graphs import DeskCapError, Graph, girth
from .colorings import MultiColoring


# ---------------------------------------------------------------------------
# Multicoloring and clustering reports
# ---------------------------------------------------------------------------


@dataclass
class MultiColoringReport:
    valid: bool
    complete: bool
    achieved_q_min: int
    ratio: float
    support_used: int
    witness: Optional[tuple] = None

    def to_json(self) -> str:
        data = dict(self.__dict__)
        data["witness"] = list(self.witness) if self.witness else None
        return json.dumps(data, sort_keys=True)


def check_multicoloring(g: Graph, mc: MultiColoring) -> MultiColoringReport:
    """Exact disjointness scan; reports, never raises."""
    witness = None
    valid = True
    for v in g.nodes():
        for c in mc.color_set(v):
            if not (1 <= c <= mc.p):
                valid = False
                witness = ("palette", v, c)
                break
        if not valid:
            break
    if valid:
        for u, v in g.edges():
            both = mc.color_set(u) & mc.color_set(v)
            if both:
                valid = False
                witness = ("edge", u, v, min(both))
                break
    counts = [len(mc.color_set(v)) for v in g.nodes()]
    colored = [c for c in counts if c > 0]
    achieved = min(colored) if len(colored) == g.n and g.n > 0 else 0
    complete = valid and g.n > 0 and all(c >= mc.q for c in counts)
    if g.n == 0:
        complete = valid
    ratio = (mc.p / achieved) if achieved > 0 else math.inf
    return MultiColoringReport(
        valid=valid,
        complete=complete,
        achieved_q_min=achieved,
        ratio=ratio,
        support_used=mc.support_used(),
        witness=witness,
    )


# ---------------------------------------------------------------------------
# Exact rational simplex (maximize c.y, A y <= b, y >= 0)
# ---------------------------------------------------------------------------


@dataclass
class LPResult:
    value: Fraction
    solution: list[Fraction]
    duals: list[Fraction]


def simplex_max(A: list[list[Fraction]], b: list[Fraction],
                c: list[Fraction]) -> LPResult:
    """Primal simplex with Bland's rule on a slack starting basis.

    Requires b >= 0 (true for all instances in this package).  Exact over
    Fractions; instances are tiny so no effort is spent on sparsity.
    """
    m, n = len(A), len(c)
    if any(bi < 0 for bi in b):
        raise ValueError("simplex_max expects nonnegative right-hand sides")
    # tableau rows: m constraint rows + objective row (reduced costs)
    T = [[Fraction(A[i][j]) for j in range(n)]
         + [Fraction(1) if k == i else Fraction(0) for k in range(m)]
         + [Fraction(b[i])]
         for i in range(m)]
    z = [-Fraction(cj) for cj in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = [n + i for i in range(m)]

    while True:
        enter = next((j for j in range(n + m) if z[j] < 0), None)
        if enter is None:
            break
        best_ratio = None
        leave = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best_ratio is None or ratio < best_ratio or (
                    ratio == best_ratio and basis[i] < basis[leave]
                ):
                    best_ratio = ratio
                    leave = i
        if leave is None:
            raise ArithmeticError("LP is unbounded")
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [a - f * p for a, p in zip(T[i], T[leave])]
        if z[enter] != 0:
            f = z[enter]
            z = [a - f * p for a, p in zip(z, T[leave])]
        basis[leave] = enter

    solution = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            solution[var] = T[i][-1]
    duals = [z[n + i] for i in range(m)]
    return LPResult(value=z[-1], solution=solution, duals=duals)


# ---------------------------------------------------------------------------
# Independent sets
# ---------------------------------------------------------------------------


def maximal_independent_sets(g: Graph, limit: int = 2_000_000) -> list[frozenset[int]]:
    """All maximal independent sets via pivoting Bron-Kerbosch (on the complement
    cliques formulation, phrased directly for independent sets)."""
    out: list[frozenset[int]] = []
    non_adj = [frozenset(g.nodes()) - g._adj_sets[v] - {v} for v in g.nodes()]  # noqa: SLF001

    def expand(R: set[int], P: set[int], X: set[int]):
        if not P and not X:
            out.append(frozenset(R))
            if len(out) > limit:
                raise DeskCapError(f"more than {limit} maximal independent sets")
            return
        pivot = max(P | X, key=lambda u: len(P & non_adj[u]))
        for v in list(P - non_adj[pivot]):
            expand(R | {v}, P & non_adj[v], X & non_adj[v])
            P.remove(v)
            X.add(v)

    if g.n:
        expand(set(), set(g.nodes()), set())
    return out


def _greedy_clique_cover(g: Graph, nodes: list[int]) -> list[list[int]]:
    """Greedy partition of ``nodes`` into cliques (for MWIS upper bounds)."""
    cliques: list[list[int]] = []
    for v in sorted(nodes, key=lambda u: -g.degree(u)):
        for cl in cliques:
            if all(g.has_edge(v, u) for u in cl):
                cl.append(v)
                break
        else:
            cliques.append([v])
    return cliques


def max_weight_independent_set(g: Graph, weights: list[int]) -> tuple[int, frozenset[int]]:
    """Exact MWIS for nonnegative integer weights (branch and bound).

    The bound per subproblem is the clique-cover relaxation: within a clique,
    at most one node can be chosen, so the sum of per-clique maxima bounds the
    achievable weight.
    """
    best_w = 0
    best_set: frozenset[int] = frozenset()
    order = sorted((v for v in g.nodes() if weights[v] > 0),
                   key=lambda v: -weights[v])

    def bound(P: list[int]) -> int:
        return sum(max(weights[u] for u in cl) for cl in _greedy_clique_cover(g, P))

    def search(P: list[int], cur_w: int, cur: set[int]):
        nonlocal best_w, best_set
        if not P:
            if cur_w > best_w:
                best_w, best_set = cur_w, frozenset(cur)
            return
        if cur_w + bound(P) <= best_w:
            return
        v = max(P, key=lambda u: (weights[u], -g.degree(u)))
        rest = [u for u in P if u != v and not g.has_edge(u, v)]
        search(rest, cur_w + weights[v], cur | {v})
        search([u for u in P if u != v], cur_w, cur)

    search(order, 0, set())
    return best_w, best_set


def independence_number(g: Graph, cap: int = 40) -> int:
    """Exact independence number via branch and bound (n <= cap)."""
    if g.n > cap:
        raise DeskCapError(f"independence number capped at n={cap}, got {g.n}")
    w, _ = max_weight_independent_set(g, [1] * g.n)
    return w


def max_independent_set_nodes(g: Graph, cap: int = 40) -> frozenset[int]:
    if g.n > cap:
        raise DeskCapError(f"independence number capped at n={cap}, got {g.n}")
    _, s = max_weight_independent_set(g, [1] * g.n)
    return s


# ---------------------------------------------------------------------------
# Fractional chromatic number (exact rational LP, column generation)
# ---------------------------------------------------------------------------


@dataclass
class ChiFResult:
    value: Fraction
    fractional_clique: dict[int, Fraction]
    cover_weights: list[tuple[frozenset[int], Fraction]]
    columns_generated: int

    def verify(self, g: Graph) -> bool:
        """Re-check the dual witness independently of the solver."""
        total = sum(self.fractional_clique.values(), Fraction(0))
        if total != self.value:
            return False
        weights = [self.fractional_clique.get(v, Fraction(0)) for v in g.nodes()]
        denom = math.lcm(*[w.denominator for w in weights]) if weights else 1
        iw = [int(w * denom) for w in weights]
        best, _ = max_weight_independent_set(g, iw)
        return Fraction(best, denom) <= 1


def _greedy_maximal_superset(g: Graph, seed_set: Iterable[int]) -> frozenset[int]:
    chosen = set(seed_set)
    for v in sorted(g.nodes(), key=lambda u: g.ids[u]):
        if v not in chosen and all(not g.has_edge(v, u) for u in chosen):
            chosen.add(v)
    return frozenset(chosen)


def chi_f_exact(g: Graph, cap: int = 40) -> ChiFResult:
    """Exact fractional chromatic number of a graph with at most ``cap`` nodes.

    Solves max { sum y_v : sum_{v in I} y_v <= 1 for every independent set I }
    by column generation; the optimal y is the fractional clique certificate
    and the constraint duals are the covering weights of the optimal
    fractional coloring.
    """
    if g.n > cap:
        raise DeskCapError(f"chi_f oracle capped at n={cap}, got {g.n}")
    if g.n == 0:
        return ChiFResult(Fraction(0), {}, [], 0)
    if g.m == 0:
        return ChiFResult(Fraction(1), {0: Fraction(1)},
                          [(frozenset(g.nodes()), Fraction(1))], 0)

    columns: list[frozenset[int]] = []
    seen = set()
    for v in g.nodes():
        s = _greedy_maximal_superset(g, [v])
        if s not in seen:
            seen.add(s)
            columns.append(s)

    generated = 0
    while True:
        A = [[Fraction(1) if v in I else Fraction(0) for v in g.nodes()]
             for I in columns]
        b = [Fraction(1)] * len(columns)
        c = [Fraction(1)] * g.n
        res = simplex_max(A, b, c)
        y = res.solution
        denom = math.lcm(*[w.denominator for w in y])
        iw = [int(w * denom) for w in y]
        best, best_set = max_weight_independent_set(g, iw)
        if Fraction(best, denom) <= 1:
            clique = {v: y[v] for v in g.nodes() if y[v] > 0}
            cover = [(columns[i], res.duals[i])
                     for i in range(len(columns)) if res.duals[i] > 0]
            return ChiFResult(value=res.value, fractional_clique=clique,
                              cover_weights=cover, columns_generated=generated)
        new_col = _greedy_maximal_superset(g, best_set)
        if new_col in seen:
            new_col = frozenset(best_set)
            if new_col in seen:
                raise ArithmeticError("column generation stalled")
        seen.add(new_col)
        columns.append(new_col)
        generated += 1


def chi_f_via_enumeration(g: Graph, cap: int = 22) -> Fraction:
    """Independent cross-check: the same LP over all maximal independent sets."""
    if g.n > cap:
        raise DeskCapError(f"enumeration cross-check capped at n={cap}")
    if g.m == 0:
        return Fraction(min(1, g.n))
    sets = maximal_independent_sets(g)
    A = [[Fraction(1) if v in I else Fraction(0) for v in g.nodes()] for I in sets]
    res = simplex_max(A, [Fraction(1)] * len(sets), [Fraction(1)] * g.n)
    return res.value


def chromatic_number(g: Graph, cap: int = 24) -> int:
    """Exact chromatic number by iterative-deepening backtracking."""
    if g.n > cap:
        raise DeskCapError(f"chromatic number capped at n={cap}, got {g.n}")
    if g.n == 0:
        return 0
    if g.m == 0:
        return 1

    order = sorted(g.nodes(), key=lambda v: -g.degree(v))

    def colorable(k: int) -> bool:
        assignment: dict[int, int] = {}

        def place(i: int) -> bool:
            if i == len(order):
                return True
            v = order[i]
            used = {assignment[u] for u in g.adj[v] if u in assignment}
            # Symmetry break: allow at most one brand-new color.
            fresh_allowed = min(k, (max(assignment.values()) + 1
                                    if assignment else 0) + 1)
            for cand in range(1, fresh_allowed + 1):
                if cand in used:
                    continue
                assignment[v] = cand
                if place(i + 1):
                    return True
                del assignment[v]
            return False

        return place(0)

    lb = 2 if g.m else 1
    clique = _greedy_clique_cover(g, list(g.nodes()))
    lb = max(lb, max(len(cl) for cl in clique) if clique else 1)
    for k in range(lb, g.n + 1):
        if colorable(k):
            return k
    return g.n


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass
class OracleCertificate:
    graph_hash: str
    n: int
    independence_number: int
    chi_f: Fraction
    girth: float
    notes: str = ""

    def consistent(self) -> bool:
        # chi_f >= n/alpha (uniform fractional clique), and trivially >= 1.
        return self.chi_f >= Fraction(self.n, self.independence_number)

    def to_json(self) -> str:
        return json.dumps(
            {
                "graph_hash": self.graph_hash,
                "n": self.n,
                "independence_number": self.independence_number,
                "chi_f": f"{self.chi_f.numerator}/{self.chi_f.denominator}",
                "girth": None if math.isinf(self.girth) else self.girth,
                "notes": self.notes,
            },
            sort_keys=True,
        )


def certificate(g: Graph, cap: int = 40) -> OracleCertificate:
    chi = chi_f_exact(g, cap=cap)
    return OracleCertificate(
        graph_hash=g.canonical_hash(),
        n=g.n,
        independence_number=independence_number(g, cap=cap),
        chi_f=chi.value,
        girth=girth(g),
        notes=f"column generation ({chi.columns_generated} priced columns)",
    )


@dataclass
class LowerBoundReport:
    """Certificate for one member of the subdivided high-girth family."""

    base_n: int
    base_m: int
    k: int
    n: int
    girth: float
    base_alpha: int
    alpha: int
    alpha_bound: int            # base_alpha + m*k, the counting bound
    chi_f: Fraction
    margin_over_two: Fraction
    base_has_odd_cycle: bool

    def to_json(self) -> str:
        d = dict(self.__dict__)
        d["chi_f"] = str(self.chi_f)
        d["margin_over_two"] = str(self.margin_over_two)
        d["girth"] = None if math.isinf(self.girth) else self.girth
        return json.dumps(d, sort_keys=True)


def certify_lowerbound_family(base: Graph, k: int, *, cap: int = 40) -> LowerBoundReport:
    """Build the (2k+1)-subdivision of ``base`` and certify its properties.

    The subdivision of a graph containing an odd cycle keeps an odd cycle, so
    its fractional chromatic number stays strictly above 2; a bipartite base
    yields margin exactly 0.  The independence number is compared against the
    counting bound alpha(base) + m*k.
    """
    from .graphs import SubdivisionSpec, subdivide_edges

    h = subdivide_edges(SubdivisionSpec(k=k, base=base))
    if h.n > cap:
        raise DeskCapError(f"subdivided graph has {h.n} nodes, oracle cap {cap}")
    base_alpha = independence_number(base, cap=cap)
    alpha = independence_number(h, cap=cap)
    chi = chi_f_exact(h, cap=cap)
    odd = not base.is_bipartite()
    report = LowerBoundReport(
        base_n=base.n,
        base_m=base.m,
        k=k,
        n=h.n,
        girth=girth(h),
        base_alpha=base_alpha,
        alpha=alpha,
        alpha_bound=base_alpha + base.m * k,
        chi_f=chi.value,
        margin_over_two=chi.value - 2,
        base_has_odd_cycle=odd,
    )
    if odd and report.margin_over_two <= 0:
        raise AssertionError("odd-cycle base must give chi_f strictly above 2")
    if not odd and report.margin_over_two != 0:
        raise AssertionError("bipartite base must give chi_f exactly 2")
    return report


# ---------------------------------------------------------------------------
# Clustering checks
# ---------------------------------------------------------------------------


@dataclass
class ClusteringReport:
    valid_assignment: bool
    separation_ok: bool
    separation_witness: Optional[tuple]
    unclustered_fraction: float
    strong_diameters: dict[int, float]
    weak_diameters: dict[int, float]
    connected_clusters: bool

    @property
    def max_strong_diameter(self) -> float:
        return max(self.strong_diameters.values(), default=0)

    @property
    def max_weak_diameter(self) -> float:
        return max(self.weak_diameters.values(), default=0)


def check_clustering(g: Graph, center_of: dict[int, Optional[int]],
                     separation: int = 1) -> ClusteringReport:
    """Exact BFS diameters, separation check and unclustered fraction.

    ``center_of`` maps node -> center node (or None for unclustered).
    ``separation=s`` demands distance >= s between nodes of distinct clusters
    (s=2 is the "no intercluster edge" contract).
    """
    members: dict[int, list[int]] = {}
    valid = True
    for v in g.nodes():
        c = center_of.get(v)
        if c is not None:
            members.setdefault(c, []).append(v)
    for c, mem in members.items():
        if center_of.get(c) != c:
            valid = False

    sep_ok = True
    witness = None
    if separation >= 2:
        for u, v in g.edges():
            cu, cv = center_of.get(u), center_of.get(v)
            if cu is not None and cv is not None and cu != cv:
                sep_ok = False
                witness = (u, v, cu, cv)
                break

    strong: dict[int, float] = {}
    weak: dict[int, float] = {}
    connected = True
    for c, mem in members.items():
        mem_set = set(mem)
        sub, keep = g.induced_subgraph(mem)
        sd = sub.diameter()
        strong[c] = sd
        if math.isinf(sd):
            connected = False
        wd = 0.0
        for v in mem:
            dist = g.bfs_distances(v)
            wd = max(wd, max(dist.get(u, math.inf) for u in mem_set))
        weak[c] = wd

    unclustered = sum(1 for v in g.nodes() if center_of.get(v) is None)
    return ClusteringReport(
        valid_assignment=valid,
        separation_ok=sep_ok,
        separation_witness=witness,
        unclustered_fraction=unclustered / g.n if g.n else 0.0,
        strong_diameters=strong,
        weak_diameters=weak,
        connected_clusters=connected,
    )
