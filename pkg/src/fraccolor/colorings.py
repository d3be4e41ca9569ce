"""Coloring data types shared across algorithm and verification modules.

Colors are 1-based integers.  A proper coloring assigns one color per node; a
partial coloring may leave nodes uncolored (``None``); a multicoloring assigns
a set of colors per node (the empty set meaning uncolored) with adjacent sets
required to be disjoint.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .graphs import Graph


@dataclass(frozen=True)
class ProperColoring:
    """Total proper coloring with colors in {1..palette}."""

    palette: int
    color: tuple[int, ...]

    def validate(self, g: Graph) -> None:
        if len(self.color) != g.n:
            raise ValueError("coloring size does not match graph")
        for v, c in enumerate(self.color):
            if not (1 <= c <= self.palette):
                raise ValueError(f"color {c} of node {v} outside palette")
        for u, v in g.edges():
            if self.color[u] == self.color[v]:
                raise ValueError(f"edge ({u},{v}) is monochromatic")


@dataclass(frozen=True)
class PartialProperColoring:
    """Per-node color or ``None``; colored neighbors must differ."""

    palette: int
    color: tuple[Optional[int], ...]

    def colored_nodes(self) -> list[int]:
        return [v for v, c in enumerate(self.color) if c is not None]

    def validate(self, g: Graph) -> None:
        for v, c in enumerate(self.color):
            if c is not None and not (1 <= c <= self.palette):
                raise ValueError(f"color {c} of node {v} outside palette")
        for u, v in g.edges():
            if self.color[u] is not None and self.color[u] == self.color[v]:
                raise ValueError(f"edge ({u},{v}) is monochromatic")

    def uncolored_fraction(self) -> float:
        if not self.color:
            return 0.0
        return sum(1 for c in self.color if c is None) / len(self.color)


@dataclass(frozen=True)
class ListAssignment:
    """Finite candidate color set per node."""

    lists: tuple[frozenset[int], ...]

    def is_degree_plus(self, g: Graph, x: int) -> bool:
        return all(len(self.lists[v]) >= g.degree(v) + x for v in g.nodes())


@dataclass
class MultiColoring:
    """Color sets over palette {1..p} with per-node target q (may be partial)."""

    p: int
    q: int
    colors: dict[int, frozenset[int]]

    def color_set(self, v: int) -> frozenset[int]:
        return self.colors.get(v, frozenset())

    def is_complete(self) -> bool:
        return all(len(s) >= self.q for s in self.colors.values())

    def min_count(self) -> int:
        return min((len(s) for s in self.colors.values()), default=0)

    def support_used(self) -> int:
        used = set()
        for s in self.colors.values():
            used |= s
        return len(used)

    def shifted(self, offset: int) -> "MultiColoring":
        """Same coloring over the palette block shifted by ``offset``."""
        return MultiColoring(
            p=self.p + offset,
            q=self.q,
            colors={v: frozenset(c + offset for c in s) for v, s in self.colors.items()},
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "p": self.p,
                "q": self.q,
                "colors": {str(v): sorted(s) for v, s in sorted(self.colors.items())},
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "MultiColoring":
        data = json.loads(text)
        return MultiColoring(
            p=int(data["p"]),
            q=int(data["q"]),
            colors={int(v): frozenset(s) for v, s in data["colors"].items()},
        )


def merge_disjoint_palettes(parts: list[MultiColoring], n: int) -> MultiColoring:
    """Union of colorings over consecutive disjoint palette blocks.

    Run j (0-based) occupies colors {j*p + 1 .. (j+1)*p}; the merged target is
    the sum of the parts' targets (callers overwrite it with the guarantee
    they actually certify).
    """
    if not parts:
        return MultiColoring(p=0, q=0, colors={v: frozenset() for v in range(n)})
    p = parts[0].p
    if any(part.p != p for part in parts):
        raise ValueError("all parts must declare the same per-run palette size")
    merged: dict[int, set[int]] = {v: set() for v in range(n)}
    for j, part in enumerate(parts):
        off = j * p
        for v, s in part.colors.items():
            merged[v].update(c + off for c in s)
    return MultiColoring(
        p=p * len(parts),
        q=sum(part.q for part in parts),
        colors={v: frozenset(s) for v, s in merged.items()},
    )


def partial_to_multicoloring(pc: PartialProperColoring, q: int = 1) -> MultiColoring:
    return MultiColoring(
        p=pc.palette,
        q=q,
        colors={v: (frozenset([c]) if c is not None else frozenset())
                for v, c in enumerate(pc.color)},
    )


def expand_to_blocks(pc: PartialProperColoring, q: int) -> MultiColoring:
    """Replace color j by the block {(j-1)q+1 .. jq}: a partial (palette*q : q)."""
    colors = {}
    for v, c in enumerate(pc.color):
        if c is None:
            colors[v] = frozenset()
        else:
            colors[v] = frozenset(range((c - 1) * q + 1, c * q + 1))
    return MultiColoring(p=pc.palette * q, q=q, colors=colors)
