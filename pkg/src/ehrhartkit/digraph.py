"""Directed graphs and their arc polytopes."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .polytope import Polytope


@dataclass(frozen=True)
class Digraph:
    """``n`` vertices numbered from 1 and an ordered list of arcs ``(tail, head)``."""

    n: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        arcs = tuple((int(a), int(b)) for a, b in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        for u, v in arcs:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"arc ({u}, {v}) out of range 1..{self.n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
        if len(set(arcs)) != len(arcs):
            raise ValueError("duplicate arcs")

    @classmethod
    def from_json(cls, data) -> "Digraph":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        return cls(data["n"], tuple(tuple(a) for a in data["arcs"]))

    def to_json(self) -> dict:
        return {"n": self.n, "arcs": [list(a) for a in self.arcs]}


def incidence_matrix(g: Digraph) -> list[list[int]]:
    """``n x |A|`` matrix; the column of arc ``(u, v)`` is ``-1`` at row ``u`` and ``+1`` at row ``v``."""
    m = [[0] * len(g.arcs) for _ in range(g.n)]
    for j, (u, v) in enumerate(g.arcs):
        m[u - 1][j] = -1
        m[v - 1][j] = 1
    return m


def arc_polytope(g: Digraph) -> Polytope:
    if not g.arcs:
        raise ValueError("arc polytope of a graph without arcs")
    cols = list(zip(*incidence_matrix(g)))
    return Polytope(cols)


FIGURE1_ARCS = (
    (1, 8), (1, 12), (1, 14), (2, 8), (3, 9), (4, 11), (5, 12), (6, 13),
    (7, 14), (9, 2), (10, 3), (10, 4), (10, 6), (11, 5), (13, 7),
)


def figure1_graph() -> Digraph:
    """The 14-vertex bipartite digraph whose arc polytope is the 12-dimensional example."""
    return Digraph(14, FIGURE1_ARCS)
