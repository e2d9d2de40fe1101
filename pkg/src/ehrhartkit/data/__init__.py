"""Bundled polytopes and digraph, kept both as constants and as JSON files."""

from __future__ import annotations

import json
from importlib import resources

from ..digraph import FIGURE1_ARCS, Digraph
from ..polytope import Polytope


def _unit(i: int, n: int) -> list[int]:
    return [int(j == i) for j in range(n)]


THEOREM1_POINTS = [_unit(i, 7) for i in range(7)] + [
    [1, -1, -1, -1, -1, 0, 0],
    [-1, -1, 0, 0, 0, -1, -1],
]

THEOREM2_POINTS = [[0] * 12] + [_unit(i, 12) for i in range(1, 12)] + [
    [1, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0],
    [1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1],
]

NAMES = ("theorem1", "theorem2", "figure1")


def load_json(name: str) -> dict:
    text = resources.files(__package__).joinpath(f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


def theorem1() -> Polytope:
    return Polytope(THEOREM1_POINTS)


def theorem2() -> Polytope:
    return Polytope(THEOREM2_POINTS)


def figure1() -> Digraph:
    return Digraph(14, FIGURE1_ARCS)
