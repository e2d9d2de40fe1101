"""Simulated annealing over small lattice polytopes, hunting IDP polytopes whose
h*-vector is not log-concave.

The score is a normalized log-concavity violation (positive exactly when the
h*-vector fails log-concavity).  Positive-score states are escalated through
cheap necessary IDP conditions before the full check.  A run is a pure
function of its config: same seed, same logs.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import linalg
from .ehrhart import HStarVector, fraction_str, hstar
from .enumeration import enumerate_points
from .idp import is_idp
from .polytope import Point, Polytope, affine_dimension, vertex_reduce

MOVES = ("add", "remove", "translate")
IDP_LEVELS = ("off", "necessary", "full")


@dataclass
class SearchConfig:
    seed: int
    dim: int = 3
    vertex_budget: int = 3  # at most dim + vertex_budget vertices
    coord_range: int = 2
    steps: int = 500
    initial_temperature: float = 0.05
    cooling: float = 0.995
    move_weights: tuple[float, float, float] = (1.0, 1.0, 1.0)
    idp_level: str = "full"
    max_retries: int = 50
    start: Optional[list[list[int]]] = None

    def __post_init__(self):
        if self.seed is None:
            raise ValueError("a seed is required")
        if self.dim < 1 or self.vertex_budget < 1 or self.coord_range < 1 or self.steps < 0:
            raise ValueError("dimension, budgets and step count must be positive")
        if self.idp_level not in IDP_LEVELS:
            raise ValueError(f"idp_level must be one of {IDP_LEVELS}")
        if self.start is not None:
            self.dim = len(self.start[0])


@dataclass
class Candidate:
    step: int
    seed: int
    vertices: list[list[int]]
    hstar: list[int]
    score: Fraction
    raw_violation: int
    idp: str  # unknown | failed-necessary | passed-necessary | not-idp | verified

    def to_json(self) -> dict:
        out = asdict(self)
        out["score"] = fraction_str(self.score)
        return out


@dataclass
class SearchResult:
    candidates: list[Candidate] = field(default_factory=list)
    log: list[dict] = field(default_factory=list)
    best: Optional[Candidate] = None

    def ranked(self) -> list[Candidate]:
        return sorted(self.candidates, key=lambda c: (-c.score, c.step))


def raw_violation(h: Sequence[int]) -> int:
    """Largest ``h[i-1]*h[i+1] - h[i]**2`` over interior ``i`` (0 without interior indices)."""
    return max((h[i - 1] * h[i + 1] - h[i] * h[i] for i in range(1, len(h) - 1)), default=0)


def lc_violation_score(h: Sequence[int]) -> Fraction:
    """``max_i (h[i-1]*h[i+1] - h[i]**2) / max(1, h[i]**2)``; vectors shorter than 3 score 0."""
    return max(
        (Fraction(h[i - 1] * h[i + 1] - h[i] * h[i], max(1, h[i] * h[i])) for i in range(1, len(h) - 1)),
        default=Fraction(0),
    )


# ---------------------------------------------------------------------------
# moves


def add_point(vertices: Sequence[Point], x: Point) -> Optional[list[Point]]:
    """Vertices after adding ``x``, or None unless exactly ``x`` is gained and nothing lost."""
    x = tuple(x)
    if x in vertices:
        return None
    new = vertex_reduce(list(vertices) + [x])
    return new if set(new) == set(vertices) | {x} else None


def remove_vertex(vertices: Sequence[Point], v: Point) -> Optional[list[Point]]:
    """Vertices after dropping ``v``, or None if the dimension would drop."""
    rest = [u for u in vertices if u != tuple(v)]
    if not rest or affine_dimension(rest) != affine_dimension(vertices):
        return None
    return sorted(rest)


def translate_vertex(vertices: Sequence[Point], v: Point, step: Point) -> Optional[list[Point]]:
    moved = tuple(a + b for a, b in zip(v, step))
    rest = [u for u in vertices if u != tuple(v)]
    if moved in rest:
        return None
    new = vertex_reduce(rest + [moved])
    if set(new) != set(rest) | {moved} or affine_dimension(new) != affine_dimension(vertices):
        return None
    return new


@dataclass
class Mutation:
    polytope: Polytope
    move: str
    changed: bool


def mutate(p: Polytope, rng: random.Random, *, move: Optional[str] = None, coord_range: int = 2,
           max_vertices: Optional[int] = None, weights=(1.0, 1.0, 1.0), max_retries: int = 50) -> Mutation:
    """One local modification of ``p``; moves that lose dimension or break the
    budget are retried, and after ``max_retries`` the input comes back unchanged."""
    verts = sorted(p.vertices)
    d = p.ambient_dim
    for _ in range(max_retries):
        kind = move or rng.choices(MOVES, weights=weights)[0]
        if kind == "add":
            x = tuple(rng.randint(-coord_range, coord_range) for _ in range(d))
            new = add_point(verts, x)
            if new is not None and max_vertices is not None and len(new) > max_vertices:
                new = None
        elif kind == "remove":
            new = remove_vertex(verts, rng.choice(verts))
        else:
            v = rng.choice(verts)
            i = rng.randrange(d)
            step = tuple((rng.choice((-1, 1)) if j == i else 0) for j in range(d))
            new = translate_vertex(verts, v, step)
            if new is not None and any(abs(c) > coord_range for u in new for c in u):
                new = None
        if new is not None:
            return Mutation(Polytope(new), kind, True)
    return Mutation(p, move or "none", False)


# ---------------------------------------------------------------------------
# IDP staging


def lattice_points_span(p: Polytope) -> bool:
    """Whether differences of the lattice points generate the whole lattice."""
    q, _ = p.normalized
    pts = list(enumerate_points(q, 1))
    base = pts[0]
    diffs = [[a - b for a, b in zip(x, base)] for x in pts[1:]]
    if q.ambient_dim == 0:
        return True
    h, _ = linalg.hnf(diffs)
    pivots = []
    for row in h:
        nz = [x for x in row if x]
        if nz:
            pivots.append(nz[0])
    return len(pivots) == q.ambient_dim and math.prod(pivots) == 1


def idp_status(p: Polytope, level: str) -> str:
    if level == "off":
        return "unknown"
    if not lattice_points_span(p) or is_idp(p, k_max=1).holds is False:
        return "failed-necessary"
    if level == "necessary":
        return "passed-necessary"
    verdict = is_idp(p)
    if verdict.holds is True:
        return "verified"
    return "not-idp" if verdict.holds is False else "unknown"


# ---------------------------------------------------------------------------
# annealing


def _standard_simplex(d: int) -> Polytope:
    return Polytope([[0] * d] + [[int(i == j) for j in range(d)] for i in range(d)])


def _evaluate(p: Polytope) -> tuple[HStarVector, Fraction, int]:
    h = hstar(p)
    return h, lc_violation_score(h), raw_violation(h)


def local_search(cfg: SearchConfig, out_dir: Optional[Path] = None) -> SearchResult:
    rng = random.Random(cfg.seed)
    result = SearchResult()
    current = Polytope(cfg.start) if cfg.start is not None else _standard_simplex(cfg.dim)
    if not current.is_full_dimensional:
        raise ValueError("search states must be full-dimensional")
    max_vertices = current.ambient_dim + cfg.vertex_budget
    if cfg.start is not None:
        max_vertices = max(max_vertices, len(current.vertices))
    h, score, raw = _evaluate(current)
    escalated: dict[frozenset, str] = {}

    def record(step, move, accepted, poly, h, score, raw):
        result.log.append({
            "step": step,
            "move": move,
            "accepted": accepted,
            "score": fraction_str(score),
            "raw_violation": raw,
            "hstar": list(h),
            "vertices": [list(v) for v in sorted(poly.vertices)],
        })
        if score > 0:
            key = frozenset(poly.vertices)
            if key not in escalated:
                escalated[key] = idp_status(poly, cfg.idp_level)
                cand = Candidate(step, cfg.seed, [list(v) for v in sorted(poly.vertices)], list(h),
                                 score, raw, escalated[key])
                result.candidates.append(cand)
                if result.best is None or cand.score > result.best.score:
                    result.best = cand

    record(0, "init", True, current, h, score, raw)
    temp = cfg.initial_temperature
    for step in range(1, cfg.steps + 1):
        mut = mutate(current, rng, coord_range=cfg.coord_range, max_vertices=max_vertices,
                     weights=cfg.move_weights, max_retries=cfg.max_retries)
        if not mut.changed:
            result.log.append({"step": step, "move": mut.move, "accepted": False, "retries_exhausted": True})
            continue
        nh, nscore, nraw = _evaluate(mut.polytope)
        delta = float(nscore - score)
        accepted = delta >= 0 or (temp > 0 and rng.random() < math.exp(delta / temp))
        if accepted:
            current, h, score, raw = mut.polytope, nh, nscore, nraw
        record(step, mut.move, accepted, mut.polytope, nh, nscore, nraw)
        temp *= cfg.cooling
    if out_dir is not None:
        write_results(result, out_dir)
    return result


def write_results(result: SearchResult, out_dir: Path) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "candidates.jsonl", "w", encoding="utf-8") as fh:
        for c in result.ranked():
            fh.write(json.dumps(c.to_json(), sort_keys=True) + "\n")
    with open(out_dir / "runlog.jsonl", "w", encoding="utf-8") as fh:
        for entry in result.log:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")


def reverify(c: Candidate) -> bool:
    """Recompute score and IDP for a persisted candidate from its vertices alone."""
    p = Polytope(c.vertices)
    h = hstar(p)
    if list(h) != c.hstar or lc_violation_score(h) != c.score:
        return False
    if c.idp == "verified":
        return c.score > 0 and is_idp(p).holds is True
    return True
