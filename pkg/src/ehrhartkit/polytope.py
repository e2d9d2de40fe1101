"""Lattice polytopes given by generators, with exact H-representation and
normalization onto the affine lattice they span."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from . import linalg
from .linalg import det_bareiss, primitive, snf

Point = tuple[int, ...]


@dataclass(frozen=True)
class HalfSpace:
    """The inequality ``normal . x <= offset`` with a primitive integer normal."""

    normal: tuple[int, ...]
    offset: int

    def slack(self, x: Sequence[int]) -> int:
        return self.offset - sum(a * b for a, b in zip(self.normal, x))

    def contains(self, x: Sequence[int]) -> bool:
        return self.slack(x) >= 0


@dataclass(frozen=True)
class AffineUnimodularMap:
    """``x -> matrix @ x + translation`` with ``|det matrix| = 1``."""

    matrix: tuple[tuple[int, ...], ...]
    translation: tuple[int, ...]

    def __post_init__(self):
        if abs(det_bareiss(self.matrix)) != 1:
            raise ValueError("matrix is not unimodular")

    def __call__(self, x: Sequence[int]) -> Point:
        return tuple(sum(a * b for a, b in zip(row, x)) + t for row, t in zip(self.matrix, self.translation))

    def apply(self, p: "Polytope") -> "Polytope":
        return Polytope([self(x) for x in p.points])

    def inverse(self) -> "AffineUnimodularMap":
        inv = linalg.inverse(self.matrix)
        m = tuple(tuple(int(x) for x in row) for row in inv)
        t = tuple(-sum(a * b for a, b in zip(row, self.translation)) for row in m)
        return AffineUnimodularMap(m, t)

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "translation": list(self.translation)}


@dataclass(frozen=True)
class LatticeEmbedding:
    """Isomorphism between Z^d and the affine lattice ``aff(P) ∩ Z^n``.

    ``x = origin + y @ basis`` and ``y = (x - origin) @ coords``.
    """

    origin: Point
    basis: tuple[tuple[int, ...], ...]  # d rows of length n
    coords: tuple[tuple[int, ...], ...]  # n rows of length d

    def to_lattice(self, x: Sequence[int]) -> Point:
        diff = [a - b for a, b in zip(x, self.origin)]
        d = len(self.basis)
        return tuple(sum(diff[i] * self.coords[i][j] for i in range(len(diff))) for j in range(d))

    def to_ambient(self, y: Sequence[int]) -> Point:
        n = len(self.origin)
        return tuple(self.origin[j] + sum(y[i] * self.basis[i][j] for i in range(len(y))) for j in range(n))


def _as_points(points: Iterable[Sequence[int]]) -> list[Point]:
    pts = [tuple(int(x) for x in p) for p in points]
    if not pts:
        raise ValueError("empty point list")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise ValueError("points of mixed dimension")
    return pts


def affine_dimension(points: Iterable[Sequence[int]]) -> int:
    pts = _as_points(points)
    base = pts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    return linalg.rank(diffs) if diffs and diffs[0] else 0


def in_convex_hull(p: Sequence[int], points: Sequence[Sequence[int]]) -> bool:
    """Exact LP membership test ``p in conv(points)``."""
    if not points:
        return False
    n = len(p)
    A_eq = [[q[i] for q in points] for i in range(n)] + [[1] * len(points)]
    b_eq = list(p) + [1]
    out = linalg.simplex_standard(A_eq, b_eq, [0] * len(points))
    return out.status == "optimal"


def vertex_reduce(points: Iterable[Sequence[int]]) -> list[Point]:
    """The generators that are vertices of their convex hull, sorted."""
    pts = sorted(set(_as_points(points)))
    return [p for i, p in enumerate(pts) if not in_convex_hull(p, pts[:i] + pts[i + 1:])]


# ---------------------------------------------------------------------------
# double description


def _dd_facets(vertices: list[Point]) -> list[HalfSpace]:
    """Facets of a full-dimensional polytope from its vertices.

    Works on the cone ``{y : (1, v) . y >= 0}`` whose extreme rays
    ``y = (b, -a)`` are the facet inequalities ``a . x <= b``.
    """
    d = len(vertices[0])
    rows = [(1,) + v for v in sorted(vertices)]
    basis_idx: list[int] = []
    for i in range(len(rows)):
        if linalg.rank([rows[j] for j in basis_idx + [i]]) == len(basis_idx) + 1:
            basis_idx.append(i)
            if len(basis_idx) == d + 1:
                break
    if len(basis_idx) != d + 1:
        raise ValueError("polytope is not full-dimensional")
    inv = linalg.inverse([rows[i] for i in basis_idx])
    # columns of the inverse are the rays of the initial simplicial cone
    rays = [tuple(primitive([inv[r][c] for r in range(d + 1)])) for c in range(d + 1)]
    processed = list(basis_idx)

    def zeros(ray, idx):
        return frozenset(i for i in idx if sum(a * b for a, b in zip(rows[i], ray)) == 0)

    zsets = {r: zeros(r, processed) for r in rays}
    for i in range(len(rows)):
        if i in basis_idx:
            continue
        h = rows[i]
        val = {r: sum(a * b for a, b in zip(h, r)) for r in rays}
        plus = [r for r in rays if val[r] > 0]
        minus = [r for r in rays if val[r] < 0]
        zero = [r for r in rays if val[r] == 0]
        new = []
        for rp in plus:
            for rm in minus:
                common = zsets[rp] & zsets[rm]
                if len(common) < d - 1:
                    continue
                if any(common <= zsets[o] for o in rays if o != rp and o != rm):
                    continue
                comb = [val[rp] * b - val[rm] * a for a, b in zip(rp, rm)]
                new.append(tuple(primitive(comb)))
        processed.append(i)
        rays = plus + zero + new
        new_z = {r: zsets[r] for r in plus}
        new_z.update({r: zsets[r] | {i} for r in zero})
        new_z.update({r: zeros(r, processed) for r in new})
        zsets = new_z
    facets = []
    for r in rays:
        a = tuple(-x for x in r[1:])
        g = 0
        for x in a:
            g = gcd(g, x)
        facets.append(HalfSpace(tuple(x // g for x in a), r[0] // g))
    return sorted(set(facets), key=lambda f: (f.normal, f.offset))


class Polytope:
    """Convex hull of finitely many lattice points."""

    def __init__(self, points: Iterable[Sequence[int]]):
        self.points: tuple[Point, ...] = tuple(_as_points(points))
        self.ambient_dim = len(self.points[0])

    def __repr__(self):
        return f"Polytope(dim={self.dim}, ambient_dim={self.ambient_dim}, vertices={len(self.vertices)})"

    @cached_property
    def vertices(self) -> tuple[Point, ...]:
        return tuple(vertex_reduce(self.points))

    @cached_property
    def dim(self) -> int:
        return affine_dimension(self.points)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    @cached_property
    def facets(self) -> tuple[HalfSpace, ...]:
        if not self.is_full_dimensional:
            raise ValueError("facet enumeration needs a full-dimensional polytope; lattice_normalize first")
        if self.dim == 0:
            return ()
        return tuple(_dd_facets(list(self.vertices)))

    @cached_property
    def normalized(self) -> tuple["Polytope", LatticeEmbedding]:
        return lattice_normalize(self)

    def contains(self, x: Sequence[int]) -> bool:
        if self.is_full_dimensional:
            return all(f.contains(x) for f in self.facets)
        return in_convex_hull(x, self.vertices)

    def lattice_points(self) -> list[Point]:
        from .enumeration import enumerate_points

        q, emb = self.normalized
        return sorted(emb.to_ambient(y) for y in enumerate_points(q, 1))

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "points": [list(p) for p in self.points]}

    @classmethod
    def from_json(cls, data) -> "Polytope":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        pts = data["points"]
        n = data["ambient_dim"]
        if not isinstance(n, int) or any(len(p) != n for p in pts):
            raise ValueError("points do not match ambient_dim")
        if any(not isinstance(x, int) or isinstance(x, bool) for p in pts for x in p):
            raise ValueError("coordinates must be integers")
        return cls(pts)

    def __eq__(self, other):
        return isinstance(other, Polytope) and set(self.vertices) == set(other.vertices)

    def __hash__(self):
        return hash(frozenset(self.vertices))


def facet_enumeration(p: Polytope) -> list[HalfSpace]:
    return list(p.facets)


def lattice_normalize(p: Polytope) -> tuple[Polytope, LatticeEmbedding]:
    """Re-express ``p`` in coordinates of the affine lattice ``aff(p) ∩ Z^n``."""
    n = p.ambient_dim
    if p.is_full_dimensional:
        ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return p, LatticeEmbedding((0,) * n, ident, ident)
    origin = min(p.points)
    diffs = [[a - b for a, b in zip(x, origin)] for x in p.points if x != origin]
    d = p.dim
    if d == 0:
        return Polytope([()]), LatticeEmbedding(origin, (), tuple(() for _ in range(n)))
    # diffs = u^-1 s v^-1; the first d rows of v^-1 are a basis of the saturation
    s, u, v = snf(diffs)
    vinv = linalg.inverse(v)
    basis = tuple(tuple(int(x) for x in vinv[i]) for i in range(d))
    coords = tuple(tuple(row[:d]) for row in v)
    emb = LatticeEmbedding(origin, basis, coords)
    return Polytope([emb.to_lattice(x) for x in p.points]), emb
