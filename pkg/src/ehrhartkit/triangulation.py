"""Triangulations of lattice-point configurations.

A triangulation is a set of index tuples into a fixed list of points.  All
geometric predicates are exact.

Exhaustive enumeration walks the flip graph from a placing triangulation and
is only offered for configurations of at most ``d + 3`` points.  Its
completeness there rests on the flip graph being connected for corank at
most 2 (every triangulation of ``d + 3`` points is regular, and the flip
graph of regular triangulations is the edge graph of the secondary polytope;
see De Loera, Rambau and Santos, *Triangulations*, Springer 2010, sections
5.4-5.5).  The enumeration result is only claimed to be exhaustive under that
fact.
"""

from __future__ import annotations

import time
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Optional, Sequence

from . import linalg
from .ehrhart import HStarVector
from .enumeration import BudgetExceeded, enumerate_points
from .linalg import det_bareiss, snf
from .polytope import Point, Polytope


def _homogenized(points: Sequence[Point], cell: Sequence[int]) -> list[list[int]]:
    """Matrix whose columns are ``(1, p)`` for the points of ``cell``."""
    cols = [(1,) + tuple(points[i]) for i in cell]
    return [list(r) for r in zip(*cols)]


def _barycentric(points, cell, x) -> Optional[list[Fraction]]:
    """Affine coordinates of ``x`` w.r.t. ``cell``, or None outside its affine hull."""
    return linalg.solve(_homogenized(points, cell), (1,) + tuple(x))


class Triangulation:
    def __init__(self, points: Sequence[Sequence[int]], simplices):
        self.points: tuple[Point, ...] = tuple(tuple(p) for p in points)
        self.simplices: frozenset[tuple[int, ...]] = frozenset(tuple(sorted(s)) for s in simplices)
        self.dim = len(next(iter(self.simplices))) - 1 if self.simplices else -1

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self.simplices == other.simplices

    def __hash__(self):
        return hash(self.simplices)

    def __repr__(self):
        return f"Triangulation({len(self.simplices)} simplices)"

    def sorted_simplices(self) -> list[tuple[int, ...]]:
        return sorted(self.simplices)

    @cached_property
    def volumes(self) -> dict[tuple[int, ...], int]:
        """Normalized volume (|homogenized determinant|) of each simplex."""
        return {s: abs(det_bareiss(_homogenized(self.points, s))) for s in self.simplices}

    @property
    def is_unimodular(self) -> bool:
        return all(v == 1 for v in self.volumes.values())

    @cached_property
    def used_points(self) -> frozenset[int]:
        return frozenset(i for s in self.simplices for i in s)

    @cached_property
    def ridges(self) -> dict[tuple[int, ...], list[tuple[tuple[int, ...], int]]]:
        """Each codimension-one face with the (simplex, opposite index) pairs containing it."""
        out: dict = {}
        for s in self.simplices:
            for v in s:
                r = tuple(i for i in s if i != v)
                out.setdefault(r, []).append((s, v))
        return out

    @cached_property
    def _inverses(self):
        return {s: linalg.inverse(_homogenized(self.points, s)) for s in self.simplices}

    def barycentric(self, s, x) -> list[Fraction]:
        inv = self._inverses[s]
        h = (1,) + tuple(x)
        return [sum(a * b for a, b in zip(row, h)) for row in inv]

    def to_json(self) -> dict:
        return {"simplices": [list(s) for s in self.sorted_simplices()]}


def point_config(p: Polytope) -> tuple[Polytope, list[Point]]:
    """Lattice-normalized polytope and its lattice points in lexicographic order."""
    q, _ = p.normalized
    return q, sorted(enumerate_points(q, 1))


def is_valid(t: Triangulation, p: Polytope) -> bool:
    """Certificate that ``t`` triangulates the full-dimensional polytope ``p``.

    Checks nondegenerate simplices, ridge multiplicities (boundary ridges lie
    on a facet of ``p``, interior ridges separate their two simplices) and that
    the volumes add up to the volume of ``p``.
    """
    if any(v == 0 for v in t.volumes.values()):
        return False
    for r, owners in t.ridges.items():
        if len(owners) == 1:
            if not any(all(f.slack(t.points[i]) == 0 for i in r) for f in p.facets):
                return False
        elif len(owners) == 2:
            (s1, a), (s2, b) = owners
            if t.barycentric(s1, t.points[b])[s1.index(a)] >= 0:
                return False
        else:
            return False
    ref = placing_triangulation(list(p.vertices))
    return sum(t.volumes.values()) == sum(ref.volumes.values())


def placing_triangulation(points: Sequence[Sequence[int]], order: Optional[Sequence[int]] = None) -> Triangulation:
    """Insert points one by one (lexicographically by default), coning over visible boundary facets.

    Points falling inside the current hull are skipped.
    """
    pts = [tuple(p) for p in points]
    if order is None:
        order = sorted(range(len(pts)), key=lambda i: pts[i])
    cells: list[tuple[int, ...]] = []
    for idx in order:
        x = pts[idx]
        if not cells:
            cells = [(idx,)]
            continue
        if _barycentric(pts, cells[0], x) is None:
            cells = [c + (idx,) for c in cells]
            continue
        lams = [_barycentric(pts, c, x) for c in cells]
        if any(all(v >= 0 for v in lam) for lam in lams):
            continue
        ridge_count = Counter(tuple(sorted(set(c) - {v})) for c in cells for v in c)
        new = []
        for c, lam in zip(cells, lams):
            for j, v in enumerate(c):
                if lam[j] < 0:
                    r = tuple(sorted(set(c) - {v}))
                    if ridge_count[r] == 1:
                        new.append(r + (idx,))
        cells += new
    return Triangulation(pts, cells)


# ---------------------------------------------------------------------------
# half-open decomposition


def _lex_sign(vec) -> int:
    for v in vec:
        if v:
            return 1 if v > 0 else -1
    return 0


def _box_heights(matrix: list[list[int]], excluded: set[int]) -> Counter:
    """Height distribution of lattice points in the half-open fundamental parallelepiped.

    Parallelepiped coefficients lie in [0, 1), except that for ``j`` in
    ``excluded`` a zero coefficient is replaced by one.
    """
    n = len(matrix)
    s, _, v = snf(matrix)
    diag = [s[i][i] for i in range(n)]
    heights: Counter = Counter()
    moduli = [(i, diag[i]) for i in range(n) if diag[i] != 1]

    def rec(pos, g):
        if pos == len(moduli):
            lam = [Fraction(sum(v[j][i] * Fraction(g.get(i, 0), diag[i]) for i in g)) % 1 for j in range(n)]
            h = sum(lam) + sum(1 for j in excluded if lam[j] == 0)
            heights[int(h)] += 1
            return
        i, m = moduli[pos]
        for val in range(m):
            g[i] = val
            rec(pos + 1, g)
        del g[i]

    rec(0, {})
    return heights


def hstar_halfopen(p: Polytope, triangulation: Optional[Triangulation] = None) -> HStarVector:
    """h*-vector from a half-open decomposition of a triangulation of ``p``."""
    q, pts = point_config(p)
    d = q.ambient_dim
    if d == 0:
        return HStarVector(0, (1,))
    t = triangulation or placing_triangulation(pts)
    verts = q.vertices
    centroid = [sum(v[i] for v in verts) for i in range(d)]
    m = len(verts)
    h = [0] * (d + 1)
    for s in t.sorted_simplices():
        inv = t._inverses[s]
        excluded = set()
        for j, row in enumerate(inv):
            # reference point: centroid + eps*e_1 + eps^2*e_2 + ...
            lead = m * row[0] + sum(a * b for a, b in zip(row[1:], centroid))
            if _lex_sign([lead] + list(row[1:])) < 0:
                excluded.add(j)
        for height, cnt in _box_heights(_homogenized(t.points, s), excluded).items():
            h[height] += cnt
    return HStarVector(d, tuple(h))


# ---------------------------------------------------------------------------
# unimodularity of all triangulations


def all_spanning_simplices_unimodular(p: Polytope) -> tuple[bool, list[tuple[int, ...]], int]:
    """Every full-dimensional simplex on lattice points of ``p`` has volume 1.

    Returns ``(verdict, violating index sets, number of subsets examined)``.
    """
    q, pts = point_config(p)
    d = q.ambient_dim
    bad = []
    total = 0
    for cell in combinations(range(len(pts)), d + 1):
        total += 1
        det = det_bareiss(_homogenized(pts, cell))
        if abs(det) > 1:
            bad.append(cell)
    return not bad, bad, total


# ---------------------------------------------------------------------------
# flips


def circuits(points: Sequence[Point]) -> list[tuple[frozenset, frozenset]]:
    """Oriented circuits ``(Z+, Z-)`` of a configuration of corank at most 2."""
    n = len(points)
    A = [[1] * n] + [[p[i] for p in points] for i in range(len(points[0]))]
    ker = linalg.nullspace(A)
    if len(ker) > 2:
        raise ValueError("circuit enumeration implemented for corank <= 2 only")
    cands = []
    if len(ker) == 1:
        cands.append(ker[0])
    elif len(ker) == 2:
        k1, k2 = ker
        for j in range(n):
            if k1[j] or k2[j]:
                cands.append([k2[j] * a - k1[j] * b for a, b in zip(k1, k2)])
    supports = {}
    for vec in cands:
        vec = linalg.primitive(vec)
        supp = frozenset(i for i, x in enumerate(vec) if x)
        if supp:
            supports[supp] = vec
    out = []
    for supp, vec in supports.items():
        if any(o < supp for o in supports):
            continue
        plus = frozenset(i for i in supp if vec[i] > 0)
        minus = frozenset(i for i in supp if vec[i] < 0)
        out += [(plus, minus), (minus, plus)]
    return sorted(out, key=lambda c: (sorted(c[0]), sorted(c[1])))


def flips(t: Triangulation, circs) -> list[Triangulation]:
    """All triangulations one bistellar flip away from ``t``."""
    cells = {frozenset(s) for s in t.simplices}
    out = []
    for zp, zm in circs:
        z = zp | zm
        links = []
        for i in sorted(zp):
            face = z - {i}
            link = frozenset(c - face for c in cells if face <= c)
            if not link:
                break
            links.append(link)
        else:
            if all(link == links[0] for link in links):
                rest = links[0]
                remove = {rho | (z - {i}) for i in zp for rho in rest}
                add = {rho | (z - {j}) for j in zm for rho in rest}
                out.append(Triangulation(t.points, (cells - remove) | add))
    return out


def enumerate_triangulations(points: Sequence[Sequence[int]], *, time_budget: Optional[float] = None) -> list[Triangulation]:
    """All triangulations of a configuration of at most ``d + 3`` points, by flips."""
    pts = [tuple(p) for p in points]
    d = len(pts[0])
    if len(pts) > d + 3:
        raise ValueError(f"{len(pts)} points in dimension {d}: flip enumeration needs at most d + 3")
    start = placing_triangulation(pts)
    circs = circuits(pts) if len(pts) > d + 1 else []
    seen = {start}
    order = [start]
    queue = deque([start])
    t0 = time.monotonic()
    while queue:
        if time_budget is not None and time.monotonic() - t0 > time_budget:
            raise BudgetExceeded("triangulation enumeration exceeded its time budget")
        t = queue.popleft()
        for nxt in flips(t, circs):
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    return sorted(order, key=lambda t: t.sorted_simplices())


# ---------------------------------------------------------------------------
# regularity and flagness


def regularity_heights(t: Triangulation) -> Optional[list[Fraction]]:
    """Heights inducing ``t``, or None if ``t`` is not regular.

    Maximizes a common slack ``s <= 1`` in the local folding conditions; the
    triangulation is regular iff the optimum is positive.
    """
    n = len(t.points)
    rows, rhs = [], []

    def above(x_idx, s, lam):
        # w[x] - sum lam_j w[s_j] >= slack
        row = [Fraction(0)] * (n + 1)
        row[x_idx] -= 1
        for j, v in enumerate(s):
            row[v] += lam[j]
        row[n] = Fraction(1)
        rows.append(row)
        rhs.append(0)

    for r, owners in sorted(t.ridges.items()):
        if len(owners) == 2:
            (s1, _), (s2, b) = owners
            above(b, s1, t.barycentric(s1, t.points[b]))
    for u in range(n):
        if u in t.used_points:
            continue
        for s in sorted(t.simplices):
            lam = t.barycentric(s, t.points[u])
            if all(x >= 0 for x in lam):
                above(u, s, lam)
                break
    if not rows:
        return [Fraction(0)] * n
    rows.append([0] * n + [1])
    rhs.append(1)
    out = linalg.lp_solve(linalg.LpProblem(rows, rhs, [0] * n + [1], maximize=True))
    if out.status == "optimal" and out.value > 0:
        return out.x[:n]
    return None


def is_regular(t: Triangulation) -> bool:
    return regularity_heights(t) is not None


def flag_violation(t: Triangulation) -> Optional[tuple[int, ...]]:
    """A clique of the 1-skeleton that is not a face, or None if ``t`` is flag."""
    masks = [sum(1 << i for i in s) for s in t.simplices]

    def is_face(m):
        return any(m & f == m for f in masks)

    verts = sorted(t.used_points)
    adj = {v: set() for v in verts}
    for s in t.simplices:
        for a, b in combinations(s, 2):
            adj[a].add(b)
            adj[b].add(a)
    # grow cliques in increasing vertex order; only faces are extended
    stack = [((a, b), (1 << a) | (1 << b)) for a in verts for b in sorted(adj[a]) if b > a]
    while stack:
        clique, mask = stack.pop()
        common = set.intersection(*(adj[v] for v in clique))
        for v in sorted(common):
            if v <= clique[-1]:
                continue
            m = mask | (1 << v)
            if not is_face(m):
                return clique + (v,)
            stack.append((clique + (v,), m))
    return None


def is_flag(t: Triangulation) -> bool:
    return flag_violation(t) is None


@dataclass
class QuadraticVerdict:
    exists: Optional[bool]
    witness: Optional[Triangulation] = None
    table: list[dict] = field(default_factory=list)
    reason: str = ""


def triangulation_table(triangulations: Sequence[Triangulation]) -> list[dict]:
    return [
        {
            "simplices": [list(s) for s in t.sorted_simplices()],
            "regular": is_regular(t),
            "unimodular": t.is_unimodular,
            "flag": is_flag(t),
        }
        for t in triangulations
    ]


def exists_quadratic_triangulation(p: Polytope, *, time_budget: Optional[float] = None) -> QuadraticVerdict:
    """Search all triangulations on the lattice points of ``p`` for a regular unimodular flag one."""
    q, pts = point_config(p)
    d = q.ambient_dim
    if d == 0:
        return QuadraticVerdict(True, Triangulation(pts, [(0,)]))
    if len(pts) > d + 3:
        return QuadraticVerdict(None, reason=f"{len(pts)} lattice points exceed d + 3 = {d + 3}")
    try:
        ts = enumerate_triangulations(pts, time_budget=time_budget)
    except BudgetExceeded as e:
        return QuadraticVerdict(None, reason=str(e))
    table = triangulation_table(ts)
    for t, row in zip(ts, table):
        if row["regular"] and row["unimodular"] and row["flag"]:
            return QuadraticVerdict(True, t, table)
    return QuadraticVerdict(False, None, table)
