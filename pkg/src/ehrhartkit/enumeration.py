"""Lattice points of dilates ``kP``.

Points are found by fixing coordinates left to right.  The feasible range of
coordinate ``i`` given a fixed prefix comes from the facets of the projection
of ``P`` onto the first ``i + 1`` coordinates (the "tower").  Projections
commute with dilation, so one tower serves every ``k``.  The default kernel is
vectorized with numpy int64 after an explicit overflow bound; otherwise (or on
request) a pure-Python walk with arbitrary-precision integers is used.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from math import ceil, floor
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from . import linalg
from .polytope import Polytope

log = logging.getLogger(__name__)

_INT64_SAFE = 2**62
BATCH = 1 << 17
DEFAULT_FACET_BUDGET = 50_000


class BudgetExceeded(RuntimeError):
    pass


class PointSet:
    """Finite set of lattice points of one dimension with fast membership.

    Points are packed into int64 keys over their bounding box whenever the box
    fits; larger boxes fall back to a set of Python tuples.
    """

    def __init__(self, points, dim: Optional[int] = None):
        if isinstance(points, np.ndarray):
            arr = points.reshape(len(points), -1) if points.size else points.reshape(0, dim or 0)
            self.dim = arr.shape[1] if dim is None else dim
            tuples = None
        else:
            tuples = {tuple(int(x) for x in p) for p in points}
            if dim is None:
                if not tuples:
                    raise ValueError("dimension of an empty point set must be given")
                dim = len(next(iter(tuples)))
            self.dim = dim
            arr = None
        if tuples is not None and any(len(p) != self.dim for p in tuples):
            raise ValueError("points of mixed dimension")
        self._tuples = None
        self._keys = None
        if tuples is not None:
            if not tuples:
                arr = np.zeros((0, self.dim), dtype=np.int64)
            elif all(abs(x) < _INT64_SAFE for p in tuples for x in p):
                arr = np.array(sorted(tuples), dtype=np.int64).reshape(len(tuples), self.dim)
            else:
                self._tuples = frozenset(tuples)
                return
        self._pack(arr)

    def _pack(self, arr: np.ndarray):
        if len(arr) == 0:
            self._lo = np.zeros(self.dim, dtype=np.int64)
            self._width = np.ones(self.dim, dtype=np.int64)
        else:
            self._lo = arr.min(axis=0)
            self._width = arr.max(axis=0) - self._lo + 1
        total = 1
        for w in self._width.tolist():
            total *= w
        if total >= _INT64_SAFE:
            self._tuples = frozenset(map(tuple, arr.tolist()))
            return
        radix = np.ones(self.dim, dtype=np.int64)
        for i in range(self.dim - 2, -1, -1):
            radix[i] = radix[i + 1] * self._width[i + 1]
        self._radix = radix
        keys = (arr - self._lo) @ radix if self.dim else np.zeros(len(arr), dtype=np.int64)
        keys = np.unique(keys)
        self._keys = keys

    def __len__(self):
        return len(self._tuples) if self._tuples is not None else len(self._keys)

    def contains_many(self, arr: np.ndarray) -> np.ndarray:
        arr = np.asarray(arr, dtype=np.int64).reshape(-1, self.dim)
        if self._tuples is not None:
            return np.array([tuple(p) in self._tuples for p in arr.tolist()], dtype=bool)
        rel = arr - self._lo
        inbox = np.all((rel >= 0) & (rel < self._width), axis=1)
        out = np.zeros(len(arr), dtype=bool)
        if not inbox.any() or len(self._keys) == 0:
            return out
        keys = rel[inbox] @ self._radix if self.dim else np.zeros(int(inbox.sum()), dtype=np.int64)
        pos = np.searchsorted(self._keys, keys)
        pos[pos == len(self._keys)] = 0
        out[inbox] = self._keys[pos] == keys
        return out

    def __contains__(self, p) -> bool:
        p = tuple(int(x) for x in p)
        if len(p) != self.dim:
            return False
        if self._tuples is not None:
            return p in self._tuples
        if any(abs(x) >= _INT64_SAFE for x in p):
            return False
        return bool(self.contains_many(np.array([p], dtype=np.int64))[0])

    def to_array(self) -> np.ndarray:
        """Points as an ``(N, dim)`` array in lexicographic order."""
        if self._tuples is not None:
            return np.array(sorted(self._tuples), dtype=object).reshape(len(self._tuples), self.dim)
        if self.dim == 0:
            return np.zeros((len(self._keys), 0), dtype=np.int64)
        digits = (self._keys[:, None] // self._radix) % self._width
        return digits + self._lo

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        if self._tuples is not None:
            yield from sorted(self._tuples)
        else:
            for row in self.to_array().tolist():
                yield tuple(row)

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.dim == other.dim and len(self) == len(other) and set(self) == set(other)

    def __repr__(self):
        return f"PointSet(dim={self.dim}, size={len(self)})"


# ---------------------------------------------------------------------------
# projection tower


class _Tower:
    """Integer systems ``last * x_i + pre . x_{<i} <= k * rhs`` for each level ``i``."""

    def __init__(self, p: Polytope, facet_budget: int = DEFAULT_FACET_BUDGET):
        if not p.is_full_dimensional:
            raise ValueError("enumeration needs a lattice-normalized full-dimensional polytope")
        self.d = p.ambient_dim
        self.levels = []
        verts = p.vertices
        for i in range(1, self.d + 1):
            proj = Polytope({v[:i] for v in verts}) if i < self.d else p
            facets = [f for f in proj.facets if f.normal[i - 1] != 0]
            if len(proj.facets) > facet_budget:
                raise BudgetExceeded(f"projection to {i} coordinates has {len(proj.facets)} facets")
            last = [f.normal[i - 1] for f in facets]
            pre = [list(f.normal[: i - 1]) for f in facets]
            rhs = [f.offset for f in facets]
            self.levels.append((last, pre, rhs))
        self.coord_bound = [max(abs(v[i]) for v in verts) for i in range(self.d)]

    def fits_int64(self, k: int) -> bool:
        big = k * max(self.coord_bound + [1]) + 1
        for last, pre, rhs in self.levels:
            for l, row, r in zip(last, pre, rhs):
                if (abs(l) + sum(abs(a) for a in row)) * big + k * abs(r) + 1 >= _INT64_SAFE:
                    return False
        return True

    @lru_cache(maxsize=None)
    def arrays(self, i: int):
        last, pre, rhs = self.levels[i]
        return (
            np.array(last, dtype=np.int64),
            np.array(pre, dtype=np.int64).reshape(len(last), i),
            np.array(rhs, dtype=np.int64),
        )


@lru_cache(maxsize=64)
def _tower(p: Polytope) -> _Tower:
    return _Tower(p)


def _bounds_np(tower: _Tower, i: int, prefix: np.ndarray, k: int, shrink: int):
    last, pre, rhs = tower.arrays(i)
    r = k * rhs - shrink - prefix @ pre.T  # (N, m)
    pos = last > 0
    hi = np.floor_divide(r[:, pos], last[pos]).min(axis=1)
    lo = (-np.floor_divide(-r[:, ~pos], last[~pos])).max(axis=1)
    return lo, hi


def _expand(prefix: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    counts = np.maximum(hi - lo + 1, 0)
    total = int(counts.sum())
    parent = np.repeat(np.arange(len(prefix)), counts)
    starts = np.cumsum(counts) - counts
    offs = np.arange(total, dtype=np.int64) - np.repeat(starts, counts)
    col = (lo[parent] + offs)[:, None]
    return np.hstack([prefix[parent], col])


def _walk_np(tower, prefix, level, k, shrink, count_only):
    """Yield point arrays (or counts) below ``prefix`` in lexicographic order."""
    lo, hi = _bounds_np(tower, level, prefix, k, shrink)
    if level == tower.d - 1:
        if count_only:
            yield int(np.maximum(hi - lo + 1, 0).sum())
        else:
            yield _expand(prefix, lo, hi)
        return
    # split parents so that each child batch stays bounded
    counts = np.maximum(hi - lo + 1, 0)
    csum = np.cumsum(counts)
    start = 0
    while start < len(prefix):
        base = csum[start - 1] if start else 0
        stop = int(np.searchsorted(csum, base + BATCH, side="right"))
        stop = max(stop, start + 1)
        child = _expand(prefix[start:stop], lo[start:stop], hi[start:stop])
        if len(child):
            yield from _walk_np(tower, child, level + 1, k, shrink, count_only)
        start = stop


def _bounds_py(tower, i, prefix, k, shrink):
    last, pre, rhs = tower.levels[i]
    lo, hi = None, None
    for l, row, r in zip(last, pre, rhs):
        val = k * r - shrink - sum(a * b for a, b in zip(row, prefix))
        if l > 0:
            b = val // l
            hi = b if hi is None or b < hi else hi
        else:
            b = -((-val) // l)
            lo = b if lo is None or b > lo else lo
    return lo, hi


def _walk_py(tower, prefix, level, k, shrink):
    lo, hi = _bounds_py(tower, level, prefix, k, shrink)
    for x in range(lo, hi + 1):
        pt = prefix + (x,)
        if level == tower.d - 1:
            yield pt
        else:
            yield from _walk_py(tower, pt, level + 1, k, shrink)


def _count_py(tower, prefix, level, k, shrink) -> int:
    lo, hi = _bounds_py(tower, level, prefix, k, shrink)
    if level == tower.d - 1:
        return max(hi - lo + 1, 0)
    return sum(_count_py(tower, prefix + (x,), level + 1, k, shrink) for x in range(lo, hi + 1))


def _walk_lp(p: Polytope, prefix, k, shrink):
    """Reference walk: coordinate ranges by exact LP on the full facet system."""
    d = p.ambient_dim
    i = len(prefix)
    A = [list(f.normal) for f in p.facets]
    b = [k * f.offset - shrink for f in p.facets]
    for j, v in enumerate(prefix):
        e = [int(t == j) for t in range(d)]
        A += [e, [-x for x in e]]
        b += [v, -v]
    c = [int(t == i) for t in range(d)]
    top = linalg.lp_solve(linalg.LpProblem(A, b, c, maximize=True))
    if top.status != "optimal":
        return
    bot = linalg.lp_solve(linalg.LpProblem(A, b, c, maximize=False))
    for x in range(ceil(bot.value), floor(top.value) + 1):
        pt = prefix + (x,)
        if i == d - 1:
            yield pt
        else:
            yield from _walk_lp(p, pt, k, shrink)


def _check(p: Polytope, k: int):
    if not isinstance(k, int) or k <= 0:
        raise ValueError(f"dilation factor must be a positive integer, got {k!r}")
    if not p.is_full_dimensional:
        raise ValueError("enumeration needs a lattice-normalized full-dimensional polytope")


def iter_point_chunks(p: Polytope, k: int, *, interior: bool = False, strategy: str = "tower",
                      workers: int = 1) -> Iterator[np.ndarray]:
    """Lattice points of ``kP`` (or its interior) as arrays, lexicographically ordered."""
    _check(p, k)
    shrink = 1 if interior else 0
    d = p.ambient_dim
    if d == 0:
        if not interior:
            yield np.zeros((1, 0), dtype=np.int64)
        return
    if strategy == "lp":
        pts = list(_walk_lp(p, (), k, shrink))
        if pts:
            yield np.array(pts, dtype=object)
        return
    if strategy != "tower":
        raise ValueError(f"unknown strategy {strategy!r}")
    tower = _tower(p)
    if not tower.fits_int64(k):
        pts = list(_walk_py(tower, (), 0, k, shrink))
        if pts:
            yield np.array(pts, dtype=object)
        return
    for chunk in _first_level(tower, k, shrink, False, workers):
        yield chunk


def _first_level(tower, k, shrink, count_only, workers):
    lo, hi = _bounds_np(tower, 0, np.zeros((1, 0), dtype=np.int64), k, shrink)
    roots = [np.array([[x]], dtype=np.int64) for x in range(int(lo[0]), int(hi[0]) + 1)]
    if tower.d == 1:
        if count_only:
            yield len(roots)
        elif roots:
            yield np.vstack(roots)
        return

    def run(root):
        return list(_walk_np(tower, root, 1, k, shrink, count_only))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for parts in pool.map(run, roots):
                yield from parts
    else:
        for root in roots:
            yield from _walk_np(tower, root, 1, k, shrink, count_only)


def enumerate_points(p: Polytope, k: int = 1, *, interior: bool = False, strategy: str = "tower",
                     workers: int = 1, max_points: Optional[int] = None) -> PointSet:
    """``kP ∩ Z^d`` as a ``PointSet``."""
    chunks = []
    total = 0
    for c in iter_point_chunks(p, k, interior=interior, strategy=strategy, workers=workers):
        total += len(c)
        if max_points is not None and total > max_points:
            raise BudgetExceeded(f"more than {max_points} points in {k}P")
        chunks.append(c)
    d = p.ambient_dim
    if not chunks:
        return PointSet(np.zeros((0, d), dtype=np.int64), dim=d)
    if any(c.dtype == object for c in chunks):
        return PointSet([tuple(r) for c in chunks for r in c.tolist()], dim=d)
    return PointSet(np.vstack(chunks), dim=d)


def count_points(p: Polytope, k: int = 1, *, interior: bool = False, strategy: str = "tower",
                 workers: int = 1) -> int:
    """``|kP ∩ Z^d|`` without materializing the points."""
    _check(p, k)
    d = p.ambient_dim
    if d == 0:
        return 0 if interior else 1
    if strategy == "tower":
        tower = _tower(p)
        if tower.fits_int64(k):
            return sum(_first_level(tower, k, 1 if interior else 0, True, workers))
        return _count_py(tower, (), 0, k, 1 if interior else 0)
    return sum(len(c) for c in iter_point_chunks(p, k, interior=interior, strategy=strategy))


def minkowski_covers(a, b: PointSet, target) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Whether every point of ``target`` is ``x + y`` with ``x`` in ``a``, ``y`` in ``b``.

    ``a`` is small and iterated; ``b`` is probed by membership.  Returns
    ``(True, None)`` or ``(False, first uncovered target point)``.
    """
    a_pts = np.array(list(a), dtype=np.int64).reshape(-1, b.dim)
    if isinstance(target, PointSet):
        if target.dim != b.dim:
            raise ValueError("dimension mismatch")
        chunks: Iterable[np.ndarray] = [target.to_array()]
    else:
        chunks = target
    if a_pts.shape[1] != b.dim:
        raise ValueError("dimension mismatch")
    for chunk in chunks:
        chunk = np.asarray(chunk).reshape(-1, b.dim)
        if chunk.dtype == object:
            left = [tuple(z) for z in chunk.tolist()
                    if not any(tuple(zi - xi for zi, xi in zip(z, x)) in b for x in a_pts.tolist())]
            if left:
                return False, left[0]
            continue
        left = chunk
        for x in a_pts:
            if not len(left):
                break
            left = left[~b.contains_many(left - x)]
        if len(left):
            return False, tuple(int(v) for v in left[0])
    return True, None


def ehrhart_counts(p: Polytope, upto: int, *, workers: int = 1) -> list[int]:
    """``[E(0), E(1), ..., E(upto)]`` for a full-dimensional ``p``."""
    return [1] + [count_points(p, k, workers=workers) for k in range(1, upto + 1)]


def interior_counts(p: Polytope, upto: int, *, workers: int = 1) -> list[int]:
    return [count_points(p, k, interior=True, workers=workers) for k in range(1, upto + 1)]
