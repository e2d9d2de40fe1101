"""Integer decomposition property, decided level by level.

For a lattice ``d``-polytope and every ``k >= d - 1`` one has
``(k+1)P ∩ Z^d = (P ∩ Z^d) + (kP ∩ Z^d)`` (Bruns and Gubeladze, *Polytopes,
Rings, and K-Theory*, Springer 2009, Theorem 2.52).  So IDP holds as soon as
the levels ``k = 1, ..., d - 2`` are covered.  This module relies on that
result for its default bound; pass ``k_max`` to check further levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .enumeration import PointSet, enumerate_points, iter_point_chunks, minkowski_covers
from .polytope import Polytope


@dataclass
class IdpVerdict:
    holds: Optional[bool]  # None: undecided within the point budget
    bound: int
    checked_k: list[int] = field(default_factory=list)
    failure_witness: Optional[tuple[int, tuple[int, ...]]] = None
    undecided_at: Optional[int] = None

    def to_json(self) -> dict:
        out = {"idp": self.holds, "bound": self.bound, "checked_k": self.checked_k}
        if self.failure_witness is not None:
            k, z = self.failure_witness
            out["witness"] = {"k": k, "point": list(z)}
        if self.undecided_at is not None:
            out["undecided_at"] = self.undecided_at
        return out


def default_bound(d: int) -> int:
    return max(d - 2, 0)


def is_idp(p: Polytope, k_max: Optional[int] = None, *, max_points: Optional[int] = None,
           workers: int = 1) -> IdpVerdict:
    """Check ``(k+1)P = P + kP`` on lattice points for ``k = 1..K``.

    ``K`` defaults to ``d - 2``.  A failure at level ``k`` is reported as the
    witness ``(k, z)`` with ``z`` a lattice point of ``(k+1)P`` that is not a
    lattice point of ``P`` plus one of ``kP``.
    """
    q, _ = p.normalized
    d = q.ambient_dim
    bound = default_bound(d) if k_max is None else k_max
    verdict = IdpVerdict(holds=True, bound=bound)
    if bound < 1 or d <= 2:
        return verdict
    base = enumerate_points(q, 1)
    base_pts = base.to_array()
    level = base
    for k in range(1, bound + 1):
        keep_next = k < bound
        seen = 0
        chunks = []
        for chunk in iter_point_chunks(q, k + 1, workers=workers):
            seen += len(chunk)
            if max_points is not None and seen > max_points:
                verdict.holds = None
                verdict.undecided_at = k
                return verdict
            ok, witness = minkowski_covers(base_pts, level, [chunk])
            if not ok:
                verdict.holds = False
                verdict.failure_witness = (k, witness)
                return verdict
            if keep_next:
                chunks.append(chunk)
        verdict.checked_k.append(k)
        if keep_next:
            level = _merge(chunks, d)
    return verdict


def _merge(chunks, d) -> PointSet:
    if any(c.dtype == object for c in chunks):
        return PointSet([tuple(r) for c in chunks for r in c.tolist()], dim=d)
    return PointSet(np.vstack(chunks) if chunks else np.zeros((0, d), dtype=np.int64), dim=d)


def verify_witness(p: Polytope, k: int, z) -> bool:
    """Independent re-check that ``z`` lies in ``(k+1)P`` and has no decomposition."""
    q, _ = p.normalized
    if not all(f.slack(z) + k * f.offset >= 0 for f in q.facets):
        return False
    level = set(enumerate_points(q, k))
    return all(tuple(a - b for a, b in zip(z, x)) not in level for x in enumerate_points(q, 1))

