"""Claim-by-claim verification of the bundled examples."""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from . import data
from .digraph import arc_polytope
from .ehrhart import (
    ehrhart_from_hstar,
    hstar,
    is_log_concave,
    is_unimodal,
    log_concavity_violations,
)
from .enumeration import enumerate_points
from .equivalence import find_equivalence
from .idp import is_idp
from .triangulation import all_spanning_simplices_unimodular, exists_quadratic_triangulation, hstar_halfopen

PASS, FAIL, UNDECIDED = "PASS", "FAIL", "UNDECIDED"


@dataclass
class Claim:
    name: str
    status: str
    detail: str
    seconds: float

    def to_json(self) -> dict:
        return {"claim": self.name, "status": self.status, "detail": self.detail}


def _check(name: str, fn: Callable[[], tuple]) -> Claim:
    t0 = time.perf_counter()
    try:
        status, detail = fn()
    except Exception as exc:  # a crash is a failed claim, not a crashed report
        status, detail = FAIL, f"{type(exc).__name__}: {exc}"
    if status is True:
        status = PASS
    elif status is False:
        status = FAIL
    return Claim(name, status, detail, time.perf_counter() - t0)


@lru_cache(maxsize=8)
def _hstar_by_counting(p, workers):
    return hstar(p, workers=workers)


def _hstar_claims(p, expected, workers):
    def run():
        by_count = _hstar_by_counting(p, workers)
        by_halfopen = hstar_halfopen(p)
        h = tuple(by_count)
        viol = log_concavity_violations(h)
        i = viol[0] if viol else None
        detail = (
            f"counting {h}, half-open {tuple(by_halfopen)}; unimodal={is_unimodal(h)}, "
            f"log-concave={is_log_concave(h)}"
        )
        if i is not None:
            detail += f" (violated at i={i}: {h[i-1]}*{h[i+1]} = {h[i-1]*h[i+1]} > {h[i]**2})"
        ok = (h == expected and tuple(by_halfopen) == expected and is_unimodal(h)
              and not is_log_concave(h) and viol == [5])
        return ok, detail

    return run


def _ehrhart_positive(p, workers):
    def run():
        poly = ehrhart_from_hstar(_hstar_by_counting(p, workers))
        coeffs = poly.coefficients
        return all(c > 0 for c in coeffs), f"{len(coeffs)} coefficients, min {min(coeffs)}"

    return run


def _idp(p, k_expected, workers):
    def run():
        v = is_idp(p, workers=workers)
        detail = f"checked k = {v.checked_k} (default bound d - 2 = {v.bound})"
        if v.holds is None:
            return UNDECIDED, detail
        if v.failure_witness:
            detail += f"; witness {v.failure_witness}"
        return v.holds is True and v.checked_k == list(range(1, k_expected + 1)), detail

    return run


def verify_theorem1(workers: int = 1) -> list[Claim]:
    p = data.theorem1()
    expected = (1, 2, 3, 4, 5, 3, 2, 1)
    return [
        _check("dimension 7", lambda: (p.dim == 7, f"dim = {p.dim}")),
        _check("9 vertices", lambda: (len(p.vertices) == 9, f"{len(p.vertices)} vertices")),
        _check("IDP", _idp(p, 5, workers)),
        _check("h* = (1,2,3,4,5,3,2,1), unimodal, not log-concave", _hstar_claims(p, expected, workers)),
        _check("Ehrhart coefficients positive", _ehrhart_positive(p, workers)),
    ]


def verify_theorem2(workers: int = 1, time_budget: float = 3600.0) -> list[Claim]:
    p = data.theorem2()
    expected = (1, 2, 3, 4, 5, 3, 2, 1, 0, 0, 0, 0, 0)

    def vertices():
        pts = list(enumerate_points(p, 1))
        zero_one = all(x in (0, 1) for v in p.vertices for x in v)
        ok = len(p.vertices) == 15 and len(pts) == 15 and zero_one
        return ok, f"{len(p.vertices)} vertices, {len(pts)} lattice points, 0/1 coordinates: {zero_one}"

    def spanning():
        ok, bad, total = all_spanning_simplices_unimodular(p)
        return ok and total == 105, f"{total} subsets of 13 lattice points, {len(bad)} with |det| > 1"

    def quadratic():
        v = exists_quadratic_triangulation(p, time_budget=time_budget)
        if v.exists is None:
            return UNDECIDED, v.reason
        flags = [(r["regular"], r["unimodular"], r["flag"]) for r in v.table]
        detail = (
            f"{len(v.table)} triangulations; regular {sum(f[0] for f in flags)}, "
            f"unimodular {sum(f[1] for f in flags)}, flag {sum(f[2] for f in flags)}"
        )
        return v.exists is False and all(f[1] for f in flags), detail

    return [
        _check("dimension 12", lambda: (p.dim == 12, f"dim = {p.dim}")),
        _check("15 vertices, 0/1 polytope", vertices),
        _check("IDP", _idp(p, 10, workers)),
        _check("h* = (1,2,3,4,5,3,2,1,0,0,0,0,0), unimodal, not log-concave", _hstar_claims(p, expected, workers)),
        _check("Ehrhart coefficients positive", _ehrhart_positive(p, workers)),
        _check("every triangulation unimodular", spanning),
        _check("no quadratic triangulation", quadratic),
    ]


def verify_proposition(workers: int = 1) -> list[Claim]:
    def run():
        arc = arc_polytope(data.figure1())
        q, _ = arc.normalized
        m, reason = find_equivalence(data.theorem2(), q)
        detail = f"arc polytope: ambient {arc.ambient_dim}, dim {q.dim}, {len(q.vertices)} vertices; {reason}"
        return q.dim == 12 and len(q.vertices) == 15 and m is not None, detail

    return [_check("arc polytope of the digraph is unimodularly equivalent to the 12-dim example", run)]


TARGETS = {
    "theorem1": verify_theorem1,
    "theorem2": verify_theorem2,
    "proposition": verify_proposition,
}


def exit_code(claims: list[Claim]) -> int:
    if any(c.status == FAIL for c in claims):
        return 1
    if any(c.status == UNDECIDED for c in claims):
        return 3
    return 0
