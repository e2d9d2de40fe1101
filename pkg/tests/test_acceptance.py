"""End-to-end acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL line; the terminal summary repeats them.
"""

import json
import random
import time
from math import comb

import pytest

from conftest import random_map, random_polytope
from ehrhartkit import data
from ehrhartkit.cli import main
from ehrhartkit.ehrhart import ehrhart_from_hstar, hstar, is_log_concave, is_unimodal, log_concavity_violations
from ehrhartkit.enumeration import count_points, enumerate_points
from ehrhartkit.idp import is_idp
from ehrhartkit.polytope import Polytope
from ehrhartkit.triangulation import (
    all_spanning_simplices_unimodular,
    exists_quadratic_triangulation,
    hstar_halfopen,
    placing_triangulation,
    point_config,
)
from ehrhartkit.verify import verify_proposition, verify_theorem1, verify_theorem2


def _statuses(claims):
    return {c.name: c.status for c in claims}


def test_criterion_1_seven_dimensional_example(criterion):
    with criterion(1, "verify theorem1: dim 7, 9 vertices, h* by both methods, predicates, Ehrhart positivity, IDP k=1..5"):
        t0 = time.perf_counter()
        claims = verify_theorem1()
        assert len(claims) == 5
        assert all(c.status == "PASS" for c in claims), _statuses(claims)
        p = data.theorem1()
        assert p.dim == 7 and len(p.vertices) == 9
        hv = hstar(p)
        h = tuple(hv)
        assert h == (1, 2, 3, 4, 5, 3, 2, 1)
        assert tuple(hstar_halfopen(p)) == h
        assert not is_log_concave(h) and is_unimodal(h)
        assert log_concavity_violations(h) == [5] and h[4] * h[6] == 10 > h[5] ** 2 == 9
        coeffs = ehrhart_from_hstar(hv).coefficients
        assert len(coeffs) == 8 and all(c > 0 for c in coeffs)
        v = is_idp(p)
        assert v.holds is True and v.checked_k == [1, 2, 3, 4, 5]
        assert time.perf_counter() - t0 < 60


@pytest.mark.slow
def test_criterion_2_twelve_dimensional_example(criterion):
    with criterion(2, "verify theorem2: dim 12, 15 vertices = lattice points, h*, 13 positive coefficients, IDP k=1..10, 105 unimodular spanning subsets"):
        t0 = time.perf_counter()
        claims = verify_theorem2()
        assert len(claims) == 7
        assert all(c.status == "PASS" for c in claims), _statuses(claims)
        p = data.theorem2()
        assert p.dim == 12 and len(p.vertices) == 15
        assert len(enumerate_points(p, 1)) == 15
        hv = hstar(p)
        assert tuple(hv) == (1, 2, 3, 4, 5, 3, 2, 1, 0, 0, 0, 0, 0)
        coeffs = ehrhart_from_hstar(hv).coefficients
        assert len(coeffs) == 13 and all(c > 0 for c in coeffs)
        v = is_idp(p)
        assert v.holds is True and v.checked_k == list(range(1, 11))
        ok, bad, total = all_spanning_simplices_unimodular(p)
        assert ok and total == 105 and not bad
        assert time.perf_counter() - t0 < 30 * 60


def test_criterion_3_arc_polytope_equivalence(criterion):
    with criterion(3, "verify proposition: arc polytope normalizes to dim 12 with 15 vertices and is unimodularly equivalent"):
        t0 = time.perf_counter()
        claims = verify_proposition()
        assert len(claims) == 1 and claims[0].status == "PASS", claims[0].detail
        assert time.perf_counter() - t0 < 10 * 60


@pytest.mark.slow
def test_criterion_4_no_quadratic_triangulation(criterion):
    with criterion(4, "exhaustive flip enumeration: no regular unimodular flag triangulation; all triangulations unimodular"):
        t0 = time.perf_counter()
        v = exists_quadratic_triangulation(data.theorem2(), time_budget=3600)
        assert v.exists is False, v.reason
        assert v.table and all(row["unimodular"] for row in v.table)
        assert not any(row["regular"] and row["unimodular"] and row["flag"] for row in v.table)
        assert time.perf_counter() - t0 < 60 * 60


def _oracle_identities(p: Polytope):
    q, pts = point_config(p)
    d = q.ambient_dim
    h = hstar(q)
    assert hstar_halfopen(q) == h
    assert h[0] == 1
    assert h[1] == len(pts) - (d + 1)
    assert sum(h) == sum(placing_triangulation(pts).volumes.values())
    assert h[d] == count_points(q, 1, interior=True)


@pytest.mark.slow
def test_criterion_5_oracle_equivalence(criterion):
    with criterion(5, "counting = half-open and h* identities on bundled + 24 random polytopes (dim <= 5)"):
        t0 = time.perf_counter()
        _oracle_identities(data.theorem1())
        _oracle_identities(data.theorem2())
        rng = random.Random(2024)
        for i in range(24):
            d = 2 + i % 4
            _oracle_identities(random_polytope(rng, d, box=2 if d < 5 else 1))
        assert time.perf_counter() - t0 < 5 * 60


def test_criterion_6_closed_forms(criterion):
    with criterion(6, "standard simplex h* for d <= 8, cube E(k) = (k+1)^d for d <= 6, unit square h* = (1,1,0)"):
        for d in range(1, 9):
            s = Polytope([[0] * d] + [[int(i == j) for j in range(d)] for i in range(d)])
            assert list(hstar(s)) == [1] + [0] * d
        for d in range(1, 7):
            cube = Polytope([[(m >> i) & 1 for i in range(d)] for m in range(2 ** d)])
            poly = ehrhart_from_hstar(hstar(cube))
            for k in range(0, d + 3):
                assert poly(k) == (k + 1) ** d
            assert count_points(cube, d + 1) == (d + 2) ** d
            assert poly.coefficients == tuple(comb(d, j) for j in range(d + 1))
        assert list(hstar(Polytope([(0, 0), (1, 0), (0, 1), (1, 1)]))) == [1, 1, 0]


@pytest.mark.slow
def test_criterion_7_invariance(criterion):
    with criterion(7, "h*, IDP verdict and counts for k <= 3 unchanged under 10 x 10 random unimodular maps"):
        t0 = time.perf_counter()
        rng = random.Random(77)
        verdicts = set()
        for i in range(10):
            d = 3 + i % 2
            p = random_polytope(rng, d, box=1 + (d == 3))
            h, v = hstar(p), is_idp(p).holds
            counts = [count_points(p, k) for k in (1, 2, 3)]
            verdicts.add(v)
            for _ in range(10):
                q = random_map(rng, d).apply(p)
                assert hstar(q) == h
                assert is_idp(q).holds == v
                assert [count_points(q, k) for k in (1, 2, 3)] == counts
        assert verdicts == {True, False}
        assert time.perf_counter() - t0 < 5 * 60


def test_criterion_8_search_determinism(criterion, tmp_path, capsys):
    with criterion(8, "seeded search at theorem1 with 0 steps: score 1/9, IDP verified; same seed gives identical logs"):
        t0 = time.perf_counter()
        assert main(["search", "--seed", "17", "--steps", "0", "--start", "theorem1", "--out", str(tmp_path / "z")]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["best"]["score"] == "1/9" and out["best"]["idp"] == "verified"
        for name in ("a", "b"):
            assert main(["search", "--seed", "17", "--dim", "3", "--steps", "80", "--out", str(tmp_path / name)]) == 0
        capsys.readouterr()
        for f in ("candidates.jsonl", "runlog.jsonl"):
            a = (tmp_path / "a" / f).read_bytes()
            assert a == (tmp_path / "b" / f).read_bytes()
        assert time.perf_counter() - t0 < 2 * 60
