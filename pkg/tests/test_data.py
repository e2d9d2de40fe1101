import hashlib
import json

from ehrhartkit import data
from ehrhartkit.digraph import Digraph
from ehrhartkit.polytope import Polytope

CHECKSUMS = {
    "theorem1": "c4fcf4158270497d7458231e7cf1f0cc12d9d9241f14ef44a569c92cc8851e6b",
    "theorem2": "e7aa5b74c7026411624ef7df93900e760deac3c3f1ffb8ae41c872c571425cf5",
    "figure1": "65138108bf6d1bb3dff87920abeb9665583b3b0bf3b26cfd62e0f39e827d0132",
}


def _indicator(support, n):
    # 1-based support, as the generators are usually written
    return [int(i + 1 in support) for i in range(n)]


def test_json_checksums():
    for name, digest in CHECKSUMS.items():
        canon = json.dumps(data.load_json(name), sort_keys=True, separators=(",", ":"))
        assert hashlib.sha256(canon.encode()).hexdigest() == digest, name


def test_constants_match_json():
    assert Polytope.from_json(data.load_json("theorem1")).points == Polytope(data.THEOREM1_POINTS).points
    assert Polytope.from_json(data.load_json("theorem2")).points == Polytope(data.THEOREM2_POINTS).points
    assert Digraph.from_json(data.load_json("figure1")) == data.figure1()


def test_seven_dimensional_generators():
    expected = [_indicator({i}, 7) for i in range(1, 8)]
    expected += [[1, -1, -1, -1, -1, 0, 0], [-1, -1, 0, 0, 0, -1, -1]]
    assert sorted(map(list, data.THEOREM1_POINTS)) == sorted(expected)


def test_twelve_dimensional_generators_from_supports():
    supports = [set()] + [{i} for i in range(2, 13)] + [{1, 5, 6, 7, 8}, {1, 2, 3, 4}, {1, 9, 10, 11, 12}]
    expected = [_indicator(s, 12) for s in supports]
    assert sorted(map(list, data.THEOREM2_POINTS)) == sorted(expected)


def test_digraph_arcs():
    g = data.figure1()
    assert g.n == 14 and len(g.arcs) == 15
    # bipartite between {1..7} and {8..14}, arcs may go either way
    for u, v in g.arcs:
        assert (u <= 7) != (v <= 7)
    backwards = sorted((u, v) for u, v in g.arcs if u > 7)
    assert backwards == [(9, 2), (10, 3), (10, 4), (10, 6), (11, 5), (13, 7)]


def test_named_loaders():
    assert data.theorem1().dim == 7
    assert data.theorem2().dim == 12
    assert set(data.NAMES) == set(CHECKSUMS)
