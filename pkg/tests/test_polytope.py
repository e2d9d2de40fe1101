import json
import random

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from conftest import random_map, random_polytope
from ehrhartkit import data
from ehrhartkit.polytope import (
    AffineUnimodularMap,
    Polytope,
    affine_dimension,
    facet_enumeration,
    in_convex_hull,
    lattice_normalize,
    vertex_reduce,
)


def qhull_facets(vertices):
    hull = ConvexHull(np.array(vertices, dtype=float))
    return {tuple(np.round(eq / np.abs(eq[:-1]).max(), 9)) for eq in hull.equations}


def test_vertex_reduce_drops_interior_and_duplicates():
    pts = [(0, 0), (2, 0), (0, 2), (2, 2), (1, 1), (1, 0), (2, 2)]
    assert vertex_reduce(pts) == [(0, 0), (0, 2), (2, 0), (2, 2)]


@pytest.mark.parametrize("d", [2, 3, 4])
def test_vertices_and_facets_match_qhull(d):
    rng = random.Random(d)
    for _ in range(8):
        p = random_polytope(rng, d, n_points=d + 4)
        hull = ConvexHull(np.array(p.points, dtype=float))
        assert set(p.vertices) == {tuple(p.points[i]) for i in hull.vertices}
        assert len(p.facets) == len(qhull_facets(p.vertices))
        for f in p.facets:
            assert all(f.slack(v) >= 0 for v in p.vertices)
            tight = [v for v in p.vertices if f.slack(v) == 0]
            assert affine_dimension(tight) == d - 1


def test_cube_and_cross_polytope_facets():
    cube = Polytope([(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)])
    assert len(cube.facets) == 6
    cross = Polytope([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
    assert len(cross.facets) == 8
    assert len(facet_enumeration(data.theorem1())) == 20


def test_facet_normals_are_primitive():
    from math import gcd
    from functools import reduce

    for f in data.theorem1().facets:
        assert reduce(gcd, f.normal) == 1


def test_in_convex_hull():
    tri = [(0, 0), (2, 0), (0, 2)]
    assert in_convex_hull((1, 1), tri)
    assert not in_convex_hull((2, 1), tri)


def test_dimension_and_normalization_of_lower_dimensional_polytope():
    # a lattice triangle inside the plane x + y + z = 1 in Z^3
    p = Polytope([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert p.dim == 2 and not p.is_full_dimensional
    q, emb = lattice_normalize(p)
    assert q.ambient_dim == 2 and q.dim == 2
    assert sorted(emb.to_ambient(y) for y in q.vertices) == sorted(p.vertices)
    for v in p.vertices:
        assert emb.to_ambient(emb.to_lattice(v)) == v


def test_normalization_respects_sublattice():
    # segment from 0 to (2, 4): affine lattice is spanned by (1, 2), so length 2
    p = Polytope([(0, 0), (2, 4)])
    q, _ = p.normalized
    assert sorted(q.vertices) in ([(0,), (2,)], [(-2,), (0,)])
    assert len(p.lattice_points()) == 3


def test_point_polytope():
    p = Polytope([(3, 4)])
    assert p.dim == 0
    q, _ = p.normalized
    assert q.ambient_dim == 0


def test_affine_unimodular_map():
    m = AffineUnimodularMap(((1, 1), (0, 1)), (2, -1))
    assert m((1, 1)) == (4, 0)
    assert m.inverse()(m((3, -7))) == (3, -7)
    with pytest.raises(ValueError):
        AffineUnimodularMap(((2, 0), (0, 1)), (0, 0))


def test_random_maps_preserve_vertex_structure(rng):
    for _ in range(10):
        p = random_polytope(rng, 3)
        m = random_map(rng, 3)
        q = m.apply(p)
        assert set(q.vertices) == {m(v) for v in p.vertices}
        assert len(q.facets) == len(p.facets)


def test_json_roundtrip_and_validation():
    p = data.theorem1()
    assert Polytope.from_json(json.dumps(p.to_json())) == p
    with pytest.raises(ValueError):
        Polytope.from_json({"ambient_dim": 2, "points": [[0, 0, 0]]})
    with pytest.raises(ValueError):
        Polytope.from_json({"ambient_dim": 2, "points": [[0, 0.5]]})
    with pytest.raises(KeyError):
        Polytope.from_json({"points": [[0, 0]]})


def test_equality_is_by_vertex_set():
    a = Polytope([(0, 0), (1, 0), (0, 1), (1, 1)])
    b = Polytope([(1, 1), (0, 0), (1, 0), (0, 1), (1, 0)])
    assert a == b and hash(a) == hash(b)


def test_facets_of_lower_dimensional_polytope_raise():
    with pytest.raises(Exception):
        Polytope([(0, 0), (1, 1)]).facets
