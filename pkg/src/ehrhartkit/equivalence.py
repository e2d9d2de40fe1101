"""Deciding unimodular equivalence of full-dimensional lattice polytopes.

Cheap invariants are compared first.  The search then matches vertices so
that the vertex/facet lattice-distance matrices (``b - a.v`` with primitive
facet normals) agree up to a facet permutation, which every affine unimodular
map must preserve.  As soon as the matched vertices contain an affine basis
the candidate map is solved exactly and checked.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Optional

from . import linalg
from .enumeration import enumerate_points
from .polytope import AffineUnimodularMap, Polytope
from .triangulation import placing_triangulation


def edge_graph(p: Polytope) -> dict[int, set[int]]:
    """Adjacency between vertex indices: two vertices span an edge iff no third
    vertex lies on every facet containing both."""
    verts = p.vertices
    on = [frozenset(j for j, f in enumerate(p.facets) if f.slack(v) == 0) for v in verts]
    adj = {i: set() for i in range(len(verts))}
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            common = on[i] & on[j]
            if not any(common <= on[w] for w in range(len(verts)) if w != i and w != j):
                adj[i].add(j)
                adj[j].add(i)
    return adj


def invariants(p: Polytope) -> dict:
    verts = p.vertices
    adj = edge_graph(p)
    vol = sum(placing_triangulation(list(verts)).volumes.values())
    return {
        "dimension": p.dim,
        "vertices": len(verts),
        "lattice_points": len(enumerate_points(p, 1)),
        "facets": len(p.facets),
        "normalized_volume": vol,
        "vertex_degrees": sorted(len(a) for a in adj.values()),
    }


def _slack_matrix(p: Polytope) -> list[tuple[int, ...]]:
    return [tuple(f.slack(v) for f in p.facets) for v in p.vertices]


_INCOMPLETE = object()


def _solve_map(pv, qv, assigned):
    """The affine map sending ``pv[i]`` to ``qv[assigned[i]]``.

    Returns ``_INCOMPLETE`` while the assigned vertices span less than an
    affine basis, and None if the determined map is not integral unimodular.
    """
    idx = list(assigned)
    d = len(pv[0])
    base = [idx[0]]
    for i in idx[1:]:
        diffs = [[a - b for a, b in zip(pv[j], pv[base[0]])] for j in base[1:] + [i]]
        if linalg.rank(diffs) == len(base):
            base.append(i)
        if len(base) == d + 1:
            break
    if len(base) < d + 1:
        return _INCOMPLETE
    a0, b0 = pv[base[0]], qv[assigned[base[0]]]
    A = [[pv[i][r] - a0[r] for i in base[1:]] for r in range(d)]
    B = [[qv[assigned[i]][r] - b0[r] for i in base[1:]] for r in range(d)]
    U = linalg.matmul(B, linalg.inverse(A))
    if any(Fraction(x).denominator != 1 for row in U for x in row):
        return None
    U = tuple(tuple(int(x) for x in row) for row in U)
    if abs(linalg.det_bareiss(U)) != 1:
        return None
    t = tuple(b - sum(u * a for u, a in zip(row, a0)) for row, b in zip(U, b0))
    return AffineUnimodularMap(U, t)


def find_equivalence(p: Polytope, q: Polytope) -> tuple[Optional[AffineUnimodularMap], str]:
    """Search for ``x -> Ux + t`` carrying ``p`` onto ``q``; returns (map or None, reason)."""
    if not (p.is_full_dimensional and q.is_full_dimensional):
        return None, "inputs must be lattice-normalized to full dimension"
    if p.ambient_dim != q.ambient_dim:
        return None, f"dimensions differ: {p.ambient_dim} vs {q.ambient_dim}"
    inv_p, inv_q = invariants(p), invariants(q)
    for key in inv_p:
        if inv_p[key] != inv_q[key]:
            return None, f"invariant '{key}' differs: {inv_p[key]} vs {inv_q[key]}"
    pv, qv = p.vertices, q.vertices
    sp, sq = _slack_matrix(p), _slack_matrix(q)
    adj_p, adj_q = edge_graph(p), edge_graph(q)
    sig_p = [(sorted(r), len(adj_p[i])) for i, r in enumerate(sp)]
    sig_q = [(sorted(r), len(adj_q[i])) for i, r in enumerate(sq)]
    cands = {i: [j for j in range(len(qv)) if sig_q[j] == sig_p[i]] for i in range(len(pv))}
    order = sorted(range(len(pv)), key=lambda i: (len(cands[i]), i))
    nf = len(p.facets)
    q_points = set(enumerate_points(q, 1))
    p_points = list(enumerate_points(p, 1))

    def columns(slack, rows):
        return Counter(tuple(slack[i][f] for i in rows) for f in range(nf))

    def extend(level, assigned, used):
        if level == len(order):
            return None
        i = order[level]
        for j in cands[i]:
            if j in used:
                continue
            if any((k in adj_p[i]) != (assigned[k] in adj_q[j]) for k in assigned):
                continue
            assigned[i] = j
            keys = list(assigned)
            if columns(sp, keys) == columns(sq, [assigned[k] for k in keys]):
                m = _solve_map(pv, qv, assigned)
                if m is _INCOMPLETE:
                    found = extend(level + 1, assigned, used | {j})
                    if found is not None:
                        return found
                elif m is not None:
                    if {m(v) for v in pv} == set(qv) and {m(x) for x in p_points} == q_points:
                        return m
            del assigned[i]
        return None

    m = extend(0, {}, frozenset())
    if m is None:
        return None, "no lattice-preserving vertex matching exists"
    return m, "equivalent"


def unimodular_equivalence(p: Polytope, q: Polytope) -> Optional[AffineUnimodularMap]:
    return find_equivalence(p, q)[0]
