import itertools
import random

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from ehrhartkit.polytope import AffineUnimodularMap, Polytope, affine_dimension


def random_polytope(rng: random.Random, d: int, n_points: int = None, box: int = 2) -> Polytope:
    """Full-dimensional lattice polytope from random points in ``[-box, box]^d``."""
    n_points = n_points or d + 1 + rng.randint(0, 3)
    while True:
        pts = [tuple(rng.randint(-box, box) for _ in range(d)) for _ in range(n_points)]
        if affine_dimension(pts) == d:
            return Polytope(pts)


def random_unimodular(rng: random.Random, d: int, steps: int = 12) -> list[list[int]]:
    """Random element of GL_d(Z) as a product of elementary matrices and sign flips."""
    u = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(steps):
        if d == 1:
            break
        i, j = rng.sample(range(d), 2)
        c = rng.choice((-1, 1))
        for col in range(d):
            u[i][col] += c * u[j][col]
    for i in range(d):
        if rng.random() < 0.3:
            u[i] = [-x for x in u[i]]
    if d > 1 and rng.random() < 0.5:
        i, j = rng.sample(range(d), 2)
        u[i], u[j] = u[j], u[i]
    return u


def random_map(rng: random.Random, d: int) -> AffineUnimodularMap:
    return AffineUnimodularMap(random_unimodular(rng, d), tuple(rng.randint(-5, 5) for _ in range(d)))


def brute_force_count(vertices, k: int = 1, interior: bool = False) -> int:
    """Lattice points of ``k * conv(vertices)`` by scanning the bounding box with
    qhull facet equations.  Only for full-dimensional input with small coordinates."""
    v = np.array(vertices, dtype=float) * k
    d = v.shape[1]
    if d == 1:
        lo, hi = int(v.min()), int(v.max())
        return max(0, hi - lo - 1) if interior else hi - lo + 1
    hull = ConvexHull(v)
    eq = hull.equations  # a.x + b <= 0 inside
    lo = np.floor(v.min(axis=0)).astype(int)
    hi = np.ceil(v.max(axis=0)).astype(int)
    grid = np.array(list(itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])), dtype=float)
    vals = grid @ eq[:, :-1].T + eq[:, -1]
    tol = 1e-9
    inside = (vals < -tol).all(axis=1) if interior else (vals <= tol).all(axis=1)
    return int(inside.sum())


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def unit_square():
    return Polytope([(0, 0), (1, 0), (0, 1), (1, 1)])


@pytest.fixture
def reeve():
    # empty tetrahedron of normalized volume 2, not IDP
    return Polytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)])


# acceptance bookkeeping: one line per criterion, printed in the terminal summary
ACCEPTANCE: dict[int, tuple[str, str]] = {}


class _Criterion:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        detail = self.title if exc is None else f"{self.title} ({type(exc).__name__}: {exc})".splitlines()[0]
        ACCEPTANCE[self.number] = (status, detail)
        print(f"criterion {self.number}: {status} - {detail}")
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status} - {detail}")
