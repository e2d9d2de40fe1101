"""Exact integer and rational linear algebra.

Matrices are plain ``list[list[int]]`` (or ``Fraction`` entries where noted),
row-major.  Nothing in this module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

IntMatrix = list[list[int]]
RatVector = list[Fraction]


class DimensionError(ValueError):
    pass


def _copy(m: Sequence[Sequence]) -> list[list]:
    return [list(row) for row in m]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if a and b and len(a[0]) != len(b):
        raise DimensionError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    cols = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def det_bareiss(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = _copy(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``h = u @ m`` and ``u`` unimodular.  The nonzero
    rows of ``h`` come first; each pivot is positive and the entries above a
    pivot lie in ``[0, pivot)``.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    h = _copy(m)
    u = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        # gcd-combine everything below row r into row r
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            hr, hi = h[r], h[i]
            h[r] = [x * s + y * t for s, t in zip(hr, hi)]
            h[i] = [-q * s + p * t for s, t in zip(hr, hi)]
            ur, ui = u[r], u[i]
            u[r] = [x * s + y * t for s, t in zip(ur, ui)]
            u[i] = [-q * s + p * t for s, t in zip(ur, ui)]
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        piv = h[r][c]
        for i in range(r):
            q = h[i][c] // piv
            if q:
                h[i] = [s - q * t for s, t in zip(h[i], h[r])]
                u[i] = [s - q * t for s, t in zip(u[i], u[r])]
        r += 1
    return h, u


def snf(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``s = u @ m @ v`` with ``d1 | d2 | ...``, all ``di >= 0``."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    s = _copy(m)
    u = identity(rows)
    v = identity(cols)

    def row_op(i, j, a, b, c, d):
        # (row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j), ad - bc = +-1
        for mat in (s, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [a * x + b * y for x, y in zip(ri, rj)]
            mat[j] = [c * x + d * y for x, y in zip(ri, rj)]

    def col_op(i, j, a, b, c, d):
        for mat in (s, v):
            for row in mat:
                x, y = row[i], row[j]
                row[i] = a * x + b * y
                row[j] = c * x + d * y

    for t in range(min(rows, cols)):
        # bring a nonzero entry of minimal absolute value to (t, t)
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if s[i][j] and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return s, u, v
            i, j = best
            if i != t:
                row_op(t, i, 0, 1, 1, 0)
            if j != t:
                col_op(t, j, 0, 1, 1, 0)
            done = True
            for i in range(t + 1, rows):
                if s[i][t] % s[t][t] == 0:
                    if s[i][t]:
                        row_op(t, i, 1, 0, -(s[i][t] // s[t][t]), 1)
                else:
                    g, x, y = _xgcd(s[t][t], s[i][t])
                    p, q = s[t][t] // g, s[i][t] // g
                    row_op(t, i, x, y, -q, p)
            for j in range(t + 1, cols):
                if s[t][j] % s[t][t] == 0:
                    if s[t][j]:
                        col_op(t, j, 1, 0, -(s[t][j] // s[t][t]), 1)
                else:
                    g, x, y = _xgcd(s[t][t], s[t][j])
                    p, q = s[t][t] // g, s[t][j] // g
                    col_op(t, j, x, y, -q, p)
            if any(s[i][t] for i in range(t + 1, rows)):
                done = False
            if done:
                piv = s[t][t]
                # enforce divisibility of the remaining block
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if s[i][j] % piv),
                    None,
                )
                if bad is None:
                    break
                row_op(t, bad[0], 1, 1, 0, 1)
        if s[t][t] < 0:
            for mat in (s, u):
                mat[t] = [-x for x in mat[t]]
    return s, u, v


def rref(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def nullspace(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the right kernel of ``m`` over Q."""
    cols = len(m[0]) if m else 0
    a, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -a[r][f]
        basis.append(vec)
    return basis


def primitive(v: Sequence) -> list[int]:
    """Scale a rational vector to the primitive integer vector with the same direction."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints


def solve(a: Sequence[Sequence], b: Sequence) -> Optional[RatVector]:
    """A solution of ``a @ x = b`` over Q, or None if inconsistent (free variables set to 0)."""
    cols = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, p in enumerate(pivots):
        x[p] = red[r][cols]
    return x


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


# ---------------------------------------------------------------------------
# linear programming


@dataclass(frozen=True)
class LpProblem:
    """Optimize ``c @ x`` subject to ``A @ x <= b`` with ``x`` free."""

    A: list
    b: list
    c: list
    maximize: bool = True


@dataclass(frozen=True)
class LpOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Optional[Fraction] = None
    x: Optional[RatVector] = None
    ray: Optional[RatVector] = None


class _Unbounded(Exception):
    def __init__(self, ray):
        self.ray = ray


def _pivot(tab, basis, r, c):
    inv = 1 / tab[r][c]
    tab[r] = [x * inv for x in tab[r]]
    pr = tab[r]
    for i, row in enumerate(tab):
        if i != r and row[c] != 0:
            f = row[c]
            tab[i] = [x - f * y for x, y in zip(row, pr)]
    basis[r] = c


def _run_simplex(tab, basis, cost, allowed):
    """Minimize ``cost @ x`` on a tableau already in canonical form (Bland's rule).

    ``tab`` rows are ``[coeffs..., rhs]``.  Raises ``_Unbounded`` with a ray.
    """
    n = len(cost)
    while True:
        # reduced costs
        entering = None
        for j in range(n):
            if not allowed[j] or j in basis:
                continue
            rc = cost[j] - sum(cost[bi] * tab[i][j] for i, bi in enumerate(basis))
            if rc < 0:
                entering = j
                break
        if entering is None:
            return
        best = None
        for i, row in enumerate(tab):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            ray = [Fraction(0)] * n
            ray[entering] = Fraction(1)
            for i, bi in enumerate(basis):
                ray[bi] = -tab[i][entering]
            raise _Unbounded(ray)
        _pivot(tab, basis, best[1], entering)


def simplex_standard(A_eq, b_eq, c) -> LpOutcome:
    """Minimize ``c @ x`` subject to ``A_eq @ x = b_eq``, ``x >= 0``.

    Two-phase tableau simplex in exact rationals with Bland's rule.
    """
    m = len(A_eq)
    n = len(c)
    if any(len(row) != n for row in A_eq) or len(b_eq) != m:
        raise DimensionError("inconsistent LP dimensions")
    tab = []
    for row, rhs in zip(A_eq, b_eq):
        row = [Fraction(x) for x in row]
        rhs = Fraction(rhs)
        if rhs < 0:
            row, rhs = [-x for x in row], -rhs
        tab.append(row)
        tab[-1].append(rhs)
    # artificial columns n .. n+m-1
    for i, row in enumerate(tab):
        rhs = row.pop()
        row.extend(Fraction(int(i == j)) for j in range(m))
        row.append(rhs)
    basis = list(range(n, n + m))
    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    _run_simplex(tab, basis, phase1, [True] * (n + m))
    if sum(tab[i][-1] for i, bi in enumerate(basis) if bi >= n) != 0:
        return LpOutcome("infeasible")
    # drive remaining artificials out of the basis; drop redundant rows
    for i in reversed(range(len(tab))):
        if basis[i] >= n:
            j = next((j for j in range(n) if tab[i][j] != 0), None)
            if j is None:
                del tab[i]
                del basis[i]
            else:
                _pivot(tab, basis, i, j)
    for row in tab:
        del row[n:n + m]
    cost = [Fraction(x) for x in c]
    try:
        _run_simplex(tab, basis, cost, [True] * n)
    except _Unbounded as e:
        return LpOutcome("unbounded", ray=e.ray)
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        x[bi] = tab[i][-1]
    return LpOutcome("optimal", value=sum(ci * xi for ci, xi in zip(cost, x)), x=x)


def lp_solve(p: LpProblem) -> LpOutcome:
    """Solve ``opt c@x s.t. A@x <= b`` over free rational ``x``."""
    m = len(p.A)
    n = len(p.c)
    if len(p.b) != m or any(len(row) != n for row in p.A):
        raise DimensionError("inconsistent LP dimensions")
    # x = xp - xn, slack s >= 0:  A xp - A xn + s = b
    A_eq = [list(row) + [-x for x in row] + [int(i == j) for j in range(m)] for i, row in enumerate(p.A)]
    sgn = -1 if p.maximize else 1
    c = [sgn * Fraction(x) for x in p.c] + [-sgn * Fraction(x) for x in p.c] + [0] * m
    out = simplex_standard(A_eq, p.b, c)
    if out.status == "infeasible":
        return out
    if out.status == "unbounded":
        ray = [out.ray[j] - out.ray[n + j] for j in range(n)]
        return LpOutcome("unbounded", ray=ray)
    x = [out.x[j] - out.x[n + j] for j in range(n)]
    value = sum(Fraction(ci) * xi for ci, xi in zip(p.c, x))
    return LpOutcome("optimal", value=value, x=x)
