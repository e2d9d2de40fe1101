"""h*-vectors, Ehrhart polynomials and the sequence predicates used on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .enumeration import ehrhart_counts
from .polytope import Polytope


class IntegrityError(ArithmeticError):
    """An h*-vector came out with a negative entry; the input counts are not Ehrhart data."""


@dataclass(frozen=True)
class HStarVector:
    d: int
    coefficients: tuple[int, ...]

    def __post_init__(self):
        if len(self.coefficients) != self.d + 1:
            raise ValueError(f"h*-vector of a {self.d}-polytope needs {self.d + 1} entries")
        if any(h < 0 for h in self.coefficients):
            raise IntegrityError(f"negative h* entry in {self.coefficients}")
        if self.coefficients[0] != 1:
            raise IntegrityError(f"h*_0 must be 1, got {self.coefficients[0]}")

    def __iter__(self):
        return iter(self.coefficients)

    def __getitem__(self, i):
        return self.coefficients[i]

    def __len__(self):
        return len(self.coefficients)


@dataclass(frozen=True)
class EhrhartPolynomial:
    """Monomial coefficients ``c_0 .. c_d`` of ``E(t)``."""

    coefficients: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, t) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return acc


def hstar_from_counts(counts: Sequence[int], d: int) -> HStarVector:
    """Multiply ``sum_k E(k) t^k`` by ``(1 - t)^(d+1)`` and read off degrees ``0..d``."""
    if len(counts) < d + 1:
        raise ValueError(f"need E(0..{d}), got {len(counts)} values")
    if counts[0] != 1:
        raise ValueError("E(0) must be 1")
    h = tuple(
        sum((-1) ** j * comb(d + 1, j) * counts[i - j] for j in range(i + 1))
        for i in range(d + 1)
    )
    return HStarVector(d, h)


def _binomial_poly(shift: int, d: int) -> list[Fraction]:
    """Monomial coefficients of ``C(t + shift, d)`` as a polynomial in ``t``."""
    poly = [Fraction(1)]
    for j in range(1, d + 1):
        # multiply by (t + shift - j + 1) / j
        a = Fraction(shift - j + 1, j)
        b = Fraction(1, j)
        nxt = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i] += c * a
            nxt[i + 1] += c * b
        poly = nxt
    return poly


def ehrhart_from_hstar(h: HStarVector) -> EhrhartPolynomial:
    d = h.d
    coeffs = [Fraction(0)] * (d + 1)
    for i, hi in enumerate(h):
        if hi:
            for j, c in enumerate(_binomial_poly(d - i, d)):
                coeffs[j] += hi * c
    return EhrhartPolynomial(tuple(coeffs))


def is_unimodal(v: Sequence[int]) -> bool:
    i, n = 0, len(v)
    while i + 1 < n and v[i] <= v[i + 1]:
        i += 1
    while i + 1 < n and v[i] >= v[i + 1]:
        i += 1
    return i >= n - 1


def log_concavity_violations(v: Sequence[int]) -> list[int]:
    """Interior indices ``i`` with ``v[i-1] * v[i+1] > v[i]**2``."""
    return [i for i in range(1, len(v) - 1) if v[i - 1] * v[i + 1] > v[i] * v[i]]


def is_log_concave(v: Sequence[int]) -> bool:
    # literal reading: zeros get no special treatment
    return not log_concavity_violations(v)


def has_internal_zeros(v: Sequence[int]) -> bool:
    nz = [i for i, x in enumerate(v) if x != 0]
    return bool(nz) and any(v[i] == 0 for i in range(nz[0], nz[-1]))


def normalized_volume(h: HStarVector) -> int:
    return sum(h)


def hstar(p: Polytope, *, workers: int = 1) -> HStarVector:
    """h*-vector of ``p`` at its own dimension, by counting ``E(0..d)``."""
    q, _ = p.normalized
    d = q.ambient_dim
    return hstar_from_counts(ehrhart_counts(q, d, workers=workers), d)


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def hstar_report(p: Polytope, *, workers: int = 1) -> dict:
    h = hstar(p, workers=workers)
    poly = ehrhart_from_hstar(h)
    return {
        "dim": h.d,
        "hstar": list(h),
        "ehrhart_coeffs": [fraction_str(c) for c in poly.coefficients],
        "unimodal": is_unimodal(h),
        "log_concave": is_log_concave(h),
        "volume_normalized": normalized_volume(h),
    }
