"""Exact Fourier analysis of Boolean functions.

Coefficients are kept as scaled integers c(a) = 2^n * fhat(a) under the
sign convention 0 -> +1, 1 -> -1, so every statement about granularity or
coefficient magnitudes is tested with integer arithmetic.  Exact rationals
are dyadic: a (numerator, exponent) pair meaning numerator / 2^exponent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, NamedTuple

import numpy as np

from .boolfn import BooleanFunction, _pack_bits
from .f2linalg import F2Vector


class Dyadic(NamedTuple):
    """Exact dyadic rational numerator / 2^exponent, normalized."""

    numerator: int
    exponent: int

    @classmethod
    def make(cls, numerator: int, exponent: int) -> "Dyadic":
        if exponent < 0:
            numerator <<= -exponent
            exponent = 0
        if numerator == 0:
            return cls(0, 0)
        while exponent > 0 and numerator % 2 == 0:
            numerator //= 2
            exponent -= 1
        return cls(numerator, exponent)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __float__(self) -> float:
        return self.numerator / (1 << self.exponent)


@dataclass(frozen=True)
class FourierSpectrum:
    """Nonzero scaled coefficients of one Boolean function."""

    arity: int
    coeffs: Mapping[int, int]

    def coefficient(self, alpha: int) -> int:
        return self.coeffs.get(alpha, 0)

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.coeffs))

    @property
    def sparsity(self) -> int:
        return len(self.coeffs)

    def degree(self) -> int:
        return max((a.bit_count() for a in self.coeffs), default=0)

    def l1(self) -> Dyadic:
        return Dyadic.make(sum(abs(c) for c in self.coeffs.values()), self.arity)

    def parseval_ok(self) -> bool:
        return sum(c * c for c in self.coeffs.values()) == 1 << (2 * self.arity)

    def dump_lines(self) -> list[str]:
        return [
            f"alpha={a:x} c={self.coeffs[a]:+d} scale=2^-{self.arity}"
            for a in sorted(self.coeffs)
        ]

    def inverse(self) -> BooleanFunction:
        """Reconstruct the function; the transform is a scaled involution."""
        c = np.zeros(1 << self.arity, dtype=np.int64)
        for a, v in self.coeffs.items():
            c[a] = v
        values = _wht_int(c)
        scale = 1 << self.arity
        bits = np.where(values == -scale, 1, 0)
        if not np.array_equal(np.abs(values), np.full_like(values, scale)):
            raise ValueError("spectrum is not that of a Boolean function")
        return BooleanFunction(self.arity, _pack_bits(bits))


def _wht_int(values: np.ndarray) -> np.ndarray:
    """In-place-style fast transform, int64 throughout (safe for n <= 20)."""
    a = values.astype(np.int64).copy()
    h = 1
    while h < a.size:
        b = a.reshape(-1, 2, h)
        s = b[:, 0, :] + b[:, 1, :]
        d = b[:, 0, :] - b[:, 1, :]
        b[:, 0, :] = s
        b[:, 1, :] = d
        h *= 2
    return a


def wht(f: BooleanFunction) -> FourierSpectrum:
    """Exact spectrum of f; c(a) = sum_x (-1)^(f(x) + <x,a>)."""
    signs = 1 - 2 * f.bit_array().astype(np.int64)
    c = _wht_int(signs)
    nz = np.nonzero(c)[0]
    coeffs = {int(a): int(c[a]) for a in nz}
    return FourierSpectrum(f.arity, MappingProxyType(coeffs))


def _spectrum_of(f) -> FourierSpectrum:
    return f if isinstance(f, FourierSpectrum) else wht(f)


def sparsity(f) -> int:
    return _spectrum_of(f).sparsity


def degree(f) -> int:
    return _spectrum_of(f).degree()


def spectral_l1(f) -> Dyadic:
    return _spectrum_of(f).l1()


def granularity_check(f) -> tuple[int, int]:
    """(degree d, 1 iff all coefficients are multiples of 2^(n-d) and
    sparsity <= 4^d)."""
    spec = _spectrum_of(f)
    d = spec.degree()
    unit = 1 << (spec.arity - d)
    ok = all(c % unit == 0 for c in spec.coeffs.values()) and spec.sparsity <= 4 ** d
    return d, int(ok)


def shift_overlap(f, nonzero_only: bool = False) -> tuple[F2Vector, int]:
    """Best shift b maximizing |supp ∩ (supp + b)|.

    The zero shift always attains the sparsity, so the interesting report
    is ``nonzero_only=True``.  Ties break to the smallest packed shift
    (coordinate 1 least significant).
    """
    spec = _spectrum_of(f)
    supp = set(spec.coeffs)
    n = spec.arity
    best_beta, best = None, -1
    start = 1 if nonzero_only else 0
    for beta in range(start, 1 << n):
        overlap = sum(1 for a in supp if (a ^ beta) in supp)
        if overlap > best:
            best_beta, best = beta, overlap
    if best_beta is None:
        raise ValueError("no admissible shift (arity 0 with nonzero_only)")
    return F2Vector(n, best_beta), best


def linear_fourier_sum(f) -> Dyadic:
    """Exact sum of the degree-1 coefficients."""
    spec = _spectrum_of(f)
    total = sum(spec.coefficient(1 << i) for i in range(spec.arity))
    return Dyadic.make(total, spec.arity)
