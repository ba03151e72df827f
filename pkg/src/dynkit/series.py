"""Truncated formal power series over exact rationals.

Everything is exact modulo h^(N+1) for a fixed truncation order N;
there is no floating-point path. `TruncatedSeries` is a scalar
c_0 + c_1 h + ... + c_N h^N; `SeriesMatrix` keeps one rational matrix
per order, multiplying by convolution. Exponentials exist in the two
terminating regimes: nilpotent constant term, or no constant term at
all. Inverses need an invertible constant term and follow the Neumann
series.

The alternator on a tensor square is (X - X^21) / 2, where X^21 is the
conjugate by the factor swap. The factor one-half is a calibrated
constant fixed against the rank-one fixture in the twist tests; it is
part of the contract of `alt2`, not a free choice per call site.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Iterable, Sequence

from . import _linalg as la
from .errors import NotExponentiable, NotSquare


@dataclass(frozen=True)
class TruncatedSeries:
    """Scalar series c_0 + c_1 h + ... + c_N h^N, exact mod h^(N+1)."""

    coefficients: tuple[Fraction, ...]

    @staticmethod
    def make(coefficients: Iterable, order: int | None = None) -> "TruncatedSeries":
        coeffs = [la.frac(c) for c in coefficients]
        if order is not None:
            if order < 0:
                raise ValueError("order must be nonnegative")
            coeffs = (coeffs + [Fraction(0)] * (order + 1))[: order + 1]
        if not coeffs:
            raise ValueError("series needs at least the constant coefficient")
        return TruncatedSeries(tuple(coeffs))

    @staticmethod
    def constant(value, order: int) -> "TruncatedSeries":
        return TruncatedSeries.make([value], order)

    @staticmethod
    def hbar(order: int) -> "TruncatedSeries":
        return TruncatedSeries.make([0, 1], order)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.order != self.order:
                raise ValueError("truncation orders differ")
            return other
        return TruncatedSeries.constant(other, self.order)

    def __add__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        return TruncatedSeries(
            tuple(a + b for a, b in zip(self.coefficients, other.coefficients))
        )

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-a for a in self.coefficients))

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] += a * other.coefficients[j]
        return TruncatedSeries(tuple(out))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)


@dataclass(frozen=True)
class SeriesMatrix:
    """Square matrix of truncated series, stored per order."""

    orders: tuple[la.Matrix, ...]  # orders[k] multiplies h^k

    def __post_init__(self):
        if not self.orders:
            raise ValueError("series matrix needs at least the constant order")
        d = len(self.orders[0])
        for m in self.orders:
            if len(m) != d or any(len(row) != d for row in m):
                raise ValueError("all orders must be square of equal dimension")

    @staticmethod
    def constant(matrix: Iterable[Iterable], order: int) -> "SeriesMatrix":
        m = la.mat(matrix)
        return SeriesMatrix((m,) + tuple(la.zeros(len(m)) for _ in range(order)))

    @staticmethod
    def single(k: int, matrix: Iterable[Iterable], order: int) -> "SeriesMatrix":
        """`matrix` at h^k, zero elsewhere."""
        m = la.mat(matrix)
        if not 0 <= k <= order:
            raise ValueError("coefficient index outside truncation order")
        zero = la.zeros(len(m))
        return SeriesMatrix(
            tuple(m if i == k else zero for i in range(order + 1))
        )

    @staticmethod
    def identity(dim: int, order: int) -> "SeriesMatrix":
        return SeriesMatrix.constant(la.identity(dim), order)

    @staticmethod
    def zero(dim: int, order: int) -> "SeriesMatrix":
        return SeriesMatrix(tuple(la.zeros(dim) for _ in range(order + 1)))

    @property
    def dim(self) -> int:
        return len(self.orders[0])

    @property
    def order(self) -> int:
        return len(self.orders) - 1

    def at(self, k: int) -> la.Matrix:
        return self.orders[k]

    def entry(self, i: int, j: int) -> TruncatedSeries:
        return TruncatedSeries(tuple(m[i][j] for m in self.orders))

    def _check(self, other: "SeriesMatrix"):
        if self.dim != other.dim or self.order != other.order:
            raise ValueError("dimension or truncation order mismatch")

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        self._check(other)
        return SeriesMatrix(
            tuple(la.mat_add(a, b) for a, b in zip(self.orders, other.orders))
        )

    def __neg__(self) -> "SeriesMatrix":
        return SeriesMatrix(tuple(la.mat_scale(-1, m) for m in self.orders))

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        self._check(other)
        return SeriesMatrix(
            tuple(la.mat_sub(a, b) for a, b in zip(self.orders, other.orders))
        )

    def __mul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        self._check(other)
        out = []
        for k in range(self.order + 1):
            acc = la.zeros(self.dim)
            for i in range(k + 1):
                if la.is_zero(self.orders[i]) or la.is_zero(other.orders[k - i]):
                    continue
                acc = la.mat_add(acc, la.mat_mul(self.orders[i], other.orders[k - i]))
            out.append(acc)
        return SeriesMatrix(tuple(out))

    def scale(self, c) -> "SeriesMatrix":
        c = la.frac(c)
        return SeriesMatrix(tuple(la.mat_scale(c, m) for m in self.orders))

    def scale_series(self, s: TruncatedSeries) -> "SeriesMatrix":
        if s.order != self.order:
            raise ValueError("truncation orders differ")
        out = []
        for k in range(self.order + 1):
            acc = la.zeros(self.dim)
            for i in range(k + 1):
                if s[i] == 0:
                    continue
                acc = la.mat_add(acc, la.mat_scale(s[i], self.orders[k - i]))
            out.append(acc)
        return SeriesMatrix(tuple(out))

    def const_mul(self, left: la.Matrix) -> "SeriesMatrix":
        """Multiply by an order-zero matrix on the left."""
        return SeriesMatrix(tuple(la.mat_mul(left, m) for m in self.orders))

    def mul_const(self, right: la.Matrix) -> "SeriesMatrix":
        return SeriesMatrix(tuple(la.mat_mul(m, right) for m in self.orders))

    def conjugate(self, p: la.Matrix, p_inv: la.Matrix | None = None) -> "SeriesMatrix":
        p_inv = la.mat_inv(p) if p_inv is None else p_inv
        return self.const_mul(p).mul_const(p_inv)

    def truncated(self, order: int) -> "SeriesMatrix":
        if order > self.order:
            raise ValueError("cannot extend the truncation order")
        return SeriesMatrix(self.orders[: order + 1])

    def is_zero(self) -> bool:
        return all(la.is_zero(m) for m in self.orders)

    def is_identity(self) -> bool:
        return (self - SeriesMatrix.identity(self.dim, self.order)).is_zero()

    @cached_property
    def _flip(self) -> la.Matrix:
        k = isqrt(self.dim)
        if k * k != self.dim:
            raise NotSquare("matrix does not act on a tensor square")
        return la.swap_matrix(k, k)

    def swapped(self) -> "SeriesMatrix":
        """Conjugate by the factor swap of the tensor square."""
        flip = self._flip
        return self.const_mul(flip).mul_const(flip)


def series_exp(m: SeriesMatrix) -> SeriesMatrix:
    """Exact exponential; terminates because the constant term is
    nilpotent and every further factor raises the h-order."""
    a0 = m.at(0)
    power = a0
    s = 1
    while not la.is_zero(power):
        if s > m.dim:
            raise NotExponentiable("constant term is not nilpotent")
        power = la.mat_mul(power, a0)
        s += 1
    k_max = s * (m.order + 1) + m.order
    out = SeriesMatrix.identity(m.dim, m.order)
    term = SeriesMatrix.identity(m.dim, m.order)
    for k in range(1, k_max + 1):
        term = (term * m).scale(Fraction(1, k))
        if term.is_zero():
            break
        out = out + term
    return out


def series_inverse(m: SeriesMatrix) -> SeriesMatrix:
    """Inverse modulo h^(N+1) by the Neumann series; the constant term
    must be invertible."""
    a0_inv = la.mat_inv(m.at(0))
    rest = m - SeriesMatrix.constant(m.at(0), m.order)
    tail = rest.const_mul(a0_inv).scale(-1)  # -(A_0^-1 B), strictly positive order
    out = SeriesMatrix.identity(m.dim, m.order)
    term = SeriesMatrix.identity(m.dim, m.order)
    for _ in range(m.order):
        term = term * tail
        if term.is_zero():
            break
        out = out + term
    # (I + A_0^-1 B)^-1 A_0^-1
    return out.mul_const(a0_inv)


def alt2(t: SeriesMatrix, flip: la.Matrix | None = None) -> SeriesMatrix:
    """Alternator (t - t^21) / 2 on a tensor square; `flip` defaults to
    the factor swap inferred from the dimension."""
    if flip is None:
        swapped = t.swapped()
    else:
        if len(flip) != t.dim:
            raise NotSquare("flip operator dimension mismatch")
        swapped = t.const_mul(flip).mul_const(flip)
    return (t - swapped).scale(Fraction(1, 2))
