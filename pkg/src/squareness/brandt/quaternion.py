"""Definite quaternion algebras ramified at {N, oo}, maximal orders, and lattice enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from .. import ratlattice as rl


class NotPrime(ValueError):
    pass


Quat = tuple  # (x0, x1, x2, x3) in the basis 1, i, j, k


@dataclass(frozen=True)
class Algebra:
    """The algebra (-a, -b | Q): i^2 = -a, j^2 = -b, k = ij."""

    a: int
    b: int

    def mul(self, x: Quat, y: Quat) -> Quat:
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 - a * x1 * y1 - b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 + b * (x2 * y3 - x3 * y2),
            x0 * y2 + x2 * y0 + a * (x3 * y1 - x1 * y3),
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    @staticmethod
    def conj(x: Quat) -> Quat:
        return (x[0], -x[1], -x[2], -x[3])

    def nrd(self, x: Quat):
        return x[0] * x[0] + self.a * x[1] * x[1] + self.b * x[2] * x[2] + self.a * self.b * x[3] * x[3]

    @staticmethod
    def trd(x: Quat):
        return 2 * x[0]

    def bilinear(self, x: Quat, y: Quat):
        """<x, y> = trd(x conj(y)) / 2, so that <x, x> = nrd(x)."""
        return x[0] * y[0] + self.a * x[1] * y[1] + self.b * x[2] * y[2] + self.a * self.b * x[3] * y[3]

    def gram(self, basis: Sequence[Quat]) -> list[list[Fraction]]:
        return [[Fraction(self.bilinear(u, v)) for v in basis] for u in basis]


def lattice_of(gens, ) -> rl.Lattice:
    return rl.Lattice.from_generators([list(map(Fraction, g)) for g in gens], 4)


def basis_of(L: rl.Lattice) -> list[Quat]:
    return [tuple(Fraction(c) for c in row) for row in L.basis]


def product(A: Algebra, L: rl.Lattice, M: rl.Lattice) -> rl.Lattice:
    """The Z-module spanned by all products x*y, x in L, y in M."""
    return lattice_of([A.mul(x, y) for x in basis_of(L) for y in basis_of(M)])


def conj_lattice(L: rl.Lattice) -> rl.Lattice:
    return lattice_of([Algebra.conj(x) for x in basis_of(L)])


# -- enumeration of short vectors ------------------------------------------------

def _ldl(G):
    """Exact decomposition Q(x) = sum_i d_i (x_i + sum_{j>i} m[i][j] x_j)^2."""
    n = len(G)
    A = [[Fraction(G[i][j]) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = A[i][i]
        if d[i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, n):
            m[i][j] = A[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                A[j][k] -= m[i][j] * m[i][k] * d[i]
    return d, m


def _int_range(center: Fraction, dq: Fraction, rem: Fraction):
    """All integers t with dq * (t - center)^2 <= rem."""
    if rem < 0:
        return range(0)
    r = math.sqrt(float(rem / dq)) if rem else 0.0
    lo = math.floor(float(center) - r) - 1
    hi = math.ceil(float(center) + r) + 1
    while dq * (lo - center) ** 2 > rem and lo <= hi:
        lo += 1
    while dq * (hi - center) ** 2 > rem and hi >= lo:
        hi -= 1
    while dq * (lo - 1 - center) ** 2 <= rem:
        lo -= 1
    while dq * (hi + 1 - center) ** 2 <= rem:
        hi += 1
    return range(lo, hi + 1)


def short_vectors(G, bound) -> list[tuple[tuple[int, ...], Fraction]]:
    """All nonzero integer x with x G x^T <= bound, paired with the value."""
    n = len(G)
    d, m = _ldl(G)
    bound = Fraction(bound)
    out = []
    x = [0] * n

    def rec(i, rem):
        c = -sum((m[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        for t in _int_range(c, d[i], rem):
            x[i] = t
            r = rem - d[i] * (t - c) ** 2
            if i == 0:
                val = bound - r
                if any(x):
                    out.append((tuple(x), val))
            else:
                rec(i - 1, r)
        x[i] = 0

    rec(n - 1, bound)
    return out


def theta_counts(G, upto: int) -> list[int]:
    """counts[m] = #{x : x G x^T = m} for 0 <= m <= upto (integral forms)."""
    counts = [0] * (upto + 1)
    counts[0] = 1
    for _, val in short_vectors(G, upto):
        if val.denominator != 1:
            raise ValueError("form is not integral")
        counts[int(val)] += 1
    return counts


# -- maximal orders ---------------------------------------------------------------

@dataclass(frozen=True)
class QuaternionData:
    N: int
    algebra: Algebra
    order_basis: tuple  # four Quat
    gram: tuple  # 4x4 Fractions, <x, y> on the order basis

    @property
    def a(self):
        return self.algebra.a

    @property
    def b(self):
        return self.algebra.b

    @property
    def order(self) -> rl.Lattice:
        return lattice_of(self.order_basis)


def _q(*c):
    return tuple(Fraction(x) for x in c)


def _recipe(N: int):
    h = Fraction(1, 2)
    if N == 2:
        return Algebra(1, 1), [_q(1, 0, 0, 0), _q(0, 1, 0, 0), _q(0, 0, 1, 0), _q(h, h, h, h)]
    if N % 4 == 3:
        return Algebra(1, N), [_q(1, 0, 0, 0), _q(0, 1, 0, 0), _q(h, 0, h, 0), _q(0, h, 0, h)]
    if N % 8 == 5:
        return Algebra(2, N), [_q(h, 0, h, h), _q(0, Fraction(1, 4), h, Fraction(1, 4)), _q(0, 0, 1, 0), _q(0, 0, 0, 1)]
    q = 3
    while not (q % 4 == 3 and sympy.isprime(q) and rl.kronecker(N, q) == -1):
        q += 1
    c = next(c for c in range(q) if (c * c * N + 1) % q == 0)
    return Algebra(N, q), [_q(h, 0, h, 0), _q(0, h, 0, h), _q(0, 0, Fraction(1, q), Fraction(c, q)), _q(0, 0, 0, 1)]


def is_order(A: Algebra, basis) -> bool:
    L = lattice_of(basis)
    if not L.contains([1, 0, 0, 0]):
        return False
    return all(L.contains(list(A.mul(x, y))) for x in basis for y in basis) and all(
        Fraction(A.nrd(x)).denominator == 1 and Fraction(A.trd(x)).denominator == 1 for x in basis
    )


def reduced_disc_squared(A: Algebra, basis) -> int:
    """det(trd(x_i conj x_j)) = discrd(O)^2 for an order O."""
    G = [[2 * Fraction(A.bilinear(u, v)) for v in basis] for u in basis]
    return int(rl.rat_det(G))


def build_quaternion(N: int) -> QuaternionData:
    if not sympy.isprime(N):
        raise NotPrime(f"{N} is not prime")
    A, basis = _recipe(N)
    if not is_order(A, basis):
        raise ArithmeticError("recipe did not give an order")
    if reduced_disc_squared(A, basis) != N * N:
        raise ArithmeticError("order is not maximal")
    basis = basis_of(lattice_of(basis))
    return QuaternionData(N, A, tuple(basis), tuple(tuple(r) for r in A.gram(basis)))
