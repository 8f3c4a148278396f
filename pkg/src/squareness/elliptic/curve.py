"""Integral Weierstrass models, coordinate changes, minimal models and twists."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .. import ratlattice as rl


class SingularCurve(ValueError):
    pass


class BadReduction(ValueError):
    pass


@dataclass(frozen=True)
class EllipticCurve:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        if self.disc == 0:
            raise SingularCurve(f"singular model {self.ainvs}")

    @staticmethod
    def from_ainvs(ainvs) -> "EllipticCurve":
        a = [int(x) for x in ainvs]
        if len(a) == 2:
            a = [0, 0, 0] + a
        if len(a) != 5:
            raise ValueError("need 5 (or 2) a-invariants")
        return EllipticCurve(*a)

    @staticmethod
    def from_short(A: int, B: int) -> "EllipticCurve":
        return EllipticCurve(0, 0, 0, int(A), int(B))

    @property
    def ainvs(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self):
        return self.a1 * self.a1 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3 * self.a3 + 4 * self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.ainvs
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self):
        return self.b2 * self.b2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def disc(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j(self):
        from fractions import Fraction
        return Fraction(self.c4 ** 3, self.disc)

    def __str__(self):
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"

    # -- derived data, computed on demand ----------------------------------

    @cached_property
    def minimal(self) -> "EllipticCurve":
        return minimal_model(self)

    @cached_property
    def bad_primes(self) -> list[int]:
        return rl.prime_divisors(self.minimal.disc)

    @cached_property
    def local_data(self) -> dict:
        from .tate import tate_local
        return {p: tate_local(self.minimal, p) for p in self.bad_primes}

    @cached_property
    def conductor(self) -> int:
        return math.prod(p ** ld.ord_conductor for p, ld in self.local_data.items())

    @cached_property
    def tamagawa_product(self) -> int:
        return math.prod(ld.c_p for ld in self.local_data.values())

    def ap(self, p: int) -> int:
        from .points import ap
        return ap(self, p)

    def is_isomorphic(self, other: "EllipticCurve") -> bool:
        m1, m2 = self.minimal, other.minimal
        return m1.ainvs == m2.ainvs


def transform(E: EllipticCurve, r: int, s: int, t: int, u: int = 1) -> EllipticCurve:
    """Model for x = u^2 x' + r, y = u^3 y' + u^2 s x' + t; raises if not integral."""
    a1, a2, a3, a4, a6 = E.ainvs
    n1 = a1 + 2 * s
    n2 = a2 - s * a1 + 3 * r - s * s
    n3 = a3 + r * a1 + 2 * t
    n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    n6 = a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1
    out = []
    for val, k in ((n1, 1), (n2, 2), (n3, 3), (n4, 4), (n6, 6)):
        q, rem = divmod(val, u ** k)
        if rem:
            raise ValueError("transformation leaves the integral models")
        out.append(q)
    return EllipticCurve(*out)


def short_model(E: EllipticCurve) -> EllipticCurve:
    """y^2 = x^3 - 27 c4 x - 54 c6, integral and isomorphic to E over Q."""
    return EllipticCurve.from_short(-27 * E.c4, -54 * E.c6)


def _kraus_ok(c4: int, c6: int, p: int) -> bool:
    if p == 3:
        return c6 == 0 or rl.valuation(c6, 3) != 2
    if p == 2:
        if c6 % 4 == 3:
            return True
        return (c4 == 0 or rl.valuation(c4, 2) >= 4) and c6 % 32 in (0, 8)
    return True


def _kraus_all(c4: int, c6: int) -> bool:
    return _kraus_ok(c4, c6, 2) and _kraus_ok(c4, c6, 3)


def model_from_c4c6(c4: int, c6: int) -> EllipticCurve:
    """Reduced model (a1, a3 in {0,1}, a2 in {-1,0,1}) with the given c4, c6."""
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    b4, r4 = divmod(b2 * b2 - c4, 24)
    b6, r6 = divmod(-b2 ** 3 + 36 * b2 * b4 - c6, 216)
    if r4 or r6:
        raise ValueError("c4, c6 do not come from an integral model")
    a1 = b2 % 2
    a3 = b6 % 2
    a2, q2 = divmod(b2 - a1, 4)
    a4, q4 = divmod(b4 - a1 * a3, 2)
    a6, q6 = divmod(b6 - a3, 4)
    if q2 or q4 or q6:
        raise ValueError("c4, c6 do not come from an integral model")
    return EllipticCurve(a1, a2, a3, a4, a6)


def minimal_model(E: EllipticCurve) -> EllipticCurve:
    """Global minimal model in reduced form, by the Kraus-Laska-Connell recipe."""
    c4, c6, disc = E.c4, E.c6, E.disc
    g = math.gcd(c6, disc) if c6 else abs(disc)
    if c4:
        g = math.gcd(g, c4) if c6 else math.gcd(c4, disc)
    u = 1
    for p in rl.prime_divisors(g):
        best = 0
        k = 1
        while (c4 % p ** (4 * k) == 0) and (c6 % p ** (6 * k) == 0) and disc % p ** (12 * k) == 0:
            if _kraus_ok(c4 // p ** (4 * k), c6 // p ** (6 * k), p):
                best = k
            k += 1
        u *= p ** best
    return model_from_c4c6(c4 // u ** 4, c6 // u ** 6)


def quadratic_twist(E: EllipticCurve, D: int) -> EllipticCurve:
    """Twist by the fundamental discriminant -D (D > 0), as a global minimal model."""
    D = int(D)
    if D < 0:
        D = -D
    if not rl.is_fundamental_discriminant(-D):
        raise rl.NotFundamental(f"-{D} is not a fundamental discriminant")
    A, B = -27 * E.c4, -54 * E.c6
    return minimal_model(EllipticCurve.from_short(D * D * A, -(D ** 3) * B))


def short_models(E: EllipticCurve) -> list[EllipticCurve]:
    """Integral models y^2 = x^3 + Ax + B obtained by removing 2, 3 from the standard one."""
    A, B = -27 * E.minimal.c4, -54 * E.minimal.c6
    out = []
    for a in range(0, 8):
        for b in range(0, 6):
            u = 2 ** a * 3 ** b
            if A % u ** 4 == 0 and B % u ** 6 == 0:
                out.append(EllipticCurve.from_short(A // u ** 4, B // u ** 6))
    return out


def hypothesis_star_star(E: EllipticCurve, D: int) -> bool:
    """Whether D is coprime to the discriminant of some integral model y^2 = x^3 + Ax + B."""
    D = abs(int(D))
    if not rl.is_fundamental_discriminant(-D):
        raise rl.NotFundamental(f"-{D} is not a fundamental discriminant")
    return any(math.gcd(D, M.disc) == 1 for M in short_models(E))
