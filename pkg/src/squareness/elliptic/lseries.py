"""Numerical L(E,1) and the analytic order of Sha for rank-0 curves."""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from .. import ratlattice as rl
from .curve import EllipticCurve, quadratic_twist
from .periods import real_periods
from .points import an_list, ap_any, torsion_order


class RankPositive(ArithmeticError):
    pass


class RoundingAmbiguous(ArithmeticError):
    pass


def _terms_needed(N: int, A: float, target: float) -> int:
    """n with sum_{m>n} 2 exp(-2 pi m / (A sqrt N)) below target (|a_m|/m <= 2)."""
    c = 2 * math.pi / (A * math.sqrt(N))
    n = int(math.log(2 / (target * (1 - math.exp(-c)))) / c) + 2
    return max(n, 10)


def _series(an, N, A, eps):
    sq = mpmath.sqrt(N)
    q1 = mpmath.exp(-2 * mpmath.pi * A / sq)
    q2 = mpmath.exp(-2 * mpmath.pi / (A * sq))
    s, p1, p2 = mpmath.mpf(0), mpmath.mpf(1), mpmath.mpf(1)
    for n in range(1, len(an)):
        p1 *= q1
        p2 *= q2
        if an[n]:
            s += mpmath.mpf(an[n]) / n * (p1 + eps * p2)
    return s


def root_number_and_L1(E: EllipticCurve, prec: int = 128, an=None):
    """(epsilon, L(E,1)), epsilon detected from the A-independence of the series."""
    N = E.conductor
    with mpmath.workprec(prec):
        target = float(mpmath.mpf(2) ** (-min(prec, 60)))
        A = 1.2
        n = _terms_needed(N, A, target)
        if an is None or len(an) <= n:
            an = an_list(E, n)
        an = an[: n + 1]
        best = None
        for eps in (1, -1):
            v1 = _series(an, N, 1, eps)
            v2 = _series(an, N, A, eps)
            err = abs(v1 - v2)
            if best is None or err < best[2]:
                best = (eps, v1, err, abs(v1) + abs(v2))
        eps, val, err, _ = best
        if err > mpmath.mpf(10) ** -8:
            raise ArithmeticError("root number detection failed")
        return eps, +val


def twist_an(E: EllipticCurve, D: int, n: int) -> list[int]:
    """a_n of the twist by -D; uses chi(n) a_n(E) when gcd(D, N) = 1."""
    N = E.conductor
    if math.gcd(D, N) == 1:
        base = an_list(E, n)
        return [rl.kronecker(-D, m) * a if a else 0 for m, a in enumerate(base)]
    Et = quadratic_twist(E, D)
    return an_list(Et, n)


def numeric_L1(E: EllipticCurve, prec: int = 128, an=None) -> mpmath.mpf:
    return root_number_and_L1(E, prec, an)[1]


def sha_an(E: EllipticCurve, prec: int = 128, an=None, torsion: int | None = None) -> Fraction:
    """Rational value of L(E,1) |E_tors|^2 / (Omega prod c_p), for L(E,1) != 0."""
    E = E.minimal
    eps, L = root_number_and_L1(E, prec, an)
    if eps == -1 or abs(L) < 1e-10:
        raise RankPositive("L(E,1) vanishes")
    T = torsion_order(E) if torsion is None else torsion
    cp = E.tamagawa_product
    om = real_periods(E, prec).omega
    val = L * T * T / (om * cp)
    den = 4 * cp * T * T
    k = int(mpmath.nint(val * den))
    r = Fraction(k, den)
    if abs(val - mpmath.mpf(r.numerator) / r.denominator) >= 1e-3:
        raise RoundingAmbiguous(f"sha_an {mpmath.nstr(val, 10)} not near a rational with denominator {den}")
    return r
