"""Point counts over F_p, Fourier coefficients a_n, and the rational torsion order."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .. import ratlattice as rl
from .curve import BadReduction, EllipticCurve, short_model


@lru_cache(maxsize=None)
def _square_table(p: int) -> np.ndarray:
    """chi[t] = 1 + Legendre(t, p) = number of y with y^2 = t."""
    tab = np.zeros(p, dtype=np.int64)
    ys = np.arange(p, dtype=np.int64)
    np.add.at(tab, (ys * ys) % p, 1)
    return tab


def count_points(ainvs, p: int) -> int:
    """Number of points on the (possibly singular) projective reduction mod p."""
    a1, a2, a3, a4, a6 = (int(a) % p for a in ainvs)
    if p == 2:
        n = 1
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % 2 == 0:
                    n += 1
        return n
    x = np.arange(p, dtype=np.int64)
    rhs = (x * x) % p
    rhs = (rhs * x + a2 * rhs + a4 * x + a6) % p
    lin = (a1 * x + a3) % p
    disc = (lin * lin + 4 * rhs) % p
    return 1 + int(_square_table(p)[disc].sum())


def ap(E: EllipticCurve, p: int) -> int:
    """Trace of Frobenius at a prime of good reduction."""
    M = E.minimal
    if M.disc % p == 0:
        raise BadReduction(f"{p} is a bad prime")
    return p + 1 - count_points(M.ainvs, p)


def ap_any(E: EllipticCurve, p: int) -> int:
    """a_p for any prime: trace at good p, 0 or +-1 at bad p (minimal model).

    Counting the singular point too, p + 1 - #E(F_p) is 1, -1, 0 for split,
    non-split and additive reduction.
    """
    return p + 1 - count_points(E.minimal.ainvs, p)


def an_list(E: EllipticCurve, n: int, ap_func=None) -> list[int]:
    """Coefficients a_0..a_n of L(E, s) (a_0 = 0)."""
    if ap_func is None:
        ap_func = lambda p: ap_any(E, p)
    N = E.conductor
    a = [0] * (n + 1)
    if n >= 1:
        a[1] = 1
    for p in sympy.primerange(2, n + 1):
        t = ap_func(p)
        bad = N % p == 0
        pk, prev, cur = p, 1, t
        while pk <= n:
            a[pk] = cur
            nxt = t * cur - (0 if bad else p * prev)
            prev, cur = cur, nxt
            pk *= p
    # multiplicativity
    spf = list(range(n + 1))
    for p in sympy.primerange(2, math.isqrt(n) + 1):
        for m in range(p * p, n + 1, p):
            if spf[m] == m:
                spf[m] = p
    for m in range(2, n + 1):
        p = spf[m]
        pk = p
        rest = m // p
        while rest % p == 0:
            rest //= p
            pk *= p
        if rest > 1:
            a[m] = a[pk] * a[rest]
    return a


def torsion_bound(E: EllipticCurve, nprimes: int = 20) -> int:
    M = E.minimal
    g = 0
    used = 0
    for p in sympy.primerange(3, 10 ** 6):
        if M.disc % p == 0:
            continue
        g = math.gcd(g, count_points(M.ainvs, p))
        used += 1
        if used >= nprimes or g == 1:
            break
    return g


def _integer_roots_cubic(A: int, C: int) -> list[int]:
    """Integer roots of x^3 + A x + C, exactly."""
    f = lambda x: x ** 3 + A * x + C
    bound = 1 + max(abs(A), abs(C))
    cuts = [-bound - 1]
    if A < 0:
        s = math.isqrt(-A // 3)
        cuts += [-s - 1, -s, s, s + 1]
    cuts.append(bound + 1)
    cuts = sorted(set(cuts))
    roots = set()
    for lo, hi in zip(cuts, cuts[1:]):
        flo, fhi = f(lo), f(hi)
        if flo == 0:
            roots.add(lo)
        if fhi == 0:
            roots.add(hi)
        if (flo < 0) == (fhi < 0) or flo == 0 or fhi == 0:
            continue
        a, b = lo, hi
        while b - a > 1:
            m = (a + b) // 2
            fm = f(m)
            if fm == 0:
                a = b = m
                break
            if (fm < 0) == (flo < 0):
                a = m
            else:
                b = m
        if f(a) == 0:
            roots.add(a)
        if f(b) == 0:
            roots.add(b)
    for x in range(-3, 4):
        if f(x) == 0:
            roots.add(x)
    return sorted(roots)


def _add(P, Q, A):
    """Group law on y^2 = x^3 + A x + B in affine coordinates; None is the origin."""
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2:
        if y1 == -y2:
            return None
        lam = (3 * x1 * x1 + A) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    return (x3, lam * (x1 - x3) - y1)


def _is_torsion(P, A, max_order=12) -> bool:
    Q = P
    for _ in range(max_order):
        if Q is None:
            return True
        if Q[0].denominator != 1 or Q[1].denominator != 1:
            return False
        Q = _add(Q, P, A)
    return Q is None


def torsion_points(E: EllipticCurve) -> list:
    """Affine torsion points on the short model y^2 = x^3 - 27 c4 x - 54 c6."""
    S = short_model(E.minimal)
    A, B = S.a4, S.a6
    disc = 4 * A ** 3 + 27 * B * B
    bound = torsion_bound(E)
    pts = [(Fraction(x), Fraction(0)) for x in _integer_roots_cubic(A, B)]
    if bound > len(pts) + 1:
        fac = sympy.factorint(abs(disc))
        ys = [1]
        for q, e in fac.items():
            ys = [y * q ** k for y in ys for k in range(e // 2 + 1)]
        for y in sorted(ys):
            for x in _integer_roots_cubic(A, B - y * y):
                for sy in (y, -y):
                    P = (Fraction(x), Fraction(sy))
                    if _is_torsion(P, A):
                        pts.append(P)
    return pts


def torsion_order(E: EllipticCurve) -> int:
    t = 1 + len(torsion_points(E))
    b = torsion_bound(E)
    if b % t:
        raise ArithmeticError(f"torsion {t} does not divide bound {b}")
    return t
