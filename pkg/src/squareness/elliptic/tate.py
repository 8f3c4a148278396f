"""Tate's algorithm: Kodaira symbol, Tamagawa number and conductor exponent at p."""

from __future__ import annotations

from dataclasses import dataclass

import sympy

from .. import ratlattice as rl
from .curve import EllipticCurve, transform


@dataclass(frozen=True)
class LocalData:
    p: int
    kodaira: str
    ord_disc: int
    c_p: int
    ord_conductor: int
    model: tuple

    @property
    def reduction(self) -> str:
        if self.ord_conductor == 0:
            return "good"
        return "multiplicative" if self.ord_conductor == 1 else "additive"


def _v(x: int, p: int) -> int:
    return 10 ** 6 if x == 0 else rl.valuation(x, p)


def _roots_mod(coeffs, p):
    """Roots in F_p of the polynomial with integer coefficients (highest first)."""
    out = []
    for x in range(p):
        acc = 0
        for c in coeffs:
            acc = (acc * x + c) % p
        if acc == 0:
            out.append(x)
    return out


def _quad_has_roots(a, b, c, p):
    return bool(_roots_mod([a, b, c], p))


def _double_root(a, b, c, p):
    """The repeated root mod p of a x^2 + b x + c (a a unit, discriminant 0 mod p)."""
    roots = _roots_mod([a, b, c], p)
    if len(roots) != 1:
        raise ArithmeticError("expected a double root")
    return roots[0]


def _singular_point(E: EllipticCurve, p: int):
    a1, a2, a3, a4, a6 = E.ainvs
    if p <= 3:
        for x in range(p):
            for y in range(p):
                F = y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6
                Fx = a1 * y - 3 * x * x - 2 * a2 * x - a4
                Fy = 2 * y + a1 * x + a3
                if F % p == 0 and Fx % p == 0 and Fy % p == 0:
                    return x, y
        raise ArithmeticError("no singular point found")
    b2, b4, b6 = E.b2, E.b4, E.b6
    inv2 = pow(2, -1, p)
    for x in range(p):
        if (4 * x ** 3 + b2 * x * x + 2 * b4 * x + b6) % p == 0 and (12 * x * x + 2 * b2 * x + 2 * b4) % p == 0:
            return x, (-(a1 * x + a3) * inv2) % p
    raise ArithmeticError("no singular point found")


def _result(p, kod, E, c, f):
    return LocalData(p, kod, _v(E.disc, p), c, f, E.ainvs)


def tate_local(E: EllipticCurve, p: int) -> LocalData:
    """Local data at p; non-minimal models are rescaled along the way."""
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    while True:
        n = _v(E.disc, p)
        if n == 0:
            return _result(p, "I0", E, 1, 0)
        x0, y0 = _singular_point(E, p)
        E = transform(E, x0, 0, y0)
        a1, a2, a3, a4, a6 = E.ainvs
        if E.c4 % p:
            split = _quad_has_roots(1, a1, -a2, p)
            c = n if split else (2 if n % 2 == 0 else 1)
            return _result(p, f"I{n}", E, c, 1)
        if _v(a6, p) < 2:
            return _result(p, "II", E, 1, n)
        if _v(E.b8, p) < 3:
            return _result(p, "III", E, 2, n - 1)
        if _v(E.b6, p) < 3:
            c = 3 if _quad_has_roots(1, a3 // p, -(a6 // p ** 2), p) else 1
            return _result(p, "IV", E, c, n - 2)
        if p == 2:
            for s in range(2):
                for t in range(4):
                    try:
                        F = transform(E, 0, s, t)
                    except ValueError:
                        continue
                    if F.a1 % 2 == 0 and F.a2 % 2 == 0 and F.a3 % 4 == 0 and F.a4 % 4 == 0 and F.a6 % 8 == 0:
                        break
                else:
                    continue
                break
            else:
                raise ArithmeticError("step 6 transform not found")
            E = F
        else:
            inv2 = pow(2, -1, p)
            s = (-a1 * inv2) % p
            t = p * ((-(a3 // p) * inv2) % p)
            E = transform(E, 0, s, t)
        a1, a2, a3, a4, a6 = E.ainvs
        b, c, d = a2 // p, a4 // p ** 2, a6 // p ** 3
        dP = (b * b * c * c - 4 * c ** 3 - 4 * b ** 3 * d - 27 * d * d + 18 * b * c * d) % p
        if dP:
            cp = 1 + len(_roots_mod([1, b, c, d], p))
            return _result(p, "I0*", E, cp, n - 4)
        mult = None
        for r in range(p):
            v0 = (r ** 3 + b * r * r + c * r + d) % p
            v1 = (3 * r * r + 2 * b * r + c) % p
            if v0 == 0 and v1 == 0:
                mult = 3 if (3 * r + b) % p == 0 else 2
                break
        if mult is None:
            raise ArithmeticError("no multiple root")
        E = transform(E, r * p, 0, 0)
        if mult == 2:
            ix = iy = 3
            mx = my = p * p
            cp = None
            while cp is None:
                xa2, xa3 = E.a2 // p, E.a3 // my
                xa4, xa6 = E.a4 // (p * mx), E.a6 // (mx * my)
                if (xa3 * xa3 + 4 * xa6) % p:
                    cp = 4 if _quad_has_roots(1, xa3, -xa6, p) else 2
                    break
                rr = _double_root(1, xa3, -xa6, p)
                E = transform(E, 0, 0, my * rr)
                my *= p
                iy += 1
                xa2, xa3 = E.a2 // p, E.a3 // my
                xa4, xa6 = E.a4 // (p * mx), E.a6 // (mx * my)
                if (xa4 * xa4 - 4 * xa2 * xa6) % p:
                    cp = 4 if _quad_has_roots(xa2, xa4, xa6, p) else 2
                    break
                rr = _double_root(xa2, xa4, xa6, p)
                E = transform(E, mx * rr, 0, 0)
                mx *= p
                ix += 1
            m = ix + iy - 5
            return _result(p, f"I{m}*", E, cp, n - 4 - m)
        xa3, xa6 = E.a3 // p ** 2, E.a6 // p ** 4
        if (xa3 * xa3 + 4 * xa6) % p:
            cp = 3 if _quad_has_roots(1, xa3, -xa6, p) else 1
            return _result(p, "IV*", E, cp, n - 6)
        rr = _double_root(1, xa3, -xa6, p)
        E = transform(E, 0, 0, p * p * rr)
        if _v(E.a4, p) < 4:
            return _result(p, "III*", E, 2, n - 7)
        if _v(E.a6, p) < 6:
            return _result(p, "II*", E, 1, n - 8)
        E = transform(E, 0, 0, 0, p)
