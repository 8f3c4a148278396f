"""Real and imaginary periods of the Neron differential via the AGM."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .curve import EllipticCurve


class PrecisionLoss(ArithmeticError):
    pass


@dataclass(frozen=True)
class RealPeriodData:
    omega_plus: mpmath.mpf
    omega_minus: mpmath.mpf
    c_infinity: int
    prec: int

    @property
    def omega(self) -> mpmath.mpf:
        """Integral of |dx/(2y+a1x+a3)| over E(R): c_infinity * omega_plus."""
        return self.c_infinity * self.omega_plus


def _cubic_roots(E: EllipticCurve):
    """Roots of 4x^3 + b2 x^2 + 2 b4 x + b6."""
    return mpmath.polyroots([4, E.b2, 2 * E.b4, E.b6], maxsteps=200, extraprec=2 * mpmath.mp.prec)


def real_periods(E: EllipticCurve, prec: int = 128) -> RealPeriodData:
    """Least positive real period and least positive imaginary period (divided by i)."""
    E = E.minimal
    with mpmath.workprec(prec + 32):
        roots = _cubic_roots(E)
        pi = mpmath.pi
        if E.disc > 0:
            e = sorted((mpmath.re(r) for r in roots), reverse=True)
            e1, e2, e3 = e
            if not (e1 > e2 > e3):
                raise PrecisionLoss("real roots not separated")
            op = pi / mpmath.agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2))
            om = pi / mpmath.agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e2 - e3))
            cinf = 2
        else:
            real = min(roots, key=lambda r: abs(mpmath.im(r)))
            e1 = mpmath.re(real)
            a = 3 * e1 + mpmath.mpf(E.b2) / 4
            b = mpmath.sqrt(3 * e1 * e1 + mpmath.mpf(E.b2) / 2 * e1 + mpmath.mpf(E.b4) / 2)
            if not (2 * b - a > 0 and 2 * b + a > 0):
                raise PrecisionLoss("degenerate AGM input")
            op = 2 * pi / mpmath.agm(2 * mpmath.sqrt(b), mpmath.sqrt(2 * b + a))
            om = 2 * pi / mpmath.agm(2 * mpmath.sqrt(b), mpmath.sqrt(2 * b - a))
            cinf = 1
    with mpmath.workprec(prec):
        return RealPeriodData(+op, +om, cinf, prec)


def real_period_quad(E: EllipticCurve, prec: int = 64) -> mpmath.mpf:
    """omega_plus by direct integration over the unbounded real component."""
    E = E.minimal
    with mpmath.workprec(prec + 32):
        roots = _cubic_roots(E)
        e1 = max(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-prec // 8))
        # g(x) = (x - e1) q(x); then x = e1 + t^2 removes the endpoint singularity
        q1 = E.b2 + 4 * e1
        q0 = 2 * E.b4 + q1 * e1
        f = lambda t: 4 / mpmath.sqrt(4 * (e1 + t * t) ** 2 + q1 * (e1 + t * t) + q0)
        val = mpmath.quad(f, [0, 1, mpmath.inf])
    return val
