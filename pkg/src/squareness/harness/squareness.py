"""The product of the two algebraic L-values against the square of the Gross index.

The left side comes from modular symbols only, the right side from the
supersingular module only; the two never share intermediate data.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import sympy

from .. import modsym as ms
from .. import newform as nf
from .. import ratlattice as rl
from ..brandt import module as bm


class ZeroLValue(ArithmeticError):
    pass


@dataclass(frozen=True)
class SquarenessVerdict:
    N: int
    factor: str
    d: int
    D: int
    kronecker: int
    lratio: str
    twisted_index: str
    n: int
    lhs: str
    brandt_index: str
    rhs: str
    lhs_away: str
    rhs_away: str
    verdict: bool
    is_square: bool
    eisenstein_primes: tuple
    verdict_away_from_eisenstein: bool
    zero_modsym: bool = False
    zero_brandt: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


def _zero_record(N, f, D, k, zm, zb) -> SquarenessVerdict:
    return SquarenessVerdict(N, f.label, f.d, D, k, "", "", ms.winding_multiple(N), "0", "", "0", "0", "0",
                             zm == zb, zm and zb, (), zm == zb, zm, zb)


def squareness_check(N: int, f: nf.NewformFactor, D: int) -> SquarenessVerdict:
    """Compare lratio * twisted_index * n^(2d) with brandt_index^2 away from 2 and the primes of D.

    When (-D|N) = +1 both sides must vanish; the record then carries the two
    zero flags and verdict says whether they agree.  A factor with L(f, 1) = 0
    is only accepted in that case.
    """
    if not sympy.isprime(N):
        raise nf.NotPrimeLevel(f"{N} is not prime")
    if f.N != N:
        raise ValueError("factor level differs from N")
    if math.gcd(D, N) != 1:
        raise bm.NotCoprime(f"gcd({D}, {N}) != 1")
    if not rl.is_fundamental_discriminant(-D):
        raise rl.NotFundamental(f"-{D} is not a fundamental discriminant")
    k = rl.kronecker(-D, N)
    n = ms.winding_multiple(N)

    lr = nf.lratio_plus(f).value
    if lr == 0 and k != 1:
        raise ZeroLValue(f"L(f, 1) = 0 for factor {f.label} of level {N}")
    try:
        tw = nf.twisted_index(f, D).value
    except nf.ZeroTwist:
        tw = Fraction(0)
    M = bm.build_brandt(N)
    try:
        bi = bm.brandt_index(f, M, D)
    except bm.ZeroVector:
        bi = Fraction(0)

    zero_m, zero_b = lr * tw == 0, bi == 0
    if zero_m or zero_b:
        if k != 1 and zero_m and zero_b:
            raise ZeroLValue(f"twisted L-value vanishes for N={N}, D={D}")
        return _zero_record(N, f, D, k, zero_m, zero_b)

    lhs = lr * tw * n ** (2 * f.d)
    rhs = bi * bi
    S = {2} | set(rl.prime_divisors(D))
    la, ra = rl.away_from(S, lhs), rl.away_from(S, rhs)
    eis = tuple(p for p in rl.prime_divisors(n) if p not in S)
    S2 = S | set(eis)
    return SquarenessVerdict(
        N, f.label, f.d, D, k, str(lr), str(tw), n, str(lhs), str(bi), str(rhs), str(la), str(ra),
        la == ra, la == ra and rl.is_square_rat(la), eis,
        rl.away_from(S2, lhs) == rl.away_from(S2, rhs),
    )


def rank_zero_factors(N: int) -> list[nf.NewformFactor]:
    """Factors of S_2(Gamma_0(N)) with L(f, 1) != 0."""
    return [f for f in nf.decompose(ms.cached_space(N)) if nf.lratio_plus(f).value != 0]
