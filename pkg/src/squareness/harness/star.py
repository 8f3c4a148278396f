"""Search for twists that kill an odd prime in Sha, and the parity of Sha at such primes."""

from __future__ import annotations

import math
from itertools import repeat
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import sympy

from .. import modsym as ms
from .. import newform as nf
from .. import ratlattice as rl
from ..elliptic import (
    RankPositive,
    RoundingAmbiguous,
    hypothesis_star_star,
    quadratic_twist,
    sha_an,
    torsion_order,
    twist_an,
)
from ..elliptic.lseries import _terms_needed
from .conj25 import Report
from .db import CurveRecord


@dataclass(frozen=True)
class StarRow:
    label: str
    N: int
    sha_an: str
    p: int
    found_D: int | None
    twist_sha_an: str | None
    p_divides_twist_sha: bool | None
    tried: int
    notes: str = ""

    @property
    def found(self) -> bool:
        return self.found_D is not None

    def recheck(self) -> bool:
        if self.found_D is None:
            return self.twist_sha_an is None
        s = Fraction(self.twist_sha_an)
        return (s.numerator % self.p == 0) == self.p_divides_twist_sha and not self.p_divides_twist_sha

    def as_dict(self) -> dict:
        return asdict(self)


def curve_sha(rec: CurveRecord, prec: int = 128) -> Fraction | None:
    """sha_an(E), or None when L(E, 1) = 0."""
    try:
        return sha_an(rec.curve, prec=prec, torsion=rec.torsion)
    except RankPositive:
        return None


def odd_sha_primes(s: Fraction | None) -> list[int]:
    if s is None or s.denominator != 1:
        return []
    return [p for p in sympy.primefactors(s.numerator) if p != 2]


def _search(rec: CurveRecord, p: int, bound: int, require: str, prec: int):
    """Smallest admissible D with N D^2 < bound, L(E_{-D}, 1) != 0 and p not dividing sha_an(E_{-D})."""
    E = rec.curve
    N = rec.N
    Dmax = math.isqrt(max(bound - 1, 0) // N)
    tried = 0
    for D in rl.fundamental_discriminants(Dmax):
        if N * D * D >= bound:
            continue
        if require == "gcd" and math.gcd(N, D) != 1:
            continue
        if require == "star" and not hypothesis_star_star(E, D):
            continue
        tried += 1
        Et = quadratic_twist(E, D)
        n = _terms_needed(Et.conductor, 1.2, 2.0 ** -min(prec, 60))
        try:
            s = sha_an(Et, prec=prec, an=twist_an(E, D, n), torsion=torsion_order(Et))
        except RankPositive:
            continue
        if s.numerator % p:
            return D, s, tried
    return None, None, tried


def _star_rows(rec: CurveRecord, bound: int, require: str, prec: int):
    s = curve_sha(rec, prec)
    rows = []
    for p in odd_sha_primes(s):
        try:
            D, st, tried = _search(rec, p, bound, require, prec)
            note = ""
        except RoundingAmbiguous as exc:
            D, st, tried, note = None, None, 0, f"rounding ambiguous: {exc}"
        rows.append(StarRow(
            rec.label, rec.N, str(s), p, D,
            None if st is None else str(st),
            None if st is None else st.numerator % p == 0,
            tried, note or ("" if D is not None else "not found in range"),
        ))
    return rows


def scan_hypothesis_star(db: list[CurveRecord], conductor_bound: int, bound: int = 130000,
                         require: str = "star", prec: int = 128, threads: int = 1) -> Report:
    """All (N, E, p) with p an odd prime dividing sha_an(E) for optimal E of conductor <= conductor_bound."""
    recs = sorted((r for r in db if r.optimal and r.N <= conductor_bound), key=lambda r: r.sort_key)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_star_rows, recs, repeat(bound), repeat(require), repeat(prec)))
    else:
        results = [_star_rows(r, bound, require, prec) for r in recs]
    rep = Report("star", {"conductor_bound": conductor_bound, "bound": bound, "require": require, "precision_bits": prec})
    for rows in results:
        rep.rows.extend(rows)
    return rep


def star_summary(rep: Report) -> dict:
    rows = rep.rows
    return {
        "tuples": len(rows),
        "found": sum(r.found for r in rows),
        "not_found": sum(not r.found for r in rows),
        "first_odd_sha_conductor": min((r.N for r in rows), default=None),
    }


def first_odd_sha_conductor(db: list[CurveRecord], conductor_bound: int, prec: int = 128) -> int | None:
    """Smallest N <= conductor_bound with an optimal curve whose sha_an has an odd prime factor."""
    for rec in sorted(db, key=lambda r: r.sort_key):
        if rec.N > conductor_bound:
            break
        if rec.optimal and odd_sha_primes(curve_sha(rec, prec)):
            return rec.N
    return None


# -- parity at primes dividing Sha -------------------------------------------------

@dataclass(frozen=True)
class ParityFinding:
    label: str
    N: int
    q: int
    sha_an: str
    lratio: str
    star_D: int | None
    ord_q_sha: int
    ord_q_lratio: int

    @property
    def both_even(self) -> bool:
        return self.ord_q_sha % 2 == 0 and self.ord_q_lratio % 2 == 0

    def as_dict(self) -> dict:
        d = asdict(self)
        d["both_even"] = self.both_even
        return d


def parity_findings(db: list[CurveRecord], conductor_bound: int = 10**9, Dmax: int = 100, prec: int = 128) -> list[ParityFinding]:
    """Prime-level rank-0 curves with an odd q | sha_an, q prime to the numerator of (N-1)/12.

    Only cases where hypothesis_star_search finds a D are reported.
    """
    out = []
    for rec in sorted(db, key=lambda r: r.sort_key):
        if rec.N > conductor_bound:
            break
        if not rec.optimal or not sympy.isprime(rec.N):
            continue
        s = curve_sha(rec, prec)
        qs = [q for q in odd_sha_primes(s) if Fraction(rec.N - 1, 12).numerator % q]
        if not qs:
            continue
        f = nf.curve_factor(rec.curve, ms.cached_space(rec.N))
        lr = nf.lratio_plus(f).value
        for q in qs:
            D = nf.hypothesis_star_search(f, q, Dmax)
            if D is None:
                continue
            out.append(ParityFinding(rec.label, rec.N, q, str(s), str(lr), D,
                                     rl.valuation(s, q), rl.valuation(lr, q)))
    return out
