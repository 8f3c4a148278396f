"""Hecke decomposition of the cuspidal space and the lattice-index L-ratios.

For a Q-irreducible Hecke factor f the space V_f is the common kernel of
p_l(T_l) on the full modular-symbol space, where p_l is the minimal
polynomial of T_l on f.  Its Hecke-stable complement is the sum of the
images of the same operators, and pi is the projection along it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from . import modsym as ms
from . import ratlattice as rl
from .ratlattice import Lattice


class NoMatch(ValueError):
    pass


class NotPrimeLevel(ValueError):
    pass


class ZeroTwist(ValueError):
    pass


def sturm_bound(N: int) -> int:
    """ceil(index of Gamma_0(N) / 6), the weight-2 Sturm bound."""
    idx = N
    for p in sympy.primefactors(N):
        idx = idx * (p + 1) // p
    return -(-idx // 6)


def hecke_primes(N: int, bound: int | None = None) -> list[int]:
    return list(sympy.primerange(2, (bound if bound is not None else sturm_bound(N)) + 1))


@dataclass(frozen=True)
class LRatio:
    value: Fraction
    two_ambiguity: bool = False

    @property
    def odd(self) -> Fraction:
        return rl.odd_part(self.value) if self.value else Fraction(0)

    def __str__(self):
        return str(self.value)


@dataclass(eq=False)
class NewformFactor:
    space: ms.ModSymSpace
    d: int
    annihilator: list  # [(prime, monic irreducible poly coefficients)]
    basis: DomainMatrix  # 2d rows spanning V_f inside the full space
    proj: DomainMatrix  # full space -> V_f coordinates
    label: str = ""
    _tf: dict = field(default_factory=dict, repr=False)
    _lat: Optional[tuple] = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return self.space.N

    def project(self, coords) -> list[Fraction]:
        return rl.to_rows(rl.qmat([coords], self.space.dim) * self.proj)[0]

    def hecke_on_vf(self, p: int) -> DomainMatrix:
        T = self._tf.get(p)
        if T is None:
            T = rl.restrict(self.basis, self.space.hecke_dm(p))
            self._tf[p] = T
        return T

    def charpoly(self, p: int) -> list[Fraction]:
        return rl.charpoly(self.hecke_on_vf(p))

    @property
    def eigen_charpolys(self) -> dict:
        return {p: self.charpoly(p) for p in hecke_primes(self.N, 13)}

    def minpoly(self, p: int) -> list[Fraction]:
        """Radical of the characteristic polynomial of T_p on V_f."""
        facs = rl.factor_poly(self.charpoly(p))
        P = sympy.Integer(1)
        x = sympy.Symbol("x")
        for c, _ in facs:
            P = P * rl.poly_expr(c, x).as_expr()
        return [rl.to_rat(c) for c in sympy.Poly(P, x).all_coeffs()]

    def eigenvalue(self, p: int) -> int:
        """a_p for a factor of dimension one."""
        if self.d != 1:
            raise ValueError("eigenvalue only defined for d = 1")
        T = rl.to_rows(self.hecke_on_vf(p))
        a = T[0][0]
        assert T == [[a, 0], [0, a]]
        return int(a)

    def lattices(self) -> tuple[Lattice, Lattice, Lattice]:
        """(Lambda, Lambda^+, Lambda^-): pi of the cuspidal lattice and its sign parts."""
        if self._lat is None:
            S = self.space
            gens = rl.to_rows(rl.qmat(S.cuspidal.basis, S.dim) * self.proj)
            lam = Lattice.from_generators(gens, 2 * self.d)
            sf = rl.restrict(self.basis, S.star)
            parts = []
            for s in (1, -1):
                K = rl.left_kernel(sf - rl.qident(2 * self.d) * QQ(s))
                parts.append(rl.intersect_with_subspace(lam, rl.to_rows(K)))
            self._lat = (lam, parts[0], parts[1])
        return self._lat

    def hecke_closure(self, vecs) -> Lattice:
        """The T-module generated by the given vectors of V_f."""
        L = Lattice.from_generators(vecs, 2 * self.d)
        if self.d == 1:
            return L
        ops = [self.hecke_on_vf(p) for p in hecke_primes(self.N)]
        while True:
            B = rl.qmat(L.basis, 2 * self.d)
            gens = list(L.basis)
            for T in ops:
                gens += rl.to_rows(B * T)
            L2 = Lattice.from_generators(gens, 2 * self.d)
            if L2 == L:
                return L
            L = L2


def _factor_from_polys(space: ms.ModSymSpace, polys: list, d: int, label: str = "") -> NewformFactor:
    n = space.dim
    V = rl.qident(n)
    images = []
    for p, poly in polys:
        P = rl.mat_poly(poly, space.hecke_dm(p))
        images.append(P)
        Tv = rl.restrict(V, space.hecke_dm(p))
        K = rl.left_kernel(rl.mat_poly(poly, Tv))
        V = K * V
    if V.shape[0] != 2 * d:
        raise NoMatch(f"expected a {2 * d}-dimensional eigenspace, found {V.shape[0]}")
    W = rl.row_basis(DomainMatrix.vstack(*images))
    if W.shape[0] != n - 2 * d:
        raise RuntimeError("Hecke complement has the wrong dimension")
    B = V.vstack(W) if W.shape[0] else V
    proj = B.inv()[:, : 2 * d]
    return NewformFactor(space, d, list(polys), V, proj, label)


def _label(k: int) -> str:
    s = ""
    k += 1
    while k:
        k, r = divmod(k - 1, 26)
        s = chr(97 + r) + s
    return s


def decompose(space: ms.ModSymSpace, bound: int | None = None, seed: int = 1) -> list[NewformFactor]:
    """Q-irreducible new factors of the cuspidal space (old and Eisenstein parts excluded)."""
    N = space.N
    C = space.cuspidal_basis
    if C.shape[0] == 0:
        return []
    primes = [p for p in hecke_primes(N, bound) if N % p]
    # pieces: (basis rows, polys, final)
    pieces = [(C, [], False)]
    for p in primes:
        if all(f for _, _, f in pieces):
            break
        new = []
        T = space.hecke_dm(p)
        for B, polys, final in pieces:
            if final:
                new.append((B, polys, final))
                continue
            Tb = rl.restrict(B, T)
            for poly, m in rl.factor_poly(rl.charpoly(Tb)):
                K = rl.left_kernel(rl.mat_poly(poly, Tb))
                if K.shape[0] != m * (len(poly) - 1):
                    raise RuntimeError("Hecke operator is not semisimple on the cuspidal space")
                new.append((K * B, polys + [(p, poly)], m == 2))
        pieces = new
    rng = random.Random(seed)
    out = []
    for B, polys, final in pieces:
        dim = B.shape[0]
        if final:
            out.append((dim // 2, polys))
            continue
        # decide the orbit degree with a random Hecke combination
        T = None
        for p in primes[:6]:
            Tb = rl.restrict(B, space.hecke_dm(p)) * QQ(rng.randint(1, 9))
            T = Tb if T is None else T + Tb
        facs = rl.factor_poly(rl.charpoly(T))
        if len(facs) != 1:
            raise RuntimeError("Hecke eigensystems not separated below the Sturm bound")
        poly, m = facs[0]
        if m == 2:
            out.append((len(poly) - 1, polys))
    def key(t):
        d, polys = t
        return (d, [(p, [(c.numerator, c.denominator) for c in poly]) for p, poly in polys])
    out.sort(key=key)
    return [_factor_from_polys(space, polys, d, _label(k)) for k, (d, polys) in enumerate(out)]


def factor_from_eigenvalues(space: ms.ModSymSpace, ap, label: str = "") -> NewformFactor:
    """The rational factor with T_p-eigenvalues ap(p) for good p, cut out prime by prime."""
    N = space.N
    n = space.dim
    V = rl.qident(n)
    polys = []
    for p in hecke_primes(N, max(sturm_bound(N), 13)):
        if N % p == 0:
            continue
        a = ap(p)
        Tv = rl.restrict(V, space.hecke_dm(p))
        K = rl.left_kernel(Tv - rl.qident(V.shape[0]) * QQ(a))
        polys.append((p, [Fraction(1), Fraction(-a)]))
        V = K * V if K.shape[0] else rl.qzeros(0, n)
        if V.shape[0] <= 2:
            break
    if V.shape[0] != 2:
        raise NoMatch(f"no rational newform of level {N} with these eigenvalues")
    return _factor_from_polys(space, polys, 1, label)


def match_curve(factors: list[NewformFactor], E, bound: int = 13) -> NewformFactor:
    """The unique d = 1 factor whose eigenvalues agree with a_p(E) for good p <= bound."""
    if not factors:
        raise NoMatch("no factors")
    N = factors[0].N
    if E.conductor != N:
        raise NoMatch(f"curve conductor {E.conductor} differs from level {N}")
    hits = []
    for f in factors:
        if f.d != 1:
            continue
        if all(f.eigenvalue(p) == E.ap(p) for p in hecke_primes(N, bound) if N % p):
            hits.append(f)
    if len(hits) != 1:
        raise NoMatch(f"{len(hits)} factors agree with the curve")
    return hits[0]


def curve_factor(E, space: ms.ModSymSpace | None = None) -> NewformFactor:
    """Factor attached to an elliptic curve of conductor N, without a full decomposition."""
    space = space or ms.cached_space(E.conductor)
    if space.N != E.conductor:
        raise NoMatch("level mismatch")
    return factor_from_eigenvalues(space, E.ap)


def lratio_plus(f: NewformFactor, normalized: bool | None = None) -> LRatio:
    """[Lambda^+ : pi(T e)] = L(A_f, 1)/Omega^+, computed as [Lambda^+ : pi(T n e)]/n^d at prime level."""
    N = f.N
    prime = sympy.isprime(N)
    if normalized is None:
        normalized = prime
    if normalized and not prime:
        raise NotPrimeLevel(f"{N} is not prime")
    v = f.project(ms.winding_symbol(f.space).coords)
    if not any(v):
        return LRatio(Fraction(0))
    _, lam_plus, _ = f.lattices()
    n = ms.winding_multiple(N) if normalized else 1
    M = f.hecke_closure([[n * a for a in v]])
    idx = rl.lattice_index(lam_plus, M, dim=f.d)
    return LRatio(idx / n ** f.d)


def twisted_index(f: NewformFactor, D: int) -> LRatio:
    """[Lambda^- : pi(T e_D)]; the twisted algebraic L-value up to a power of 2."""
    e = ms.twisted_element(f.space, D)
    v = f.project(e.coords)
    if not any(v):
        raise ZeroTwist(f"pi(e_{D}) = 0")
    _, _, lam_minus = f.lattices()
    M = f.hecke_closure([v])
    return LRatio(rl.lattice_index(lam_minus, M, dim=f.d), True)


def _resultant(p1, p2) -> int:
    x = sympy.Symbol("x")
    r = sympy.resultant(rl.poly_expr(p1, x).as_expr(), rl.poly_expr(p2, x).as_expr(), x)
    return int(r)


def eigenform_congruences(space: ms.ModSymSpace, q: int, factors=None, bound: int | None = None):
    """Pairs of factors whose T_l minimal polynomials share a root mod q for every l <= bound."""
    if q % 2 == 0:
        raise ValueError("q must be odd")
    factors = decompose(space) if factors is None else factors
    primes = hecke_primes(space.N, bound)
    out = []
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            f, g = factors[i], factors[j]
            if all(_resultant(f.minpoly(p), g.minpoly(p)) % q == 0 for p in primes):
                out.append(((f, g), q))
    return out


def hypothesis_star_search(f: NewformFactor, q: int, Dmax: int) -> Optional[int]:
    """Smallest D <= Dmax with pi(e_D) != 0 and q not dividing the odd part of the twisted index."""
    N = f.N
    if q % 2 == 0:
        raise ValueError("q must be odd")
    if sympy.isprime(N) and Fraction(N - 1, 12).numerator % q == 0:
        raise ValueError("q divides the numerator of (N-1)/12")
    for D in rl.fundamental_discriminants(Dmax):
        if math.gcd(D, N) != 1:
            continue
        try:
            t = twisted_index(f, D)
        except ZeroTwist:
            continue
        if t.odd.numerator % q:
            return D
    return None
