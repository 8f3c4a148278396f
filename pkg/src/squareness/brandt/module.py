"""The supersingular module: Brandt matrices, Gross vectors and the index of Gross's formula.

Divisors are row vectors in the basis of ideal classes and Hecke operators act
on the right: T_m [E_i] = sum_j B(m)_ij [E_j].  With this convention
deg(v B(m)) = sigma(m) deg(v) for m prime to N and a_E B(l) = (l+1) a_E.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .. import ratlattice as rl
from .ideals import IdealClassSet, ideal_classes, norm_gram, units
from .quaternion import NotPrime, QuaternionData, basis_of, build_quaternion, conj_lattice, product, short_vectors, theta_counts


class ZeroVector(ArithmeticError):
    pass


class EigenvalueMismatch(ArithmeticError):
    pass


class NotCoprime(ValueError):
    pass


@dataclass(eq=False)
class BrandtModule:
    classes: IdealClassSet
    _theta: dict = field(default_factory=dict, repr=False)
    _theta_bound: int = 0
    _mats: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def N(self) -> int:
        return self.classes.q.N

    @property
    def q(self) -> QuaternionData:
        return self.classes.q

    @property
    def rank(self) -> int:
        return self.classes.count

    @property
    def weights(self) -> tuple:
        return self.classes.weights

    @property
    def a_E(self) -> list[Fraction]:
        return [Fraction(1, w) for w in self.weights]

    @staticmethod
    def deg(v) -> Fraction:
        return sum((Fraction(x) for x in v), Fraction(0))

    def _extend_theta(self, bound: int):
        c = self.classes
        n = self.rank
        new = {}
        for i in range(n):
            for j in range(n):
                P = product(self.q.algebra, conj_lattice(c.ideals[j].lattice), c.ideals[i].lattice)
                G = norm_gram(self.q, P, c.ideals[i].norm * c.ideals[j].norm)
                new[(i, j)] = theta_counts(G, bound)
        self._theta = new
        self._theta_bound = bound

    def brandt_matrix(self, m: int) -> list[list[int]]:
        """B(m)_ij = #{x in conj(I_j) I_i : nr(x) = m nr(I_i) nr(I_j)} / (2 w_j)."""
        if m < 1:
            raise ValueError("m must be positive")
        with self._lock:
            if m in self._mats:
                return self._mats[m]
            if m > self._theta_bound:
                self._extend_theta(max(m, 2 * self._theta_bound, 13))
            n = self.rank
            B = []
            for i in range(n):
                row = []
                for j in range(n):
                    cnt = self._theta[(i, j)][m] if m > 0 else 0
                    q, r = divmod(cnt, 2 * self.weights[j])
                    if r:
                        raise ArithmeticError("representation count not divisible by 2 w_j")
                    row.append(q)
                B.append(row)
            self._mats[m] = B
            return B

    def brandt_dm(self, m: int) -> DomainMatrix:
        return rl.qmat(self.brandt_matrix(m), self.rank)

    def degree_zero_basis(self) -> DomainMatrix:
        n = self.rank
        rows = [[(1 if k == i else 0) - (1 if k == 0 else 0) for k in range(n)] for i in range(1, n)]
        return rl.qmat(rows, n) if rows else rl.qzeros(0, n)

    def hecke_on_degree_zero(self, m: int) -> DomainMatrix:
        return rl.restrict(self.degree_zero_basis(), self.brandt_dm(m))

    def charpoly_degree_zero(self, m: int) -> list[Fraction]:
        return rl.charpoly(self.hecke_on_degree_zero(m))


_cache: dict = {}
_cache_lock = threading.Lock()


def build_brandt(N: int) -> BrandtModule:
    if not sympy.isprime(N):
        raise NotPrime(f"{N} is not prime")
    with _cache_lock:
        M = _cache.get(N)
        if M is None:
            M = BrandtModule(ideal_classes(build_quaternion(N)))
            _cache[N] = M
    return M


def brandt_matrix(m: BrandtModule, l: int) -> list[list[int]]:
    return m.brandt_matrix(l)


# -- optimal embeddings ----------------------------------------------------------

def _generator_charpoly(D: int) -> tuple[int, int]:
    """(trace, norm) of the standard generator of the order of discriminant -D."""
    if D % 4 == 3:
        return 1, (1 + D) // 4
    return 0, D // 4


def _elements_with_charpoly(q: QuaternionData, O, t: int, nm: int) -> list:
    B = basis_of(O)
    out = []
    for x, v in short_vectors(norm_gram(q, O), nm):
        if v != nm:
            continue
        el = tuple(sum(x[k] * B[k][s] for k in range(4)) for s in range(4))
        if q.algebra.trd(el) == t:
            out.append(el)
    return out


def embedding_numbers(m: BrandtModule, D: int, check_orbits: bool = True) -> list[int]:
    """h_i(-D): optimal embeddings of O_{-D} into R_i modulo conjugation by R_i^*."""
    D = abs(int(D))
    if not rl.is_fundamental_discriminant(-D):
        raise rl.NotFundamental(f"-{D} is not a fundamental discriminant")
    if math.gcd(D, m.N) != 1:
        raise NotCoprime(f"gcd({D}, {m.N}) != 1")
    t, nm = _generator_charpoly(D)
    _, u = rl.class_number_unit(D)
    A = m.q.algebra
    out = []
    for R, w in zip(m.classes.right_orders, m.weights):
        els = _elements_with_charpoly(m.q, R, t, nm)
        h, r = divmod(len(els) * u, w)
        if r:
            raise ArithmeticError("embedding count not divisible by orbit size")
        if check_orbits:
            U = units(m.q, R)
            seen, orbits = set(), 0
            for x in els:
                if x in seen:
                    continue
                orbits += 1
                for g in U:
                    seen.add(A.mul(A.mul(g, x), A.conj(g)))
            if orbits != h:
                raise ArithmeticError("orbit count disagrees with the stabiliser formula")
        out.append(h)
    return out


@dataclass(frozen=True)
class GrossVector:
    D: int
    chi: tuple
    chi0: tuple
    embedding_numbers: tuple


def winding_numerator(N: int) -> int:
    return Fraction(N - 1, 12).numerator


def gross_vector(m: BrandtModule, D: int) -> GrossVector:
    h = embedding_numbers(m, D)
    _, u = rl.class_number_unit(abs(D))
    chi = [Fraction(x, 2 * u) for x in h]
    dchi = BrandtModule.deg(chi)
    c = Fraction(12, m.N - 1) * dchi
    chi0 = [x - c * a for x, a in zip(chi, m.a_E)]
    return GrossVector(abs(D), tuple(chi), tuple(chi0), tuple(h))


# -- the index of Gross's formula ------------------------------------------------

@dataclass(eq=False)
class BrandtProjection:
    """Projection of P (x) Q onto the eigenspace matching a modular-symbol factor."""

    module: BrandtModule
    d: int
    basis: DomainMatrix
    proj: DomainMatrix

    def project(self, v) -> list[Fraction]:
        return rl.to_rows(rl.qmat([v], self.module.rank) * self.proj)[0]


def _hecke_primes(N: int) -> list[int]:
    return list(sympy.primerange(2, max(-(-(N + 1) // 6), 13) + 1))


def match_factor(m: BrandtModule, f) -> BrandtProjection:
    """Cut out V_f in P (x) Q using the T_l minimal polynomials of the factor f."""
    if f.N != m.N:
        raise EigenvalueMismatch("levels differ")
    n = m.rank
    V = rl.qident(n)
    images = []
    for l in _hecke_primes(m.N):
        if l == m.N:
            continue
        poly = f.minpoly(l)
        P = rl.mat_poly(poly, m.brandt_dm(l))
        images.append(P)
        K = rl.left_kernel(rl.mat_poly(poly, rl.restrict(V, m.brandt_dm(l))))
        V = K * V if K.shape[0] else rl.qzeros(0, n)
        if V.shape[0] < f.d:
            break
    if V.shape[0] != f.d:
        raise EigenvalueMismatch(f"eigenspace of dimension {V.shape[0]}, expected {f.d}")
    W = rl.row_basis(DomainMatrix.vstack(*images))
    if W.shape[0] != n - f.d:
        raise EigenvalueMismatch("Hecke complement has the wrong dimension")
    proj = V.vstack(W).inv()[:, : f.d]
    return BrandtProjection(m, f.d, V, proj)


def hecke_module(pi: BrandtProjection, v) -> rl.Lattice:
    """pi(T v) as a lattice: close pi(v) under the Brandt operators up to the Sturm bound."""
    m = pi.module
    ops = [rl.restrict(pi.basis, m.brandt_dm(l)) for l in sympy.primerange(2, -(-(m.N + 1) // 6) + 2)]
    L = rl.Lattice.from_generators([pi.project(v)], pi.d)
    if pi.d == 1:
        return L
    while True:
        B = rl.qmat(L.basis, pi.d)
        gens = list(L.basis)
        for T in ops:
            gens += rl.to_rows(B * T)
        L2 = rl.Lattice.from_generators(gens, pi.d)
        if L2 == L:
            return L
        L = L2


def brandt_index(f, m: BrandtModule, D: int) -> Fraction:
    """[pi(P^0) : pi(T n chi0_D)]."""
    pi = match_factor(m, f)
    g = gross_vector(m, D)
    n = winding_numerator(m.N)
    v = [n * x for x in g.chi0]
    if any(Fraction(x).denominator != 1 for x in v):
        raise ArithmeticError("n chi0 is not integral")
    pv = pi.project(v)
    if not any(pv):
        raise ZeroVector(f"pi(n chi0_{D}) = 0")
    P0 = rl.Lattice.from_generators([pi.project(r) for r in rl.to_rows(m.degree_zero_basis())], pi.d)
    M = hecke_module(pi, v)
    return rl.lattice_index(P0, M, dim=pi.d)
