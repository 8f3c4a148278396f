"""Modular symbols for Gamma_0(N) in the Manin-symbol presentation.

A Manin symbol (c:d) in P^1(Z/N) stands for the path g{0, oo} = {b/d, a/c}
where g = [[a, b], [c, d]] lies in SL_2(Z).  Vectors are rows; every operator
matrix acts on the right, so the image of a vector x under T is x*T.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from . import ratlattice as rl
from .ratlattice import Lattice, NotFundamental

oo = "oo"


class NotPrime(ValueError):
    pass


class NotCoprime(ValueError):
    pass


def genus(N: int) -> int:
    """Genus of X_0(N) from the classical formula."""
    fac = sympy.factorint(N)
    mu = N
    for p in fac:
        mu = mu * (p + 1) // p
    nu2 = 0 if N % 4 == 0 else math.prod(1 + rl.kronecker(-4, p) for p in fac)
    nu3 = 0 if N % 9 == 0 else math.prod(1 + rl.kronecker(-3, p) for p in fac)
    cusps = cusp_count(N)
    g = 1 + Fraction(mu, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(cusps, 2)
    assert g.denominator == 1
    return int(g)


def cusp_count(N: int) -> int:
    return sum(sympy.totient(math.gcd(d, N // d)) for d in sympy.divisors(N))


def heilbronn(n: int) -> list[tuple[int, int, int, int]]:
    """Matrices [[a,b],[c,d]] with ad-bc = n, a > b >= 0, d > c >= 0."""
    out = []
    for a in range(1, n + 1):
        for d in range(1, n + 2 - a):
            m = a * d - n
            if m < 0:
                continue
            if m == 0:
                for c in range(d):
                    out.append((a, 0, c, d))
                for b in range(1, a):
                    out.append((a, b, 0, d))
                continue
            for b in range(1, a):
                if m % b == 0:
                    c = m // b
                    if c < d:
                        out.append((a, b, c, d))
    return out


def _xgcd(a: int, b: int):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _xgcd(b, a % b)
    return g, y, x - (a // b) * y


def _convergents(a: int, b: int):
    """Convergents p_k/q_k of a/b (b > 0), starting with k = 0."""
    pp, qp = 1, 0
    ppp, qpp = 0, 1
    while b:
        t = a // b
        a, b = b, a - t * b
        p, q = t * pp + ppp, t * qp + qpp
        yield p, q
        ppp, qpp, pp, qp = pp, qp, p, q


class ModSymSpace:
    """Full space of weight-2 modular symbols for Gamma_0(N) over Q."""

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("level must be positive")
        self.N = N
        self._lock = threading.Lock()
        self.hecke_cache: dict[int, DomainMatrix] = {}
        self._build_p1()
        self._build_quotient()
        self._build_boundary()
        self._build_integral()
        self._build_star()
        self._pm = None

    # -- P^1(Z/N) ---------------------------------------------------------

    def _build_p1(self):
        N = self.N
        if N == 1:
            self.p1 = [(0, 0)]
            self._table = [0]
            return
        units = [u for u in range(1, N) if math.gcd(u, N) == 1]
        table = [-1] * (N * N)
        reps = []
        for c in range(N):
            gc = math.gcd(c, N)
            for d in range(N):
                if math.gcd(gc, d) != 1 or table[c * N + d] >= 0:
                    continue
                k = len(reps)
                reps.append((c, d))
                for u in units:
                    table[(u * c % N) * N + (u * d % N)] = k
        self.p1 = reps
        self._table = table

    def p1_index(self, c: int, d: int) -> int:
        """Index of (c:d) in P^1(Z/N), or -1 if gcd(c, d, N) > 1."""
        N = self.N
        return self._table[(c % N) * N + (d % N)]

    # -- relations ------------------------------------------------------

    def _build_quotient(self):
        n = len(self.p1)
        # two-term relations x + xS = 0, S: (c,d) -> (d,-c)
        sign = [0] * n
        rep = [-1] * n
        for i, (c, d) in enumerate(self.p1):
            if rep[i] >= 0 or sign[i] == 0 and rep[i] == -2:
                continue
            j = self.p1_index(d, -c)
            if j == i:
                rep[i], sign[i] = -2, 0
            else:
                rep[i], sign[i] = i, 1
                rep[j], sign[j] = i, -1
        reps2 = sorted({rep[i] for i in range(n) if rep[i] >= 0})
        col = {r: k for k, r in enumerate(reps2)}
        # three-term relations x + xT + xT^2 = 0, T: (c,d) -> (d, -c-d)
        rels = []
        seen = set()
        for i, (c, d) in enumerate(self.p1):
            if i in seen:
                continue
            j = self.p1_index(d, -c - d)
            k = self.p1_index(-c - d, c)
            seen.update((i, j, k))
            row = {}
            for t in (i, j, k):
                if rep[t] >= 0:
                    cc = col[rep[t]]
                    row[cc] = row.get(cc, 0) + sign[t]
            row = {a: b for a, b in row.items() if b}
            if row:
                rels.append(row)
        m = len(reps2)
        if rels and m:
            R = DomainMatrix({r: {c: QQ(v) for c, v in row.items()} for r, row in enumerate(rels)}, (len(rels), m), QQ)
            R, pivots = R.rref()
            Rl = R.to_sdm()
        else:
            pivots, Rl = (), {}
        pivset = set(pivots)
        free = [c for c in range(m) if c not in pivset]
        fpos = {c: k for k, c in enumerate(free)}
        colvec = {}
        for c in free:
            colvec[c] = {fpos[c]: QQ(1)}
        for r, pc in enumerate(pivots):
            row = Rl.get(r, {})
            colvec[pc] = {fpos[c]: -v for c, v in row.items() if c != pc}
        vecs = []
        for i in range(n):
            if rep[i] < 0:
                vecs.append({})
            else:
                v = colvec[col[rep[i]]]
                vecs.append(v if sign[i] == 1 else {a: -b for a, b in v.items()})
        self.dim = len(free)
        self.sym_vec = vecs
        self.basis_symbols = [self.p1[reps2[c]] for c in free]

    # -- boundary ---------------------------------------------------------

    def lift(self, c: int, d: int) -> tuple[int, int, int, int]:
        """An SL_2(Z) matrix (a, b, c', d') whose bottom row reduces to (c:d)."""
        N = self.N
        c %= N
        d %= N
        if N == 1:
            c, d = 0, 1
        if c == 0:
            c = N
        k = 0
        while math.gcd(c, d + k * N) != 1:
            k += 1
        d = d + k * N
        g, x, y = _xgcd(d, c)
        # x*d + y*c = 1 -> a = x, b = -y gives a*d - b*c = 1
        return x, -y, c, d

    @staticmethod
    def _cusp_normal(p: int, q: int) -> tuple[int, int]:
        if q < 0:
            p, q = -p, -q
        g = math.gcd(p, q)
        p, q = p // g, q // g
        if q == 0:
            p = 1
        return p, q

    def _cusp_equiv(self, c1, c2) -> bool:
        (p1, q1), (p2, q2) = c1, c2
        N = self.N
        s1 = pow(p1, -1, q1) if q1 > 1 else (1 if q1 == 0 else 0)
        s2 = pow(p2, -1, q2) if q2 > 1 else (1 if q2 == 0 else 0)
        g = math.gcd(q1 * q2, N)
        return (s1 * q2 - s2 * q1) % g == 0

    def cusp_class(self, p: int, q: int) -> int:
        cusp = self._cusp_normal(p, q)
        key = math.gcd(cusp[1], self.N)
        for k in self._cusp_by_gcd.get(key, []):
            if self._cusp_equiv(cusp, self.cusps[k]):
                return k
        self.cusps.append(cusp)
        self._cusp_by_gcd.setdefault(key, []).append(len(self.cusps) - 1)
        return len(self.cusps) - 1

    def _symbol_boundary(self, c: int, d: int) -> dict[int, int]:
        a, b, c1, d1 = self.lift(c, d)
        out: dict[int, int] = {}
        k1 = self.cusp_class(a, c1)
        k2 = self.cusp_class(b, d1)
        out[k1] = out.get(k1, 0) + 1
        out[k2] = out.get(k2, 0) - 1
        return {k: v for k, v in out.items() if v}

    def _build_boundary(self):
        self.cusps = []
        self._cusp_by_gcd = {}
        rows = [self._symbol_boundary(c, d) for c, d in self.basis_symbols]
        for c, d in self.p1:  # register every cusp class met by any symbol
            self._symbol_boundary(c, d)
        nc = len(self.cusps)
        self.boundary = DomainMatrix({i: {k: QQ(v) for k, v in r.items()} for i, r in enumerate(rows) if r},
                                     (self.dim, nc), QQ).to_dense()
        K = rl.left_kernel(self.boundary) if self.dim else rl.qzeros(0, 0)
        self.cuspidal_basis = rl.row_basis(K) if K.shape[0] else rl.qzeros(0, self.dim)

    # -- integral structure ----------------------------------------------

    def _dense(self, v: dict) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for k, a in v.items():
            out[k] = rl.to_rat(a)
        return out

    def _build_integral(self):
        if self.dim == 0:
            self.full_lattice = Lattice.from_generators([], 0)
            self.cuspidal = Lattice.from_generators([], 0)
            return
        gens = [self._dense(v) for v in self.sym_vec if v]
        self.full_lattice = Lattice.from_generators(gens, self.dim)
        cb = rl.to_rows(self.cuspidal_basis)
        if cb:
            self.cuspidal = rl.saturate(Lattice.from_generators(cb, self.dim), self.full_lattice)
        else:
            self.cuspidal = Lattice.from_generators([], self.dim)

    @property
    def full_space_dim(self) -> int:
        return self.dim

    # -- involution and Hecke operators -----------------------------------

    def _rows_from_symbols(self, images) -> DomainMatrix:
        rows = {}
        for i, acc in enumerate(images):
            acc = {k: v for k, v in acc.items() if v}
            if acc:
                rows[i] = acc
        return DomainMatrix(rows, (self.dim, self.dim), QQ).to_dense()

    def _build_star(self):
        imgs = []
        for c, d in self.basis_symbols:
            imgs.append(dict(self.sym_vec[self.p1_index(-c, d)]))
        self.star = self._rows_from_symbols(imgs)

    def hecke_dm(self, p: int) -> DomainMatrix:
        with self._lock:
            T = self.hecke_cache.get(p)
        if T is not None:
            return T
        mats = heilbronn(p)
        imgs = []
        for c, d in self.basis_symbols:
            acc: dict = {}
            for a, b, cc, dd in mats:
                k = self.p1_index(c * a + d * cc, c * b + d * dd)
                if k < 0:
                    continue
                for j, v in self.sym_vec[k].items():
                    acc[j] = acc.get(j, 0) + v
            imgs.append(acc)
        T = self._rows_from_symbols(imgs)
        with self._lock:
            self.hecke_cache.setdefault(p, T)
            return self.hecke_cache[p]

    def symbol_vector(self, c: int, d: int) -> list[Fraction]:
        k = self.p1_index(c, d)
        if k < 0:
            raise ValueError("not an element of P^1(Z/N)")
        return self._dense(self.sym_vec[k])

    # -- paths ---------------------------------------------------------------

    def _zero_to(self, x) -> dict:
        """Sparse coordinates of {0, x}."""
        acc: dict = {}

        def add(c, d, s):
            for j, v in self.sym_vec[self.p1_index(c, d)].items():
                acc[j] = acc.get(j, 0) + s * v

        add(0, 1, 1)  # {0, oo}
        if x == oo:
            return acc
        x = rl.to_rat(x)
        pp, qp = 1, 0
        for p, q in _convergents(x.numerator, x.denominator):
            det = p * qp - pp * q
            add(q if det == 1 else -q, qp, 1)
            pp, qp = p, q
        return acc

    def path_coords(self, alpha, beta) -> list[Fraction]:
        a = self._zero_to(alpha)
        b = self._zero_to(beta)
        for j, v in a.items():
            b[j] = b.get(j, 0) - v
        return self._dense(b)


@dataclass(frozen=True)
class SymElt:
    space: ModSymSpace
    coords: tuple

    def __add__(self, other):
        return SymElt(self.space, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return SymElt(self.space, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return SymElt(self.space, tuple(-a for a in self.coords))

    def __rmul__(self, c):
        c = rl.to_rat(c)
        return SymElt(self.space, tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def boundary(self) -> list[Fraction]:
        v = rl.qmat([self.coords], self.space.dim) * self.space.boundary
        return rl.to_rows(v)[0]


def build_space(N: int) -> ModSymSpace:
    return ModSymSpace(N)


_space_cache: dict[int, ModSymSpace] = {}
_space_lock = threading.Lock()


def cached_space(N: int) -> ModSymSpace:
    """Shared read-only space per level."""
    with _space_lock:
        S = _space_cache.get(N)
    if S is None:
        S = ModSymSpace(N)
        with _space_lock:
            S = _space_cache.setdefault(N, S)
    return S


def path_symbol(space: ModSymSpace, alpha, beta) -> SymElt:
    return SymElt(space, tuple(space.path_coords(alpha, beta)))


def star(space: ModSymSpace, x: SymElt) -> SymElt:
    v = rl.qmat([x.coords], space.dim) * space.star
    return SymElt(space, tuple(rl.to_rows(v)[0]))


def apply(space: ModSymSpace, T: DomainMatrix, x: SymElt) -> SymElt:
    v = rl.qmat([x.coords], space.dim) * T
    return SymElt(space, tuple(rl.to_rows(v)[0]))


def hecke(space: ModSymSpace, p: int) -> list[list[Fraction]]:
    """Matrix of T_p (U_p for p | N) on the full space; rows are images of basis vectors."""
    if not sympy.isprime(p):
        raise ValueError("p must be prime")
    return rl.to_rows(space.hecke_dm(p))


def cuspidal_restriction(space: ModSymSpace, T: DomainMatrix) -> DomainMatrix:
    return rl.restrict(space.cuspidal_basis, T)


def plus_minus_lattices(space: ModSymSpace) -> tuple[Lattice, Lattice]:
    if space._pm is not None:
        return space._pm
    C = space.cuspidal_basis
    out = []
    for s in (1, -1):
        if C.shape[0] == 0:
            out.append(Lattice.from_generators([], space.dim))
            continue
        sc = rl.restrict(C, space.star)
        K = rl.left_kernel(sc - rl.qident(sc.shape[0]) * QQ(s))
        rows = rl.to_rows(K * C) if K.shape[0] else []
        out.append(rl.intersect_with_subspace(space.cuspidal, rows) if rows
                   else Lattice.from_generators([], space.dim))
    space._pm = tuple(out)
    return space._pm


def winding_symbol(space: ModSymSpace) -> SymElt:
    return path_symbol(space, 0, oo)


def winding_multiple(N: int) -> int:
    if not sympy.isprime(N):
        raise NotPrime(f"{N} is not prime")
    return Fraction(N - 1, 12).numerator


def twisted_element(space: ModSymSpace, D: int) -> SymElt:
    """e_D = sum over b mod D of (-D/b) {-b/D, oo}."""
    if not rl.is_fundamental_discriminant(-D):
        raise NotFundamental(f"-{D} is not a fundamental discriminant")
    if math.gcd(D, space.N) != 1:
        raise NotCoprime(f"gcd({D}, {space.N}) != 1")
    acc = [Fraction(0)] * space.dim
    for b in range(D):
        e = rl.kronecker(-D, b)
        if e:
            v = space.path_coords(Fraction(-b, D), oo)
            acc = [x + e * y for x, y in zip(acc, v)]
    return SymElt(space, tuple(acc))
