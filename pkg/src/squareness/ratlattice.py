"""Exact rational arithmetic, integer normal forms and lattice indices.

Rationals are ``fractions.Fraction``.  Heavy linear algebra over Q (row
reduction, kernels, characteristic polynomials) goes through sympy's
``DomainMatrix``; the lattice layer (Hermite and Smith forms, saturation,
indices) works on plain Python integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import sympy
from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

Rat = Fraction
IntMatrix = list  # list of rows of int
RatMatrix = list  # list of rows of Fraction


class SpanMismatch(ValueError):
    pass


class RankDeficient(ValueError):
    pass


class NotFundamental(ValueError):
    pass


class ZeroInput(ValueError):
    pass


def to_rat(x) -> Fraction:
    """Convert int, Fraction, gmpy2/sympy rationals to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    num = getattr(x, "numerator", None)
    if num is not None:
        return Fraction(int(num), int(x.denominator))
    return Fraction(x)


# ---------------------------------------------------------------------------
# Q-linear algebra on DomainMatrix (rows are vectors, operators act on the right)


def qmat(rows: Sequence[Sequence], ncols: int | None = None) -> DomainMatrix:
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    data = [[QQ(int(to_rat(a).numerator), int(to_rat(a).denominator)) for a in r] for r in rows]
    return DomainMatrix(data, (len(rows), ncols), QQ)


def qzeros(m: int, n: int) -> DomainMatrix:
    return DomainMatrix.zeros((m, n), QQ)


def qident(n: int) -> DomainMatrix:
    return DomainMatrix.eye(n, QQ)


def to_rows(M: DomainMatrix) -> RatMatrix:
    return [[to_rat(a) for a in row] for row in M.to_list()]


def row_basis(M: DomainMatrix) -> DomainMatrix:
    """Echelon basis of the row space."""
    if M.shape[0] == 0:
        return M
    R, pivots = M.rref()
    return R[: len(pivots), :]


def left_kernel(M: DomainMatrix) -> DomainMatrix:
    """Rows x with x*M = 0."""
    m, n = M.shape
    if m == 0:
        return qzeros(0, 0)
    if n == 0:
        return qident(m)
    K = M.transpose().nullspace()
    if K.shape[0] == 0:
        return qzeros(0, m)
    return K


def coords_in(B: DomainMatrix, V: DomainMatrix) -> DomainMatrix:
    """Solve X*B = V for X, B having independent rows; raises if V not in span."""
    k, n = B.shape
    if V.shape[0] == 0:
        return qzeros(0, k)
    aug = B.transpose().hstack(V.transpose())
    R, pivots = aug.rref()
    if any(p >= k for p in pivots):
        raise SpanMismatch("vectors outside the row space")
    X = R[:k, k:].transpose()
    return X


def restrict(B: DomainMatrix, T: DomainMatrix) -> DomainMatrix:
    """Matrix of T on the invariant row space spanned by B (rows of B as basis)."""
    return coords_in(B, B * T)


def mat_poly(coeffs: Sequence, T: DomainMatrix) -> DomainMatrix:
    """Evaluate the polynomial (highest degree first) at the square matrix T."""
    n = T.shape[0]
    R = qzeros(n, n)
    I = qident(n)
    for c in coeffs:
        R = R * T + I * QQ(int(to_rat(c).numerator), int(to_rat(c).denominator))
    return R


def charpoly(T: DomainMatrix) -> list[Fraction]:
    """Characteristic polynomial coefficients, highest degree first."""
    if T.shape[0] == 0:
        return [Fraction(1)]
    return [to_rat(c) for c in T.charpoly()]


def poly_expr(coeffs: Sequence, x=None):
    x = sympy.Symbol("x") if x is None else x
    return sympy.Poly([sympy.Rational(to_rat(c).numerator, to_rat(c).denominator) for c in coeffs], x)


def factor_poly(coeffs: Sequence) -> list[tuple[list[Fraction], int]]:
    """Monic irreducible factors over Q with multiplicities, deterministic order."""
    P = poly_expr(coeffs)
    _, facs = P.factor_list()
    out = []
    for f, e in facs:
        f = f.monic()
        out.append(([to_rat(c) for c in f.all_coeffs()], e))
    out.sort(key=lambda t: (len(t[0]), [(c.numerator, c.denominator) for c in t[0]]))
    return out


# ---------------------------------------------------------------------------
# integer normal forms


def hnf(rows: Iterable[Sequence[int]]) -> IntMatrix:
    """Row Hermite normal form; zero rows dropped, pivots positive."""
    A = [[int(a) for a in r] for r in rows]
    A = [r for r in A if any(r)]
    if not A:
        return []
    n = len(A[0])
    pr = 0
    for col in range(n):
        if pr >= len(A):
            break
        while True:
            nz = [i for i in range(pr, len(A)) if A[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][col]))
            A[pr], A[piv] = A[piv], A[pr]
            p = A[pr][col]
            clean = True
            for i in range(pr + 1, len(A)):
                a = A[i][col]
                if a:
                    q = a // p
                    if q:
                        ri, rp = A[i], A[pr]
                        A[i] = [x - q * y for x, y in zip(ri, rp)]
                    if A[i][col]:
                        clean = False
            if clean:
                break
        if pr < len(A) and A[pr][col] != 0:
            if A[pr][col] < 0:
                A[pr] = [-x for x in A[pr]]
            p = A[pr][col]
            for i in range(pr):
                q = A[i][col] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[pr])]
            pr += 1
    return [r for r in A[:pr]]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def snf(M: Sequence[Sequence[int]]):
    """Smith form with transforms: returns (S, U, V) with U*M*V = S."""
    S, U, V, _ = _snf_full(M)
    return S, U, V


def _snf_full(M):
    A = [[int(a) for a in r] for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)
    Vi = _identity(n)  # inverse of V, maintained alongside

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):  # row dst += q * row src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for r in A:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]
        # inverse: row src of Vi -= q * row dst
        Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        done = False
            if not done:
                entries = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                entries += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i1, j1 = min(entries)
                swap_rows(t, i1)
                swap_cols(t, j1)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V, Vi


def elementary_divisors(M: Sequence[Sequence[int]]) -> list[int]:
    S, _, _ = snf(M)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


def int_det(M: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    A = [[int(a) for a in r] for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rat_det(M: Sequence[Sequence]) -> Fraction:
    rows = [[to_rat(a) for a in r] for r in M]
    if not rows:
        return Fraction(1)
    den = reduce(math.lcm, (a.denominator for r in rows for a in r), 1)
    ints = [[int(a * den) for a in r] for r in rows]
    return Fraction(int_det(ints), den ** len(rows))


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class Lattice:
    """Z-lattice in Q^n stored as (integer HNF rows) / denom, canonical."""

    ambient_dim: int
    hnf_rows: tuple
    denom: int = 1
    pivots: tuple = field(default=(), compare=False)

    @staticmethod
    def from_generators(gens: Iterable[Sequence], ambient_dim: int | None = None) -> "Lattice":
        gens = [[to_rat(a) for a in g] for g in gens]
        if ambient_dim is None:
            if not gens:
                raise ValueError("ambient_dim needed for an empty generator list")
            ambient_dim = len(gens[0])
        den = reduce(math.lcm, (a.denominator for g in gens for a in g), 1)
        H = hnf([[int(a * den) for a in g] for g in gens])
        g = reduce(math.gcd, (a for r in H for a in r), den)
        if g > 1:
            H = [[a // g for a in r] for r in H]
            den //= g
        piv = tuple(next(j for j, a in enumerate(r) if a) for r in H)
        return Lattice(ambient_dim, tuple(tuple(r) for r in H), den, piv)

    @property
    def rank(self) -> int:
        return len(self.hnf_rows)

    @property
    def basis(self) -> RatMatrix:
        return [[Fraction(a, self.denom) for a in r] for r in self.hnf_rows]

    def coords(self, v: Sequence) -> list[Fraction]:
        """Coordinates of v in the stored basis; SpanMismatch if v is outside the span."""
        w = [to_rat(a) * self.denom for a in v]
        c = []
        for r, p in zip(self.hnf_rows, self.pivots):
            q = w[p] / r[p]
            c.append(q)
            if q:
                w = [x - q * y for x, y in zip(w, r)]
        if any(w):
            raise SpanMismatch("vector not in the span of the lattice")
        return c

    def contains(self, v: Sequence) -> bool:
        try:
            return all(c.denominator == 1 for c in self.coords(v))
        except SpanMismatch:
            return False

    def in_span(self, v: Sequence) -> bool:
        try:
            self.coords(v)
            return True
        except SpanMismatch:
            return False

    def covolume_factor(self) -> Fraction:
        """Product of pivots: the covolume relative to the pivot coordinate lattice."""
        prod = 1
        for r, p in zip(self.hnf_rows, self.pivots):
            prod *= r[p]
        return Fraction(prod, self.denom ** self.rank)

    def scaled(self, c) -> "Lattice":
        c = to_rat(c)
        return Lattice.from_generators([[a * c for a in r] for r in self.basis], self.ambient_dim)

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice.from_generators(self.basis + other.basis, self.ambient_dim)


def lattice_index(L: Lattice, M: Lattice, dim: int | None = None) -> Fraction:
    """Generalized index [L : M] = |det| of the change of basis, for equal Q-spans."""
    if dim is not None and (L.rank < dim or M.rank < dim):
        raise RankDeficient(f"expected rank {dim}, got {L.rank} and {M.rank}")
    if L.rank != M.rank or L.pivots != M.pivots:
        raise SpanMismatch("lattices span different subspaces")
    for r in M.basis:
        L.coords(r)  # raises SpanMismatch
    return abs(M.covolume_factor() / L.covolume_factor())


def saturate(L: Lattice, ambient: Lattice) -> Lattice:
    """ambient intersected with the Q-span of L."""
    if L.rank == 0:
        return L
    C = [ambient.coords(r) for r in L.basis]
    den = reduce(math.lcm, (a.denominator for r in C for a in r), 1)
    C = [[int(a * den) for a in r] for r in C]
    _, _, _, Vi = _snf_full(C)
    sat = Vi[: L.rank]
    B = ambient.basis
    gens = [[sum(c * B[i][j] for i, c in enumerate(row) if c) for j in range(ambient.ambient_dim)] for row in sat]
    return Lattice.from_generators(gens, ambient.ambient_dim)


def intersect_with_subspace(ambient: Lattice, subspace_rows: Sequence[Sequence]) -> Lattice:
    """ambient intersected with the Q-space spanned by the given rows."""
    return saturate(Lattice.from_generators(subspace_rows, ambient.ambient_dim), ambient)


# ---------------------------------------------------------------------------
# elementary number theory


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    a, n = int(a), int(n)
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # now n odd positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_squarefree(n: int) -> bool:
    n = abs(int(n))
    if n == 0:
        return False
    return all(e == 1 for e in sympy.factorint(n).values())


def is_fundamental_discriminant(d: int) -> bool:
    d = int(d)
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def class_number_unit(D: int) -> tuple[int, int]:
    """(h(-D), u(-D)) by counting reduced primitive forms of discriminant -D."""
    D = int(D)
    if D <= 0 or not is_fundamental_discriminant(-D):
        raise NotFundamental(f"-{D} is not a fundamental discriminant")
    h = 0
    a = 1
    while 3 * a * a <= D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b + D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == c):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            h += 1
        a += 1
    u = 3 if D == 3 else 2 if D == 4 else 1
    return h, u


def valuation(x, p: int) -> int:
    x = to_rat(x)
    if x == 0:
        raise ZeroInput("valuation of zero")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def away_from(S: Iterable[int], x) -> Fraction:
    """Strip every prime in S from numerator and denominator of x."""
    x = to_rat(x)
    if x == 0:
        raise ZeroInput("away_from of zero")
    n, d = x.numerator, x.denominator
    for p in set(S):
        while n % p == 0:
            n //= p
        while d % p == 0:
            d //= p
    return Fraction(n, d)


def odd_part(x) -> Fraction:
    return away_from({2}, x)


def numr(x) -> int:
    return to_rat(x).numerator


def prime_divisors(n: int) -> list[int]:
    return sorted(sympy.primefactors(abs(int(n)))) if n else []


def is_square_rat(x) -> bool:
    x = to_rat(x)
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def fundamental_discriminants(Dmax: int) -> list[int]:
    """All D <= Dmax with -D a fundamental discriminant, increasing."""
    return [D for D in range(3, Dmax + 1) if is_fundamental_discriminant(-D)]
