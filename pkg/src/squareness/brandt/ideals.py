"""Left ideal classes of a maximal order by neighbour search, with the mass as stopping rule."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .. import ratlattice as rl
from .quaternion import (
    QuaternionData,
    basis_of,
    conj_lattice,
    lattice_of,
    product,
    short_vectors,
)


class MassOverflow(ArithmeticError):
    pass


@dataclass(frozen=True)
class LeftIdeal:
    lattice: rl.Lattice
    norm: Fraction


@dataclass(frozen=True)
class IdealClassSet:
    q: QuaternionData
    ideals: tuple  # LeftIdeal
    right_orders: tuple  # rl.Lattice
    weights: tuple  # w_i = |R_i^*| / 2

    @property
    def count(self) -> int:
        return len(self.ideals)

    @property
    def mass(self) -> Fraction:
        return sum((Fraction(1, w) for w in self.weights), Fraction(0))


def right_order(q: QuaternionData, I: LeftIdeal) -> rl.Lattice:
    """O_R(I) = conj(I) I / nr(I)."""
    P = product(q.algebra, conj_lattice(I.lattice), I.lattice)
    return lattice_of([tuple(c / I.norm for c in x) for x in basis_of(P)])


def norm_gram(q: QuaternionData, L: rl.Lattice, scale=1):
    B = basis_of(L)
    s = Fraction(scale)
    return [[Fraction(q.algebra.bilinear(u, v)) / s for v in B] for u in B]


def unit_count(q: QuaternionData, O: rl.Lattice) -> int:
    """|O^*| for an order O (all units have reduced norm 1)."""
    return sum(1 for _, v in short_vectors(norm_gram(q, O), 1) if v == 1)


def units(q: QuaternionData, O: rl.Lattice) -> list:
    B = basis_of(O)
    out = []
    for x, v in short_vectors(norm_gram(q, O), 1):
        if v == 1:
            out.append(tuple(sum(x[k] * B[k][t] for k in range(4)) for t in range(4)))
    return out


def equivalent(q: QuaternionData, I: LeftIdeal, J: LeftIdeal) -> bool:
    """I, J are right-equivalent iff conj(I) J has an element of norm nr(I) nr(J)."""
    P = product(q.algebra, conj_lattice(I.lattice), J.lattice)
    G = norm_gram(q, P, I.norm * J.norm)
    return any(v == 1 for _, v in short_vectors(G, 1))


def _neighbour_prime(N: int) -> int:
    return 3 if N == 2 else 2


def neighbours(q: QuaternionData, I: LeftIdeal, p: int, R: rl.Lattice | None = None) -> list[LeftIdeal]:
    """The p+1 ideals I*L with L a left O_R(I)-ideal of norm p."""
    A = q.algebra
    if R is None:
        R = right_order(q, I)
    RB = basis_of(R)
    pR = lattice_of([tuple(p * c for c in x) for x in RB])
    seen = {}
    for coeffs in itertools.product(range(p), repeat=4):
        if not any(coeffs):
            continue
        alpha = tuple(sum(coeffs[k] * RB[k][t] for k in range(4)) for t in range(4))
        if A.nrd(alpha) % p:
            continue
        L = lattice_of([A.mul(r, alpha) for r in RB] + basis_of(pR))
        key = (L.hnf_rows, L.denom)
        if key not in seen:
            seen[key] = L
    out = []
    for L in seen.values():
        J = product(A, I.lattice, L)
        out.append(LeftIdeal(J, I.norm * p))
    if len(out) != p + 1:
        raise ArithmeticError(f"found {len(out)} neighbours, expected {p + 1}")
    return out


def ideal_classes(q: QuaternionData) -> IdealClassSet:
    N = q.N
    target = Fraction(N - 1, 12)
    R0 = q.order
    first = LeftIdeal(R0, Fraction(1))
    ideals, orders, weights = [first], [R0], [unit_count(q, R0) // 2]
    mass = Fraction(1, weights[0])
    p = _neighbour_prime(N)
    queue = [0]
    while mass < target and queue:
        k = queue.pop(0)
        for J in neighbours(q, ideals[k], p, orders[k]):
            if any(equivalent(q, I, J) for I in ideals):
                continue
            RJ = right_order(q, J)
            w = unit_count(q, RJ) // 2
            ideals.append(J)
            orders.append(RJ)
            weights.append(w)
            queue.append(len(ideals) - 1)
            mass += Fraction(1, w)
            if mass > target:
                raise MassOverflow(f"mass {mass} exceeds {target}")
            if mass == target:
                break
    if mass != target:
        raise MassOverflow(f"neighbour search stalled at mass {mass} < {target}")
    return IdealClassSet(q, tuple(ideals), tuple(orders), tuple(weights))
