import itertools
import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from squareness import ratlattice as rl
from squareness.ratlattice import Lattice


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _diag(S):
    return [S[i][i] for i in range(min(len(S), len(S[0])))]


def test_snf_identity():
    I3 = [[int(i == j) for j in range(3)] for i in range(3)]
    S, U, V = rl.snf(I3)
    assert S == I3


def test_snf_diag_2_3():
    S, U, V = rl.snf([[2, 0], [0, 3]])
    assert _diag(S) == [1, 6]


def test_snf_diag_2_3_brute_force():
    # invariant factors by gcd of k-minors: d1 = gcd of entries, d1 d2 = |det|
    M = [[2, 0], [0, 3]]
    d1 = math.gcd(*[a for r in M for a in r])
    assert (d1, abs(rl.int_det(M)) // d1) == (1, 6)


def test_snf_zero():
    S, _, _ = rl.snf([[0, 0], [0, 0]])
    assert S == [[0, 0], [0, 0]]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 10**6))
def test_snf_properties(m, n, seed):
    r = random.Random(seed)
    M = [[r.randint(-20, 20) for _ in range(n)] for _ in range(m)]
    S, U, V = rl.snf(M)
    assert _matmul(_matmul(U, M), V) == S
    assert all(S[i][j] == 0 for i in range(m) for j in range(n) if i != j)
    d = [x for x in _diag(S)]
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz)
    assert d[: len(nz)] == nz
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    assert abs(rl.int_det(U)) == 1 and abs(rl.int_det(V)) == 1


def test_lattice_index_examples():
    Z2 = Lattice.from_generators([[1, 0], [0, 1]])
    assert rl.lattice_index(Z2, Z2) == 1
    assert rl.lattice_index(Z2, Lattice.from_generators([[2, 0], [0, 3]])) == 6
    assert rl.lattice_index(Z2, Lattice.from_generators([[1, 1], [1, -1]])) == 2


def test_lattice_index_errors():
    A = Lattice.from_generators([[1, 0, 0]])
    B = Lattice.from_generators([[0, 1, 0]])
    with pytest.raises(rl.SpanMismatch):
        rl.lattice_index(A, B)
    with pytest.raises(rl.RankDeficient):
        rl.lattice_index(A, A, dim=2)


def test_lattice_index_non_nested():
    L = Lattice.from_generators([[2, 0], [0, 1]])
    M = Lattice.from_generators([[1, 0], [0, 4]])
    assert rl.lattice_index(L, M) == 2


def _rand_full(r, n):
    while True:
        B = [[r.randint(-6, 6) for _ in range(n)] for _ in range(n)]
        if rl.int_det(B):
            return B


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10**6))
def test_lattice_index_multiplicative_and_snf(n, seed):
    r = random.Random(seed)
    L = _rand_full(r, n)
    A = _rand_full(r, n)
    B = _rand_full(r, n)
    K = _matmul(A, L)
    M = _matmul(B, K)
    LL, KK, MM = (Lattice.from_generators(x) for x in (L, K, M))
    assert rl.lattice_index(LL, MM) == rl.lattice_index(LL, KK) * rl.lattice_index(KK, MM)
    C = _matmul(B, A)  # coordinates of M in the basis L
    assert rl.lattice_index(LL, MM) == math.prod(rl.elementary_divisors(C))


def test_saturate():
    Z1 = Lattice.from_generators([[1]])
    assert rl.saturate(Lattice.from_generators([[2]]), Z1) == Z1
    Z2 = Lattice.from_generators([[1, 0], [0, 1]])
    assert rl.saturate(Lattice.from_generators([[2, 2]]), Z2) == Lattice.from_generators([[1, 1]])
    assert rl.saturate(Z2, Z2) == Z2
    with pytest.raises(rl.SpanMismatch):
        rl.saturate(Lattice.from_generators([[1, 0]]), Lattice.from_generators([[0, 1]]))


def _kron_a2(a):
    if a % 2 == 0:
        return 0
    return 1 if a % 8 in (1, 7) else -1


def test_kronecker_examples():
    assert rl.kronecker(-3, 2) == _kron_a2(-3) == -1
    assert all(rl.kronecker(x, 1) == 1 for x in range(-50, 50))
    assert pow(-7, 5, 11) == 1
    assert rl.kronecker(-7, 11) == 1


@pytest.mark.parametrize("p", list(sympy.primerange(3, 100)))
def test_kronecker_euler_criterion(p):
    for a in range(-30, 30):
        e = pow(a % p, (p - 1) // 2, p)
        expected = 0 if a % p == 0 else (1 if e == 1 else -1)
        assert rl.kronecker(a, p) == expected


@settings(max_examples=200, deadline=None)
@given(st.integers(-200, 200), st.integers(-200, 200), st.integers(-60, 60))
def test_kronecker_multiplicative(a, b, n):
    assert rl.kronecker(a * b, n) == rl.kronecker(a, n) * rl.kronecker(b, n)
    assert rl.kronecker(n, a * b) == rl.kronecker(n, a) * rl.kronecker(n, b)


def test_quadratic_reciprocity():
    ps = list(sympy.primerange(3, 100))
    for p, q in itertools.combinations(ps, 2):
        s = (-1) ** (((p - 1) // 2) * ((q - 1) // 2))
        assert rl.kronecker(p, q) * rl.kronecker(q, p) == s


def test_fundamental_discriminants():
    assert rl.is_fundamental_discriminant(-3)
    assert not rl.is_fundamental_discriminant(-12)
    assert rl.is_fundamental_discriminant(-4)
    assert not rl.is_fundamental_discriminant(1)
    assert rl.fundamental_discriminants(24) == [3, 4, 7, 8, 11, 15, 19, 20, 23, 24]


def _h_dirichlet(D):
    # class number formula for -D < -4: h = -(1/D) sum_{a<D} (-D/a) a
    return -sum(rl.kronecker(-D, a) * a for a in range(1, D)) // D


def test_class_number_unit():
    assert rl.class_number_unit(3) == (1, 3)
    assert rl.class_number_unit(4) == (1, 2)
    assert rl.class_number_unit(23) == (3, 1)
    for D in rl.fundamental_discriminants(2000):
        if D > 4:
            assert rl.class_number_unit(D)[0] == _h_dirichlet(D)
    with pytest.raises(rl.NotFundamental):
        rl.class_number_unit(12)


def test_away_from():
    assert rl.away_from({2}, 12) == 3
    assert rl.away_from({2, 3}, Fraction(8, 9)) == 1
    assert rl.away_from({2, 11}, Fraction(352, 5)) == Fraction(1, 5)
    with pytest.raises(rl.ZeroInput):
        rl.away_from({2}, 0)


@given(st.fractions().filter(lambda x: x != 0), st.sets(st.sampled_from([2, 3, 5, 7, 11])))
def test_away_from_square_closure(x, S):
    assert rl.is_square_rat(rl.away_from(S, x * x))


def test_valuation():
    assert rl.valuation(Fraction(50, 3), 5) == 2
    assert rl.valuation(Fraction(50, 3), 3) == -1
