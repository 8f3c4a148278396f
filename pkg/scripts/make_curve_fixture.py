"""Build the curve-table fixture from Cremona's tables as packaged for PARI/GP.

Source: the ``elldata`` package (J. E. Cremona, https://github.com/JohnCremona/ecdata),
distributed on PyPI as ``passagemath-pari-elldata``; file ``share/pari/elldata/ell0``
holds every isogeny class of conductor < 1000 with a-invariants and Mordell-Weil
generators. Rank is the number of listed generators.

Torsion orders are *not* in that file. They are computed here by an independent
route (rational roots of division polynomials via sympy) so that the package's own
torsion code can be validated against the fixture rather than against itself.

Usage::

    python scripts/make_curve_fixture.py path/to/ell0 tests/fixtures/curves_le1000.txt
"""

import json
import math
import re
import sys

import sympy
from sympy import Poly, Rational, symbols

X = symbols("x")


def parse_elldata(path):
    text = open(path).read()
    text = re.sub(r"(-?\d+/\d+)", r'"\1"', text)
    for block in json.loads(text):
        conductor = block[0]
        for label, ainvs, gens in block[1:]:
            m = re.fullmatch(r"(\d+)([a-z]+)(\d+)", label)
            yield conductor, m.group(2), int(m.group(3)), ainvs, len(gens)


def b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def division_polys(ainvs, upto):
    """x-only division polynomials f_m with f_m = psi_m (m odd), psi_m/psi_2 (m even)."""
    b2, b4, b6, b8 = b_invariants(*ainvs)
    x = X
    cubic = 4 * x**3 + b2 * x**2 + 2 * b4 * x + b6  # = psi_2^2
    f = {0: sympy.Integer(0), 1: sympy.Integer(1), 2: sympy.Integer(1)}
    f[3] = 3 * x**4 + b2 * x**3 + 3 * b4 * x**2 + 3 * b6 * x + b8
    f[4] = 2 * x**6 + b2 * x**5 + 5 * b4 * x**4 + 10 * b6 * x**3 + 10 * b8 * x**2 + (b2 * b8 - b4 * b6) * x + (b4 * b8 - b6 * b6)
    for m in range(5, upto + 1):
        n = m // 2
        if m % 2 == 1:
            if n % 2 == 0:
                val = cubic**2 * f[n + 2] * f[n] ** 3 - f[n - 1] * f[n + 1] ** 3
            else:
                val = f[n + 2] * f[n] ** 3 - cubic**2 * f[n - 1] * f[n + 1] ** 3
        else:
            val = f[n] * (f[n + 2] * f[n - 1] ** 2 - f[n - 2] * f[n + 1] ** 2)
        f[m] = sympy.expand(val)
    return f, cubic


def rational_roots(expr):
    if expr == 0:
        raise ValueError("zero polynomial")
    p = Poly(expr, X)
    if p.degree() <= 0:
        return set()
    roots = set()
    for fac, _ in p.factor_list()[1]:
        if fac.degree() == 1:
            c = fac.all_coeffs()
            roots.add(Rational(-c[1], c[0]))
    return roots


def count_points_with_x(ainvs, xs):
    a1, a2, a3, a4, a6 = ainvs
    total = 0
    for x in xs:
        disc = (a1 * x + a3) ** 2 + 4 * (x**3 + a2 * x**2 + a4 * x + a6)
        if disc == 0:
            total += 1
        elif disc > 0:
            num, den = disc.p, disc.q
            if math.isqrt(num) ** 2 == num and math.isqrt(den) ** 2 == den:
                total += 2
    return total


def point_count_bound(ainvs, nprimes=25):
    a1, a2, a3, a4, a6 = ainvs
    b2, b4, b6, b8 = b_invariants(*ainvs)
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    g = 0
    used = 0
    for p in sympy.primerange(3, 10**5):
        if disc % p == 0:
            continue
        n = 1
        for x in range(p):
            rhs = (x**3 + a2 * x * x + a4 * x + a6) % p
            lin = (a1 * x + a3) % p
            d = (lin * lin + 4 * rhs) % p
            if d == 0:
                n += 1
            elif pow(d, (p - 1) // 2, p) == 1:
                n += 2
        g = math.gcd(g, n)
        used += 1
        if used >= nprimes:
            break
    return g


def torsion_order(ainvs):
    bound = point_count_bound(ainvs)
    if bound == 1:
        return 1
    parts = sympy.factorint(bound)
    f, cubic = division_polys(ainvs, max(4, max(ell**e for ell, e in parts.items())))
    order = 1
    for ell, e in parts.items():
        m = ell**e
        if ell == 2:
            xs = rational_roots(cubic) | rational_roots(f[m]) if m > 2 else rational_roots(cubic)
        else:
            xs = rational_roots(f[m])
        order *= 1 + count_points_with_x(ainvs, xs)
    return order


def main(src, dst):
    rows = list(parse_elldata(src))
    with open(dst, "w") as out:
        out.write("# Elliptic curves over Q of conductor < 1000, one line per curve.\n")
        out.write("# Columns: N label curve_index a1 a2 a3 a4 a6 rank torsion\n")
        out.write("# a-invariants and ranks: J. E. Cremona's tables (ecdata), as packaged in PARI elldata.\n")
        out.write("# Torsion: computed by scripts/make_curve_fixture.py from division polynomials.\n")
        out.write("# Curve index 1 is the optimal curve of its class (Cremona's convention).\n")
        for k, (N, cls, idx, ainvs, rank) in enumerate(rows):
            t = torsion_order(ainvs)
            out.write(f"{N} {cls} {idx} {' '.join(str(a) for a in ainvs)} {rank} {t}\n")
            if k % 500 == 0:
                print(k, N, cls, idx, t, file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
