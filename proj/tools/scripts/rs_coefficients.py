#!/usr/bin/env python3
"""Regenerate core/src/rs_coefficients.inc.

The Riemann-Siegel remainder uses C_0..C_7, each a combination of derivatives
of Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p):

    C_n = sum_j c_{n,j} Psi^(3n - 4j)(p) / pi^(2n - 2j)

The rational c_{n,j} come from the derivative recursion
    e_{n,k} = -(m + 1) e_{n-1,k-2} + e_{n-1,k} / (4m),   m = 3n - 2k,
restricted to even k, with c = e (-1/2)^m 2^-k (-1)^(k/2).  The constant
(m = 0) entry at n = 4 is pinned to the known 1/(128 pi^2); entries below it
follow from the recursion.  n = 8 would need a second constant, so the table
stops at C_7.  C_5 and C_6 were checked against coefficients extracted from
50-digit values of Z(t) (mpmath.siegelz) at a = 20.3 .. 70.3, p = 0.3.

Psi is entire, so every C_n is expanded once as a power series in
z = p - 1/2 at high precision and the truncated coefficients are frozen.

Usage: python3 tools/scripts/rs_coefficients.py > core/src/rs_coefficients.inc
"""
import sys
from fractions import Fraction as Fr
from math import factorial

import mpmath as mp

mp.mp.dps = 160
DEGREE = 160          # working series length
ORDERS = 8            # C_0 .. C_7
TOL = mp.mpf("1e-22")  # drop coefficients whose contribution on |z| <= 1/2 is below this


def rational_table():
    e = {(0, 0): Fr(1)}
    get = lambda n, k: e.get((n, k), Fr(0))
    for n in range(1, ORDERS):
        for k in range(0, 3 * n // 2 + 1, 2):
            m = 3 * n - 2 * k
            if m:
                e[(n, k)] = -(m + 1) * get(n - 1, k - 2) + Fr(1, 4 * m) * get(n - 1, k)
            elif n == 4:
                # c = e / 2^6 * (-1)^3 must equal 1/128
                e[(n, k)] = Fr(-64, 128)
            else:
                raise ValueError("constant-order entry needed at n = %d" % n)
    table = {}
    for n in range(ORDERS):
        table[n] = [(3 * n - 2 * k, 2 * n - k, get(n, k) * Fr(-1, 2) ** (3 * n - 2 * k) / Fr(2) ** k * (-1) ** (k // 2))
                    for k in range(0, 3 * n // 2 + 1, 2) if get(n, k) != 0]
    return table


def cos_series(a, b, degree):
    """Taylor coefficients of cos(a*z^2 + b) in z."""
    out = [mp.mpf(0)] * (degree + 1)
    for j in range(0, degree // 2 + 1):
        out[2 * j] = a**j * mp.cos(b + j * mp.pi / 2) / mp.factorial(j)
    return out


def cos_linear_series(a, degree):
    """Taylor coefficients of cos(a z)."""
    out = [mp.mpf(0)] * (degree + 1)
    for j in range(0, degree + 1, 2):
        out[j] = (-1) ** (j // 2) * a**j / mp.factorial(j)
    return out


def divide(num, den):
    q = [mp.mpf(0)] * len(num)
    for n in range(len(num)):
        acc = num[n]
        for k in range(1, n + 1):
            acc -= den[k] * q[n - k]
        q[n] = acc / den[0]
    return q


def derivative(series, order):
    out = list(series)
    for _ in range(order):
        out = [(i + 1) * out[i + 1] for i in range(len(out) - 1)] + [mp.mpf(0)]
    return out


def combine(terms):
    n = max(len(s) for _, s in terms)
    out = [mp.mpf(0)] * n
    for c, s in terms:
        for i, v in enumerate(s):
            out[i] += c * v
    return out


def main():
    pi = mp.pi
    # p = 1/2 + z:  p^2 - p - 1/16 = z^2 - 5/16 ; cos(2 pi p) = -cos(2 pi z)
    num = cos_series(2 * pi, -5 * pi / 8, DEGREE)
    den = [-c for c in cos_linear_series(2 * pi, DEGREE)]
    psi = divide(num, den)
    d = lambda k: derivative(psi, k)

    table = rational_table()
    series = {n: combine([(mp.mpf(c.numerator) / c.denominator / pi**pk, d(m)) for m, pk, c in table[n]])
              for n in range(ORDERS)}

    # The recursion reproduces the closed forms of C_1..C_4.
    closed = {
        1: combine([(-1 / (96 * pi**2), d(3))]),
        2: combine([(1 / (64 * pi**2), d(2)), (1 / (18432 * pi**4), d(6))]),
        3: combine([(-1 / (64 * pi**2), d(1)), (-1 / (3840 * pi**4), d(5)), (-1 / (5308416 * pi**6), d(9))]),
        4: combine([(1 / (128 * pi**2), psi), (19 / (24576 * pi**4), d(4)),
                    (11 / (5898240 * pi**6), d(8)), (1 / (2038431744 * pi**8), d(12))]),
    }
    for n, ref in closed.items():
        assert max(abs(a - b) for a, b in zip(series[n][:60], ref[:60])) < mp.mpf("1e-60"), n

    # C0 at p = 0.3 against the closed form
    p = mp.mpf("0.3")
    direct = mp.cos(2 * pi * (p * p - p - mp.mpf(1) / 16)) / mp.cos(2 * pi * p)
    value = sum(c * (p - mp.mpf("0.5")) ** i for i, c in enumerate(series[0]))
    assert abs(direct - value) < mp.mpf("1e-30"), (direct, value)

    print("// Generated by tools/scripts/rs_coefficients.py; do not edit.")
    print("// Power-series coefficients of the Riemann-Siegel corrections C_j(p) in z = p - 1/2.")
    usable = DEGREE - 3 * (ORDERS - 1) - 4
    for n in range(ORDERS):
        coeffs = series[n]
        last = 0
        for i, c in enumerate(coeffs[:usable]):
            if abs(c) * mp.mpf(0.5) ** i > TOL:
                last = i
        body = ",\n    ".join(mp.nstr(c, 20, strip_zeros=False, min_fixed=-1, max_fixed=-1)
                              for c in coeffs[: last + 1])
        print(f"inline constexpr double kC{n}[] = {{\n    {body}}};")


if __name__ == "__main__":
    sys.exit(main())
