#!/usr/bin/env python3
"""Independent high-precision reference values frozen into the unit tests.

Run: python3 tests/oracles/oracles.py
"""
import mpmath as mp
import sympy as sp

mp.mp.dps = 50


def f_phase(t, k):
    t, k = mp.mpf(t), mp.mpf(k)
    return 2 * t * mp.asinh(mp.sqrt(mp.pi * k / (2 * t))) + mp.sqrt(2 * mp.pi * k * t + mp.pi**2 * k**2) - mp.pi / 4


def main():
    print("f_phase(1e4, 3)          =", mp.nstr(f_phase(10**4, 3), 25))
    print("f_phase(1e8, 7)          =", mp.nstr(f_phase(10**8, 7), 25))
    print("f_phase_dt(1e4, 10)      =", mp.nstr(mp.diff(lambda t: f_phase(t, 10), 10**4), 25))

    r = [mp.sqrt(x) for x in (2, 3, 5, 7)]
    D = 2 * mp.sqrt(2 * mp.pi) * (r[0] + r[1] - r[2] - r[3])
    E = mp.sqrt(2 * mp.pi**3) / 6 * (2 * r[0] + 3 * r[1] - 5 * r[2] - 7 * r[3])
    print("D(2,3,5,7)               =", mp.nstr(D, 25))
    print("E(2,3,5,7)               =", mp.nstr(E, 25))

    mp.mp.dps = 30
    print("|zeta(1/2+100i)|^2       =", mp.nstr(abs(mp.zeta(mp.mpc(0.5, 100)))**2, 25))
    print("|zeta(1/2+5000.5i)|^2    =", mp.nstr(abs(mp.zeta(mp.mpc(0.5, 5000.5)))**2, 25))
    print("Z(1000)                  =", mp.nstr(mp.siegelz(1000), 25))
    print("theta(100)               =", mp.nstr(mp.siegeltheta(100), 25))
    print("first zero               =", mp.nstr(mp.zetazero(1).imag, 25))
    mp.mp.dps = 20
    ms = mp.quad(lambda t: abs(mp.zeta(mp.mpc(0.5, t)))**2, mp.linspace(100, 110, 41))
    print("int_100^110 |zeta|^2     =", mp.nstr(ms, 18))
    ms = mp.quad(lambda t: abs(mp.zeta(mp.mpc(0.5, t)))**2, mp.linspace(0, 100, 401))
    main_term = 100 * (mp.log(100 / (2 * mp.pi)) + 2 * mp.euler - 1)
    print("E(100)                   =", mp.nstr(ms - main_term, 18))

    # Expansion of f_phase in x = k / t: coefficients of k^{3/2} t^{-1/2}, k^{5/2} t^{-3/2}, k^{7/2} t^{-5/2}
    x, t = sp.symbols("x t", positive=True)
    k = x * t
    f = 2 * t * sp.asinh(sp.sqrt(sp.pi * k / (2 * t))) + sp.sqrt(2 * sp.pi * k * t + sp.pi**2 * k**2)
    g = sp.simplify(f / t)  # function of x only, times t
    ser = sp.series(g.subs(x, sp.Symbol("u", positive=True) ** 2), sp.Symbol("u", positive=True), 0, 9).removeO()
    u = sp.Symbol("u", positive=True)
    for p in (1, 3, 5, 7):
        c = sp.nsimplify(ser.coeff(u, p))
        print(f"taylor coeff u^{p}          =", c, "=", sp.N(c, 25))


if __name__ == "__main__":
    main()
