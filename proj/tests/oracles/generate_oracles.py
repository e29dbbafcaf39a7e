"""Regenerates oracle_values.hpp. Run from this directory:  python3 generate_oracles.py

Every value is computed independently of the C++ library: exact rationals (sympy) for the
polynomial families and 3j symbols, scipy for spherical harmonics, composite Simpson for the
tan13 CDF.
"""
import math

import numpy as np
import sympy as sp
import scipy.special
from sympy.physics.wigner import wigner_3j

x = sp.Symbol("x")
out = []


def emit(line=""):
    out.append(line)


def rodrigues_jacobi(a, xi, lam, xv):
    # P_a^(xi,lam)(x) = (-1)^a / (2^a a!) (1-x)^-xi (1+x)^-lam d^a/dx^a [(1-x)^(xi+a) (1+x)^(lam+a)]
    expr = (1 - x) ** (xi + a) * (1 + x) ** (lam + a)
    d = sp.diff(expr, x, a)
    poly = sp.simplify((-1) ** a / (2**a * sp.factorial(a)) * d / ((1 - x) ** xi * (1 + x) ** lam))
    return sp.nsimplify(sp.expand(poly)).subs(x, xv)


def assoc_legendre_rodrigues(l, k, xv):
    # P_l^k(x) = (-1)^k (1-x^2)^(k/2) d^k/dx^k P_l(x), P_l by Rodrigues
    pl = sp.diff((x**2 - 1) ** l, x, l) / (2**l * sp.factorial(l))
    expr = (-1) ** k * (1 - x**2) ** sp.Rational(k, 2) * sp.diff(pl, x, k)
    return sp.N(expr.subs(x, xv), 30)


def wigner_d_formula(l, k, n, theta):
    xi, lam = abs(k - n), abs(k + n)
    a = l - (xi + lam) // 2
    gamma = sp.factorial(a) * sp.factorial(a + xi + lam) / (sp.factorial(a + xi) * sp.factorial(a + lam))
    omega = 1 if n >= k else (-1) ** (n - k)
    t = sp.nsimplify(theta)
    val = omega * sp.sqrt(gamma) * sp.sin(t / 2) ** xi * sp.cos(t / 2) ** lam * rodrigues_jacobi(a, xi, lam, sp.cos(t))
    return sp.N(val, 30)


emit("#pragma once")
emit("// Generated by generate_oracles.py; do not edit by hand.")
emit("")
emit("namespace oracle {")
emit("")
emit("struct JacobiCase { int alpha, xi, lambda; double x, value; };")
emit("inline constexpr JacobiCase kJacobi[] = {")
rationals = [sp.Integer(0), sp.Rational(1, 2), sp.Rational(-1, 2), sp.Integer(1), sp.Integer(-1), sp.Rational(1, 4)]
for a in range(0, 7):
    for xi in range(0, 4):
        for lam in range(0, 4):
            for xv in rationals:
                v = rodrigues_jacobi(a, xi, lam, xv)
                emit(f"    {{{a}, {xi}, {lam}, {float(xv)!r}, {float(v)!r}}},")
emit("};")
emit("")

emit("struct LegendreCase { int l, k; double x, value; };")
emit("inline constexpr LegendreCase kLegendre[] = {")
for l in range(0, 7):
    for k in range(0, l + 1):
        for xv in [sp.Rational(1, 2), sp.Rational(-3, 10), sp.Rational(9, 10), sp.Integer(0)]:
            emit(f"    {{{l}, {k}, {float(xv)!r}, {float(assoc_legendre_rodrigues(l, k, xv))!r}}},")
emit("};")
emit("")

emit("struct WignerDCase { int l, k, n; double theta, value; };")
emit("inline constexpr WignerDCase kWignerSmallD[] = {")
for l in range(0, 4):
    for k in range(-l, l + 1):
        for n in range(-l, l + 1):
            for th in [sp.Rational(7, 10), sp.Rational(21, 10)]:
                emit(f"    {{{l}, {k}, {n}, {float(th)!r}, {float(wigner_d_formula(l, k, n, th))!r}}},")
emit("};")
emit("")

emit("struct ThreeJCase { int l1, l2, l3, k1, k2, k3; double value; };")
emit("inline constexpr ThreeJCase kThreeJ[] = {")
rng = np.random.default_rng(5)
cases = [(1, 1, 0, 0, 0, 0), (1, 1, 1, 0, 0, 0), (2, 1, 1, 1, 1, 1), (2, 2, 2, 0, 0, 0), (3, 2, 1, -1, 1, 0)]
while len(cases) < 80:
    l1, l2 = rng.integers(0, 6, 2)
    l3 = rng.integers(abs(l1 - l2), l1 + l2 + 1)
    k1 = rng.integers(-l1, l1 + 1)
    k2 = rng.integers(-l2, l2 + 1)
    k3 = -(k1 + k2)
    if abs(k3) <= l3:
        cases.append(tuple(int(v) for v in (l1, l2, l3, k1, k2, k3)))
for c in cases:
    emit(f"    {{{', '.join(map(str, c))}, {float(sp.N(wigner_3j(*c), 30))!r}}},")
emit("};")
emit("")

emit("struct HarmonicCase { int l, k; double theta, phi, re, im; };")
emit("inline constexpr HarmonicCase kHarmonic[] = {")
for l in range(0, 6):
    for k in range(-l, l + 1):
        for th, ph in [(0.4, 1.3), (2.2, 5.1)]:
            # Condon-Shortley phase included in both scipy spellings
            if hasattr(scipy.special, "sph_harm_y"):
                v = complex(scipy.special.sph_harm_y(l, k, th, ph))
            else:
                v = complex(scipy.special.sph_harm(k, l, ph, th))
            emit(f"    {{{l}, {k}, {th!r}, {ph!r}, {v.real!r}, {v.imag!r}}},")
emit("};")
emit("")


def tan13_density(t):
    return np.abs(np.tan(t)) ** (1.0 / 3.0)


def simpson(a, b, n=1_000_000):
    if b <= a:
        return 0.0
    t = np.linspace(a, b, n + 1)
    f = tan13_density(t)
    h = (b - a) / n
    return h / 3 * (f[0] + f[-1] + 4 * f[1:-1:2].sum() + 2 * f[2:-1:2].sum())


# int_0^b |tan t|^(1/3) dt for b <= pi/2. The density blows up at pi/2, so past t = 1 the
# substitution t = pi/2 - w^(3/2) turns the integrand into a smooth function of w.
def half_integral(b):
    if b <= 1.0:
        return simpson(0.0, b)
    w_hi = (math.pi / 2 - 1.0) ** (2.0 / 3.0)
    w_lo = (math.pi / 2 - b) ** (2.0 / 3.0)
    n = 1_000_000
    w = np.linspace(w_lo, w_hi, n + 1)
    w_safe = np.where(w == 0.0, 1e-300, w)
    g = np.abs(np.tan(math.pi / 2 - w_safe ** 1.5)) ** (1 / 3) * 1.5 * np.sqrt(w_safe)
    g = np.where(w == 0.0, 1.5, g)  # limit of the smooth integrand at w = 0
    h = (w_hi - w_lo) / n
    tail = h / 3 * (g[0] + g[-1] + 4 * g[1:-1:2].sum() + 2 * g[2:-1:2].sum())
    return simpson(0.0, 1.0) + tail


total_half = half_integral(math.pi / 2)
total = 2 * total_half
emit(f"inline constexpr double kTan13Normalizer = {float(total)!r};  // int_0^pi |tan t|^(1/3) dt")
emit("struct CdfCase { double theta, value; };")
emit("inline constexpr CdfCase kTan13Cdf[] = {")
for th in [0.1, 0.5, 1.0, 1.3, 1.5, 1.56, math.pi / 2, 1.7, 2.0, 2.6, 3.0]:
    if th <= math.pi / 2:
        v = half_integral(th) / total
    else:
        v = 1.0 - half_integral(math.pi - th) / total
    emit(f"    {{{th!r}, {float(v)!r}}},")
emit("};")
emit("")

emit(f"inline constexpr double kWelch_50_100 = {math.sqrt(50 / (50 * 99))!r};")
emit("")
emit("}  // namespace oracle")

with open("oracle_values.hpp", "w") as f:
    f.write("\n".join(out) + "\n")
print(f"wrote {len(out)} lines")
