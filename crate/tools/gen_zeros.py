#!/usr/bin/env python3
"""Generate a table of zeta-zero ordinates for the test fixtures.

Ordinates below LOW_CUTOFF come from mpmath.zetazero; everything above is
located with a vectorised Riemann-Siegel Z(t) (correction terms C0..C4),
bracketed on a fine grid and refined by bisection.

Usage: python3 tools/gen_zeros.py OUT_PATH [T_MAX]
"""

import math
import sys

import mpmath
import numpy as np

LOW_COUNT = 400  # zeros taken from mpmath directly (t < ~650)
GRID_STEP = 0.01
CHUNK = 40000

mpmath.mp.dps = 40


def _psi(p):
    return mpmath.cos(2 * mpmath.pi * (p * p - p - mpmath.mpf(1) / 16)) / mpmath.cos(2 * mpmath.pi * p)


def _psi_taylor(deg=70):
    # Psi is entire; its Taylor series about 1/2 converges on [0, 1].
    coeffs = mpmath.taylor(_psi, mpmath.mpf(1) / 2, deg)
    return np.polynomial.Polynomial([float(c) for c in coeffs])


PSI = _psi_taylor()
PI = math.pi
D = [PSI.deriv(k) if k else PSI for k in range(13)]


def _corrections(p):
    u = p - 0.5
    d = [D[k](u) for k in range(13)]
    c0 = d[0]
    c1 = -d[3] / (96 * PI**2)
    c2 = d[2] / (64 * PI**2) + d[6] / (18432 * PI**4)
    c3 = -d[1] / (64 * PI**2) - d[5] / (3840 * PI**4) - d[9] / (5308416 * PI**6)
    c4 = (
        d[0] / (128 * PI**2)
        + 19 * d[4] / (24576 * PI**4)
        + 11 * d[8] / (5898240 * PI**6)
        + d[12] / (2038431744 * PI**8)
    )
    return c0, c1, c2, c3, c4


def theta(t):
    return (
        t / 2 * np.log(t / (2 * PI))
        - t / 2
        - PI / 8
        + 1 / (48 * t)
        + 7 / (5760 * t**3)
        + 31 / (80640 * t**5)
    )


def z_rs(t):
    t = np.asarray(t, dtype=float)
    a = np.sqrt(t / (2 * PI))
    n_terms = np.floor(a).astype(int)
    nmax = int(n_terms.max())
    th = theta(t)
    total = np.zeros_like(t)
    for n in range(1, nmax + 1):
        mask = n_terms >= n
        total += np.where(mask, np.cos(th - t * math.log(n)) / math.sqrt(n), 0.0)
    total *= 2
    p = a - n_terms
    c = _corrections(p)
    corr = c[0] + c[1] / a + c[2] / a**2 + c[3] / a**3 + c[4] / a**4
    sign = np.where(n_terms % 2 == 1, 1.0, -1.0)  # (-1)^(N-1)
    return total + sign * corr / np.sqrt(a)


def refine(lo, hi, steps=48):
    flo = z_rs(lo)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        fm = z_rs(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def scan(t0, t1):
    brackets = []
    suspicious = []
    start = t0
    while start < t1:
        grid = start + GRID_STEP * np.arange(CHUNK + 1)
        grid = grid[grid <= t1 + GRID_STEP]
        z = z_rs(grid)
        s = np.sign(z)
        idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
        brackets.extend(zip(grid[idx], grid[idx + 1]))
        # local minima of |Z| without a sign change: possible missed close pair
        az = np.abs(z)
        inner = np.arange(1, len(z) - 1)
        lm = inner[(az[inner] < az[inner - 1]) & (az[inner] < az[inner + 1])]
        for i in lm:
            if s[i - 1] == s[i] == s[i + 1] and az[i] < 0.05:
                suspicious.append((grid[i - 1], grid[i + 1]))
        start = grid[-1]
    return brackets, suspicious


def resolve_suspicious(intervals):
    extra = []
    for a, b in intervals:
        fine = np.linspace(a, b, 2001)
        z = z_rs(fine)
        s = np.sign(z)
        idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
        extra.extend(zip(fine[idx], fine[idx + 1]))
    return extra


def main():
    out = sys.argv[1]
    t_max = float(sys.argv[2]) if len(sys.argv) > 2 else 75000.0

    low = [float(mpmath.zetazero(n).imag) for n in range(1, LOW_COUNT + 1)]
    t_switch = 0.5 * (low[-1] + low[-2])
    low = [g for g in low if g < t_switch]

    brackets, suspicious = scan(t_switch, t_max)
    extra = resolve_suspicious(suspicious)
    all_br = sorted(set(brackets) | set(extra))
    lo = np.array([b[0] for b in all_br])
    hi = np.array([b[1] for b in all_br])
    high = refine(lo, hi)
    high = high[(high > t_switch) & (high <= t_max)]

    # overlap check against mpmath for a handful of zeros above the switch
    for n in (LOW_COUNT + 1, LOW_COUNT + 50):
        ref = float(mpmath.zetazero(n).imag)
        got = high[n - len(low) - 1]
        assert abs(ref - got) < 1e-7, (n, ref, got)

    zeros = np.concatenate([np.array(low), np.sort(high)])
    assert np.all(np.diff(zeros) > 0)
    with open(out, "w") as fh:
        fh.write("# Imaginary parts of the nontrivial zeros of zeta(s), ascending.\n")
        fh.write("# Generated by tools/gen_zeros.py (mpmath below t=%.3f, Riemann-Siegel above).\n" % t_switch)
        fh.write("# height_max = %.6f\n" % t_max)
        for g in zeros:
            fh.write("%.12f\n" % g)
    print(len(zeros), "zeros;", len(suspicious), "suspicious intervals,", len(extra), "extra brackets")


if __name__ == "__main__":
    main()
