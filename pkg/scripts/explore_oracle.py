#!/usr/bin/env python3
"""Exploratory oracle runs (scipy-based, independent of the package).

Dev-only: maps the terminal-value landscape u(1; s) for the default
piecewise-power problem, locates shooting roots by dense scan + bisection,
and measures how tightly |u(1)| can be driven at each root.  Results get
frozen into the test suite.
"""
import numpy as np
from scipy.integrate import solve_ivp

GUARD = 1e12


def make_rhs(n, lam, p, q, f=None):
    fzero = f is None

    def rhs(t, y):
        u, du = y
        g = u**p if u >= 0.0 else (-u) ** q
        src = 0.0 if fzero else f(t)
        if t == 0.0:
            return [du, -(g - lam - src) / n]
        return [du, -((n - 1) / t) * du - (g - lam - src)]

    return rhs


def terminal(s0, n, lam, p, q, f=None, rtol=1e-12, atol=1e-12):
    """Return u(1;s0) or +/-GUARD marker on blow-up."""
    rhs = make_rhs(n, lam, p, q, f)
    f0 = 0.0 if f is None else f(0.0)
    upp0 = -(abs(s0) ** q * (s0 < 0) + s0**p * (s0 >= 0) - lam - f0) / n
    t0 = 1e-6
    y0 = [s0 + 0.5 * upp0 * t0 * t0, upp0 * t0]

    def hit_hi(t, y):
        return y[0] - GUARD

    def hit_lo(t, y):
        return y[0] + GUARD

    hit_hi.terminal = True
    hit_lo.terminal = True
    sol = solve_ivp(rhs, (t0, 1.0), y0, method="DOP853", rtol=rtol, atol=atol,
                    events=(hit_hi, hit_lo), dense_output=False)
    if sol.t_events[0].size:
        return GUARD, sol.t_events[0][0]
    if sol.t_events[1].size:
        return -GUARD, sol.t_events[1][0]
    return sol.y[0, -1], None


def scan_roots(n, lam, p, q, f=None, ds=1e-3, window=None, verbose=True):
    """Dense scan + bisection; returns refined roots with sensitivity info."""
    if window is None:
        R4 = max((4 * lam) ** (1 / p), (4 * lam) ** (1 / q))
        window = (-2 * R4, lam ** (1 / p))
    lo, hi = window
    svals = np.arange(lo, hi + ds / 2, ds)
    miss = np.empty_like(svals)
    for i, s in enumerate(svals):
        miss[i], _ = terminal(s, n, lam, p, q, f)
    roots = []
    sign = np.sign(miss)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        a, b = svals[i], svals[i + 1]
        fa = miss[i]
        best = (np.inf, None)
        for _ in range(200):
            m = 0.5 * (a + b)
            if m == a or m == b:
                break
            fm, _ = terminal(m, n, lam, p, q, f)
            if abs(fm) < best[0]:
                best = (abs(fm), m)
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
            if best[0] <= 1e-10:
                break
        roots.append((best[1], best[0], b - a))
        if verbose:
            print(f"  root s={best[1]:.15g}  |u(1)|={best[0]:.3g} width={b - a:.3g}")
    return svals, miss, roots


if __name__ == "__main__":
    import sys
    lam = float(sys.argv[1]) if len(sys.argv) > 1 else 100.0
    print(f"lambda={lam}, n=1, f=0, p=2, q=5")
    print("terminal(0) =", terminal(0.0, 1, lam, 2, 5))
    print("terminal(-3) =", terminal(-3.0, 1, lam, 2, 5))
    svals, miss, roots = scan_roots(1, lam, 2, 5, ds=1e-2)
    print(f"{len(roots)} roots at ds=1e-2")
