#!/usr/bin/env python3
"""Regenerate the frozen oracle values used by the test suite.

Everything here is independent of the package under test: integration uses
scipy (DOP853 / RK45), root isolation is a dense scan at ds = 1e-3 with
bisection, and level crossings use brentq on scipy dense output.  Output is
a JSON blob; the numbers frozen in tests/frozen_oracles.py come from it.

Run:  python3 scripts/generate_oracles.py > /tmp/oracles.json    (~15 min)
"""
import json
import math
import sys

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

GUARD = 1e12


def make_rhs(n, lam, p, q, f=None):
    fzero = f is None

    def rhs(t, y):
        u, du = y
        g = u**p if u >= 0.0 else (-u) ** q
        src = 0.0 if fzero else f(t)
        return [du, -((n - 1) / t) * du - (g - lam - src)]

    return rhs


def shoot(s0, n, lam, p, q, f=None, rtol=1e-10, atol=1e-10, method="DOP853",
          dense=False, neg_exit=None):
    """Integrate from rest at u(0)=s0; returns (u(1) or signed marker, sol)."""
    rhs = make_rhs(n, lam, p, q, f)
    f0 = 0.0 if f is None else f(0.0)
    g0 = s0**p if s0 >= 0.0 else (-s0) ** q
    upp0 = -(g0 - lam - f0) / n
    t0 = 1e-6
    y0 = [s0 + 0.5 * upp0 * t0 * t0, upp0 * t0]

    events = []

    def hit_hi(t, y):
        return y[0] - GUARD
    hit_hi.terminal = True
    events.append(hit_hi)

    if neg_exit is not None:
        def hit_lo(t, y):
            return y[0] + neg_exit
        hit_lo.terminal = True
        hit_lo.direction = -1
        events.append(hit_lo)
    else:
        def hit_lo(t, y):
            return y[0] + GUARD
        hit_lo.terminal = True
        events.append(hit_lo)

    sol = solve_ivp(rhs, (t0, 1.0), y0, method=method, rtol=rtol, atol=atol,
                    events=events, dense_output=dense)
    if sol.t_events[0].size:
        return GUARD, sol
    if sol.t_events[1].size:
        return -GUARD, sol
    return float(sol.y[0, -1]), sol


def dense_scan_roots(n, lam, p, q, f=None, ds=1e-3, window=None, bisect_iters=60):
    """The brute-force oracle: uniform ds scan + bisection per sign change."""
    M = 0.0 if f is None else (0.5 + 0.5 * math.pi)  # only the cosine source is used
    if window is None:
        R4 = max((4 * (lam + M)) ** 0.5, (4 * (lam + M)) ** (1.0 / q))
        f0 = 0.0 if f is None else f(0.0)
        window = (-2 * R4, (lam + f0) ** 0.5)
    lo, hi = window
    neg_exit = 2 * max((4 * (lam + M)) ** 0.5, (4 * (lam + M)) ** (1.0 / q)) + 10.0
    count = int(math.floor((hi - lo) / ds)) + 1
    roots = []
    prev_s, prev_v = None, None
    for i in range(count):
        s = lo + i * ds
        v, _ = shoot(s, n, lam, p, q, f, neg_exit=neg_exit)
        if prev_v is not None and (prev_v < 0) != (v < 0):
            a, b, fa = prev_s, s, prev_v
            best = (abs(fa), a)
            for _ in range(bisect_iters):
                m = 0.5 * (a + b)
                if m == a or m == b:
                    break
                fm, _ = shoot(m, n, lam, p, q, f, rtol=1e-12, atol=1e-12,
                              neg_exit=neg_exit)
                if abs(fm) < best[0]:
                    best = (abs(fm), m)
                if (fa < 0) != (fm < 0):
                    b = m
                else:
                    a, fa = m, fm
            roots.append({"s": best[1], "miss": best[0]})
        prev_s, prev_v = s, v
    return {"window": [lo, hi], "ds": ds, "count": len(roots), "roots": roots}


def z2_anchors(lam, s_root, p=2.0, q=5.0):
    """Classification anchors for a sign-changing solution at lam (f = 0)."""
    _, sol = shoot(s_root, 1, lam, p, q, rtol=1e-12, atol=1e-12, dense=True)
    level = lam ** (1.0 / p)
    uf = lambda t: float(sol.sol(t)[0])
    duf = lambda t: float(sol.sol(t)[1])
    ts = np.linspace(1e-6, 1.0, 20001)
    us = sol.sol(ts)[0]
    pv = us - level
    taus = [float(brentq(lambda t: uf(t) - level, ts[i], ts[i + 1], xtol=1e-14))
            for i in range(len(ts) - 1) if (pv[i] < 0) != (pv[i + 1] < 0)]
    betas = []
    dv = sol.sol(ts)[1]
    for i in range(len(ts) - 1):
        if dv[i] > 0 >= dv[i + 1]:
            betas.append(float(brentq(duf, ts[i], ts[i + 1], xtol=1e-14)))
    out = {"s": s_root, "taus": taus, "betas": [[b, uf(b)] for b in betas]}
    if taus:
        tau_k = taus[-1]
        eta = 1.0
        for i in range(len(ts) - 1):
            if ts[i] > tau_k and (us[i] < 0) != (us[i + 1] < 0):
                eta = float(brentq(uf, ts[i], ts[i + 1], xtol=1e-14))
                break
        lvl2 = (lam / 2.0) ** (1.0 / p)
        a = float(brentq(lambda t: uf(t) - lvl2, tau_k, eta, xtol=1e-14))
        out.update({"eta": eta, "sturm_a": a, "sturm_gap": eta - a,
                    "du_tau_k": duf(tau_k)})
    return out


def main():
    out = {}

    # two-integrator terminal anchors at lam=100 (rtol 1e-13, two methods)
    for tag, s0 in [("s0", 0.0), ("sm3", -3.0)]:
        v1, _ = shoot(s0, 1, 100.0, 2, 5, rtol=1e-13, atol=1e-13, method="DOP853")
        v2, _ = shoot(s0, 1, 100.0, 2, 5, rtol=1e-13, atol=1e-13, method="RK45")
        out[f"lam100_terminal_{tag}"] = {"dop853": v1, "rk45": v2}
    print("terminal anchors done", file=sys.stderr)

    # brute-force scans, f = 0
    for lam in (50.0, 100.0, 200.0, 400.0):
        out[f"lam{int(lam)}_f0"] = dense_scan_roots(1, lam, 2, 5)
        print(f"scan lam={lam} f=0 done", file=sys.stderr)

    # brute-force scans, cosine source 0.5*cos(pi t)
    fcos = lambda t: 0.5 * math.cos(math.pi * t)
    for lam in (50.0, 100.0, 200.0, 400.0):
        out[f"lam{int(lam)}_cos"] = dense_scan_roots(1, lam, 2, 5, f=fcos)
        print(f"scan lam={lam} cos done", file=sys.stderr)

    # lam=600 structure (sign-changing class exists here)
    res600 = dense_scan_roots(1, 600.0, 2, 5)
    out["lam600_f0"] = res600
    print("scan lam=600 done", file=sys.stderr)
    for r in res600["roots"]:
        anch = z2_anchors(600.0, r["s"])
        if len(anch["taus"]) == 2:
            out.setdefault("lam600_z2", []).append(anch)

    json.dump(out, sys.stdout, indent=1)


if __name__ == "__main__":
    main()
