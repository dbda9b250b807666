"""Figure rendering for the CLI report path.

Each report writer has a matching figure so runs drop plot files next to
the delimited output.  Everything renders through the Agg backend; no
interactive state.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .nonlinearity import inverse_plus

__all__ = [
    "plot_condition_probes",
    "plot_scan",
    "plot_profiles",
    "plot_classification",
    "plot_margins",
    "plot_bifurcation",
]

_CLASS_COLORS = {}


def _class_color(label: str):
    if label not in _CLASS_COLORS:
        cycle = plt.rcParams["axes.prop_cycle"].by_key()["color"]
        _CLASS_COLORS[label] = cycle[len(_CLASS_COLORS) % len(cycle)]
    return _CLASS_COLORS[label]


def _save(fig, path):
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_condition_probes(report, path) -> None:
    """Probe expressions behind the growth/asymmetry verdicts, log-log."""
    fig, ax = plt.subplots(figsize=(6, 4))
    by_name = {}
    for name, x, v in report.samples:
        by_name.setdefault(name, []).append((x, v))
    for name, pts in by_name.items():
        xs, vs = zip(*pts)
        ax.loglog(xs, np.abs(vs), marker="o", ms=3, label=name)
    ax.set_xlabel("probe x")
    ax.set_ylabel("|expression|")
    ax.set_title(f"structural probes (verdict: {report.verdict})")
    ax.grid(True, alpha=0.3)
    ax.legend()
    _save(fig, path)


def plot_scan(outcomes, path, boundary_tol: float = 1e-9) -> None:
    """Terminal miss u(1; s) over the scan grid; escapes clipped and marked."""
    s = np.array([o.s for o in outcomes])
    v = np.array([o.terminal for o in outcomes])
    blown = np.array([o.blown for o in outcomes])
    fig, ax = plt.subplots(figsize=(7, 4))
    finite = ~blown
    ax.plot(s[finite], np.clip(v[finite], -1e3, 1e3), ".", ms=2, label="u(1; s)")
    if blown.any():
        ax.plot(s[blown], np.where(v[blown] > 0, 1e3, -1e3), "x", ms=3,
                color="tab:red", label="escaped")
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_ylim(-1.1e3, 1.1e3)
    ax.set_xlabel("initial value s = u(0)")
    ax.set_ylabel("terminal miss (clipped)")
    ax.set_title("shooting scan")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best")
    _save(fig, path)


def plot_profiles(profiles, path) -> None:
    """All solution trajectories overlaid, with the classification level."""
    fig, ax = plt.subplots(figsize=(7, 4))
    tq = np.linspace(0.0, 1.0, 1024)
    level = None
    for prof in profiles:
        ax.plot(tq, prof.eval(tq), lw=1.2, label=f"s = {prof.s0:.6g}")
        pr = prof.problem
        if level is None and pr.nl.kind != "zero":
            try:
                level = inverse_plus(pr.lam + pr.f(tq), pr.nl)
            except Exception:
                level = None
    if level is not None:
        ax.plot(tq, level, "--", color="gray", lw=1.0, label="level g_+^{-1}(lambda+f)")
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("u(t)")
    ax.set_title("solution profiles")
    ax.grid(True, alpha=0.3)
    if profiles:
        ax.legend(fontsize=8)
    _save(fig, path)


def plot_classification(profile, report, path) -> None:
    """One profile with its level-crossing zeros and critical points marked."""
    pr = profile.problem
    tq = np.linspace(0.0, 1.0, 2048)
    uq = profile.eval(tq)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(tq, uq, lw=1.3, label=f"u(t), class {report.class_label}")
    try:
        ax.plot(tq, inverse_plus(pr.lam + pr.f(tq), pr.nl), "--", color="gray",
                lw=1.0, label="crossing level")
    except Exception:
        pass
    for z in report.zeros:
        ax.plot([z.tau], [profile.eval(z.tau)], "o",
                color="tab:red" if z.simple else "tab:orange", ms=6)
    for t, u in report.maxima:
        ax.plot([t], [u], "^", color="tab:green", ms=6)
    for t, u in report.minima:
        ax.plot([t], [u], "v", color="tab:purple", ms=6)
    if report.eta is not None:
        ax.axvline(report.eta, color="tab:blue", lw=0.8, ls=":", label="eta")
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("u")
    ax.set_title(f"classification: k = {report.k}")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    _save(fig, path)


def plot_margins(reports, path) -> None:
    """Margins of every applicable bound entry, one row per solution."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for si, rep in enumerate(reports):
        names = [e.name for e in rep.entries if e.applicable]
        margins = [e.margin for e in rep.entries if e.applicable]
        xs = np.arange(len(names)) + si * 0.15
        colors = ["tab:green" if m > 0 else ("tab:orange" if m == 0 else "tab:red")
                  for m in margins]
        ax.bar(xs, [math.copysign(math.log10(1.0 + abs(m)), m) for m in margins],
               width=0.12, color=colors)
        if si == 0:
            ax.set_xticks(np.arange(len(names)))
            ax.set_xticklabels(names, rotation=45, ha="right", fontsize=8)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_ylabel("signed log10(1 + |margin|)")
    ax.set_title("inequality margins (positive = pass)")
    ax.grid(True, alpha=0.3, axis="y")
    _save(fig, path)


def plot_bifurcation(branches, path) -> None:
    """Branch diagram: initial value s against lambda, colored by class."""
    fig, ax = plt.subplots(figsize=(7, 4))
    seen = set()
    for br in branches:
        lams = [p.lam for p in br.points]
        svals = [p.s for p in br.points]
        label = br.points[0].class_label
        kw = {}
        if label not in seen:
            kw["label"] = label
            seen.add(label)
        ax.plot(lams, svals, "-o", ms=3, lw=1.2, color=_class_color(label), **kw)
    ax.set_xscale("log")
    ax.set_xlabel("lambda")
    ax.set_ylabel("s = u(0)")
    ax.set_title("solution branches")
    ax.grid(True, alpha=0.3)
    if seen:
        ax.legend()
    _save(fig, path)
