"""Quantitative inequality checks on computed solutions, with margins.

Every check produces a named entry comparing a measured quantity against
its bound; pass means strictly positive margin (an exact tie of identical
sides, which occurs for the zero source, is reported as pass-by-equality).
Entry names are the stable identifiers the reports promise downstream
("Prop2.max", "Lemma2.largest", ...).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classification import ClassificationReport
from .nonlinearity import envelope_R, eval_g, eval_g_prime, inverse_plus
from .problem import RadialProblem
from .radial_ivp import SolutionProfile

__all__ = [
    "DEFAULT_B",
    "BoundEntry",
    "BoundsReport",
    "adaptive_simpson",
    "check_extrema_bounds",
    "check_zero_derivative_bounds",
    "check_sturm_gap",
    "check_auxiliary_inequalities",
    "evaluate_bounds",
]

DEFAULT_B = 1.0 / (math.sqrt(2.0) * math.pi)


@dataclass(frozen=True)
class BoundEntry:
    """One inequality evaluation: lhs against rhs with a signed margin."""

    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    applicable: bool = True
    note: str = ""
    inputs: dict = field(default_factory=dict)

    @staticmethod
    def upper(name, lhs, rhs, note="", inputs=None):
        """Entry for an upper bound lhs < rhs; margin = rhs - lhs."""
        margin = rhs - lhs
        passed = margin > 0.0 or (margin == 0.0 and lhs == rhs)
        if margin == 0.0 and passed:
            note = (note + "; " if note else "") + "pass-by-equality"
        return BoundEntry(name, float(lhs), float(rhs), float(margin), passed,
                          note=note, inputs=dict(inputs or {}))

    @staticmethod
    def lower(name, lhs, rhs, note="", inputs=None):
        """Entry for a lower bound lhs > rhs; margin = lhs - rhs."""
        margin = lhs - rhs
        passed = margin > 0.0 or (margin == 0.0 and lhs == rhs)
        if margin == 0.0 and passed:
            note = (note + "; " if note else "") + "pass-by-equality"
        return BoundEntry(name, float(lhs), float(rhs), float(margin), passed,
                          note=note, inputs=dict(inputs or {}))

    @staticmethod
    def not_applicable(name, note, inputs=None):
        return BoundEntry(name, math.nan, math.nan, math.nan, True,
                          applicable=False, note=note, inputs=dict(inputs or {}))

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": None if math.isnan(self.lhs) else self.lhs,
            "rhs": None if math.isnan(self.rhs) else self.rhs,
            "margin": None if math.isnan(self.margin) else self.margin,
            "pass": self.passed,
            "applicable": self.applicable,
            "note": self.note,
            "inputs": dict(self.inputs),
        }


@dataclass
class BoundsReport:
    """All inequality entries evaluated on one solution."""

    entries: list = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(e.passed for e in self.entries if e.applicable)

    def to_json_dict(self) -> dict:
        return {
            "entries": [e.to_json_dict() for e in self.entries],
            "all_pass": self.all_pass,
        }

    def to_table(self) -> str:
        lines = [f"{'check':24s} {'lhs':>14s} {'rhs':>14s} {'margin':>14s} {'pass':>5s}  note"]
        for e in self.entries:
            if not e.applicable:
                lines.append(f"{e.name:24s} {'-':>14s} {'-':>14s} {'-':>14s} {'n/a':>5s}  {e.note}")
            else:
                lines.append(
                    f"{e.name:24s} {e.lhs:14.6g} {e.rhs:14.6g} {e.margin:14.6g}"
                    f" {'ok' if e.passed else 'FAIL':>5s}  {e.note}"
                )
        return "\n".join(lines)


def adaptive_simpson(fun, a: float, b: float, tol: float = 1e-10, max_depth: int = 48) -> float:
    """Adaptive Simpson quadrature to absolute tolerance tol."""
    if a == b:
        return 0.0

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) * (f0 + 4.0 * f1 + f2) / 6.0

    def recurse(x0, x2, f0, f1, f2, whole, tol_, depth):
        xm = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + xm)
        xr = 0.5 * (xm + x2)
        fl, fr = fun(xl), fun(xr)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * tol_:
            return left + right + (left + right - whole) / 15.0
        return recurse(x0, xm, f0, fl, f1, left, 0.5 * tol_, depth + 1) + recurse(
            xm, x2, f1, fr, f2, right, 0.5 * tol_, depth + 1
        )

    fa, fb = fun(a), fun(b)
    fm = fun(0.5 * (a + b))
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def _profile_quadrature(profile: SolutionProfile, fun, tol: float = 1e-10) -> float:
    """Integrate fun over [0, 1] piecewise on the profile's own step intervals
    (the dense output is smooth within each step, with kinks only at nodes)."""
    total = 0.0
    grid = profile.grid
    per = tol / max(1, len(grid) - 1)
    for i in range(len(grid) - 1):
        total += adaptive_simpson(fun, float(grid[i]), float(grid[i + 1]), per)
    return total


def check_extrema_bounds(report: ClassificationReport, problem: RadialProblem) -> list:
    """A-priori amplitude bounds: every maximum under 2R(4(lambda+M)), every
    minimum amplitude within R(lambda+M)."""
    lam, M = problem.lam, problem.M
    rhs_max = 2.0 * float(envelope_R(4.0 * (lam + M), problem.nl))
    rhs_min = float(envelope_R(lam + M, problem.nl))
    inputs = {"lambda": lam, "M": M}
    entries = []
    for beta, ubeta in report.maxima:
        entries.append(
            BoundEntry.upper("Prop2.max", ubeta, rhs_max,
                             inputs={**inputs, "beta": beta})
        )
    for alpha, ualpha in report.minima:
        entries.append(
            BoundEntry.upper("Prop2.min", abs(ualpha), rhs_min,
                             inputs={**inputs, "alpha": alpha})
        )
    return entries


def check_zero_derivative_bounds(
    report: ClassificationReport,
    problem: RadialProblem,
    B: float = DEFAULT_B,
    delta: float = None,
) -> list:
    """Slope lower bounds at the located zeros.

    The largest zero carries the full constant B = 1/(sqrt(2) pi); each
    earlier zero steps the constant down by delta (default B/10), following
    the recurrence that propagates the bound backwards.  Factors are floored
    at zero (such entries pass trivially and say so).
    """
    if not report.zeros:
        return []
    lam = problem.lam
    base = math.sqrt(lam * float(inverse_plus(lam / 2.0, problem.nl)))
    if delta is None:
        delta = B / 10.0
    entries = []
    n_zeros = len(report.zeros)
    for j, rec in enumerate(reversed(report.zeros)):
        factor = max(B - j * delta, 0.0)
        name = "Lemma2.largest" if j == 0 else f"Lemma2.cascade[{j}]"
        note = "cascade floor reached" if factor == 0.0 and j > 0 else ""
        entries.append(
            BoundEntry.lower(
                name,
                abs(rec.u_slope),
                factor * base,
                note=note,
                inputs={"lambda": lam, "B": B, "delta": delta, "tau": rec.tau,
                        "rank_from_largest": j, "n_zeros": n_zeros},
            )
        )
    return entries


def check_sturm_gap(report: ClassificationReport, profile: SolutionProfile) -> BoundEntry:
    """Oscillation gap bound between the level crossing and the next zero of u.

    Locates a in (tau_k, eta) with u(a) = inverse_plus(lambda/2) and checks
    eta - a < sqrt(2) pi sqrt(inverse_plus(lambda/2) / lambda).  Reported as
    not-applicable when the solution has no zeros, no following zero of u,
    or never crosses the level.  Exact for n = 1; the comparison argument
    ignores radial damping, so n > 1 entries are tagged heuristic.
    """
    pr = profile.problem
    lam = pr.lam
    inputs = {"lambda": lam, "n": pr.n}
    if not report.zeros:
        return BoundEntry.not_applicable("Sturm.gap", "no zeros of Phi", inputs)
    if report.eta is None:
        return BoundEntry.not_applicable("Sturm.gap", "no zero of u after the largest tau", inputs)
    tau_k = report.zeros[-1].tau
    eta = report.eta
    level = float(inverse_plus(lam / 2.0, pr.nl))

    ts = np.linspace(tau_k, eta, 512)
    vals = profile.eval(ts) - level
    a = None
    for i in range(len(ts) - 1):
        if vals[i] == 0.0:
            a = float(ts[i])
            break
        if (vals[i] < 0.0) != (vals[i + 1] < 0.0):
            lo_t, hi_t = float(ts[i]), float(ts[i + 1])
            flo = float(vals[i])
            for _ in range(200):
                m = 0.5 * (lo_t + hi_t)
                if m == lo_t or m == hi_t:
                    break
                fm = profile.eval(m) - level
                if (flo < 0.0) != (fm < 0.0):
                    hi_t = m
                else:
                    lo_t, flo = m, fm
            a = 0.5 * (lo_t + hi_t)
            break
    if a is None:
        return BoundEntry.not_applicable(
            "Sturm.gap", "level inverse_plus(lambda/2) not crossed on (tau_k, eta)", inputs
        )
    rhs = math.sqrt(2.0) * math.pi * math.sqrt(level / lam)
    note = "" if pr.n == 1 else "heuristic for n > 1 (radial damping ignored)"
    return BoundEntry.upper(
        "Sturm.gap", eta - a, rhs, note=note,
        inputs={**inputs, "tau_k": tau_k, "eta": eta, "a": a, "level": level},
    )


def check_auxiliary_inequalities(
    profile: SolutionProfile,
    problem: RadialProblem,
    params: tuple = (0.0, 1.0, 1.0, 4.0),
    *,
    quad_tol: float = 1e-10,
    gamma_probes=None,
) -> list:
    """General-formula checks: the mean-value strip integral, the source-work
    bound, and boundedness of the scaled branch-inverse ratio.

    params = (m1, m2, a, b) with m1 < m2 and 0 < a < b.
    """
    m1, m2, a, b = params
    if not m1 < m2:
        raise ValueError("need m1 < m2")
    if not 0.0 < a < b:
        raise ValueError("need 0 < a < b")
    lam, M = problem.lam, problem.M
    nl = problem.nl
    entries = []

    # strip integral of (g - lambda) between the branch-inverse levels,
    # against the mean-value bound evaluated at the upper level (the strict
    # end of the bound; the lower level would give the lax certified form)
    x1 = float(inverse_plus(lam + m1, nl))
    x2 = float(inverse_plus(lam + m2, nl))
    lhs6 = abs(adaptive_simpson(lambda u: float(eval_g(u, nl)) - lam, x1, x2, quad_tol))
    rhs6 = m2 * abs((m2 - m1) / float(eval_g_prime(x2, nl)))
    entries.append(
        BoundEntry.upper("Eq6", lhs6, rhs6,
                         inputs={"lambda": lam, "m1": m1, "m2": m2, "x1": x1, "x2": x2})
    )

    # work of the source along the trajectory
    fsrc = problem.f
    lhs8 = abs(_profile_quadrature(profile, lambda t: float(fsrc(t)) * profile.eval_deriv(t), quad_tol))
    rhs8 = 6.0 * M * float(envelope_R(4.0 * (lam + M), nl))
    entries.append(BoundEntry.upper("Eq8", lhs8, rhs8, inputs={"lambda": lam, "M": M}))

    # scaled ratio of branch inverses: finite and stabilized along probes
    if gamma_probes is None:
        gamma_probes = np.logspace(2, 9, 15)
    probes = np.asarray(gamma_probes, dtype=float)
    ratios = inverse_plus(b * probes, nl) / inverse_plus(a * probes, nl)
    gamma_hat = float(np.max(ratios))
    finite = bool(np.all(np.isfinite(ratios)))
    instability = abs(ratios[-1] - ratios[-2]) / abs(ratios[-1])
    entry = BoundEntry.upper(
        "Eq9", float(instability), 0.01,
        note="" if finite else "non-finite ratio",
        inputs={"a": a, "b": b, "gamma_hat": gamma_hat,
                "probe_lo": float(probes[0]), "probe_hi": float(probes[-1])},
    )
    if not finite:
        entry = BoundEntry("Eq9", float(instability), 0.01, -math.inf, False,
                           note="non-finite ratio", inputs=entry.inputs)
    entries.append(entry)
    return entries


def evaluate_bounds(
    profile: SolutionProfile,
    report: ClassificationReport,
    *,
    B: float = DEFAULT_B,
    delta: float = None,
    aux_params: tuple = (0.0, 1.0, 1.0, 4.0),
    lambda_min: float = 50.0,
) -> BoundsReport:
    """Run every applicable check on one classified solution."""
    problem = profile.problem
    entries = []
    entries.extend(check_extrema_bounds(report, problem))
    entries.extend(check_zero_derivative_bounds(report, problem, B=B, delta=delta))
    entries.append(check_sturm_gap(report, profile))
    entries.extend(check_auxiliary_inequalities(profile, problem, aux_params))
    result = BoundsReport(entries=entries)
    if problem.lam < lambda_min:
        result.entries.append(
            BoundEntry.not_applicable(
                "regime",
                f"lambda={problem.lam:g} below configured large-lambda regime "
                f"lambda_min={lambda_min:g}; checks reported, not asserted",
                {"lambda": problem.lam, "lambda_min": lambda_min},
            )
        )
    return result
