"""Shooting on u(0): scan, bracket, bisect, and admissibility filtering.

The boundary miss u(1; s) is continuous where finite; escaping trajectories
contribute signed markers so sign changes still isolate roots.  Near the
admissibility boundary g(s) = lambda + f(0) the miss map is exponentially
steep (trajectories linger at the unstable equilibrium), so bisection is
allowed to run down to the floating-point resolution of s and the best
iterate seen is kept; the achieved |u(1)| is recorded per solution.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from .nonlinearity import envelope_R, inverse_plus
from .problem import RadialProblem
from .radial_ivp import BlowUpError, IntegratorConfig, SolutionProfile, integrate

__all__ = [
    "ShootingOutcome",
    "SolutionSet",
    "boundary_miss",
    "filter_admissible",
    "default_scan_window",
    "solve_all",
]

ADMISSIBLE_TOL = 1e-9


@dataclass(frozen=True)
class ShootingOutcome:
    """Terminal record for one scanned initial value."""

    s: float
    terminal: float
    blown: bool = False


@dataclass
class SolutionSet:
    """Refined shooting solutions plus the scan evidence that produced them."""

    solutions: list = field(default_factory=list)   # SolutionProfile, sorted by s
    misses: list = field(default_factory=list)      # achieved |u(1)| per solution
    brackets: list = field(default_factory=list)    # (s_lo, s_hi) sign-change intervals
    outcomes: list = field(default_factory=list)    # ShootingOutcome per scan node
    meta: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "solutions": [
                {
                    "s": prof.s0,
                    "u1": prof.boundary_value,
                    "boundary_miss": miss,
                    "nodes": len(prof.grid),
                }
                for prof, miss in zip(self.solutions, self.misses)
            ],
            "brackets": [[a, b] for a, b in self.brackets],
            "meta": dict(self.meta),
        }


def _scan_config(problem: RadialProblem, config: IntegratorConfig) -> IntegratorConfig:
    """Attach a certified negative-escape exit for n = 1 scans (pure speed)."""
    if config.neg_exit is not None or problem.n != 1 or problem.nl.kind == "zero":
        return config
    try:
        exit_amp = 2.0 * float(envelope_R(4.0 * (problem.lam + problem.M), problem.nl)) + 10.0
    except Exception:
        return config
    return dataclasses.replace(config, neg_exit=exit_amp)


def boundary_miss(s: float, problem: RadialProblem, config: IntegratorConfig = None):
    """u(1; s), or a signed guard-magnitude marker when the trajectory escapes.

    Returns (value, profile); profile is None for escaped trajectories.
    """
    cfg = config or IntegratorConfig()
    try:
        prof = integrate(s, problem, cfg)
        return prof.boundary_value, prof
    except BlowUpError as e:
        return e.sign * cfg.guard, None


def filter_admissible(profile: SolutionProfile) -> bool:
    """True iff u'(0) = 0 and u has a local minimum at t = 0.

    The minimum condition is u''(0) = -(g(u(0)) - lambda - f(0))/n >= -tol,
    i.e. g(u(0)) <= lambda + f(0) + n*tol.
    """
    if profile.du[0] != 0.0:
        return False
    pr = profile.problem
    g0 = pr.nl(float(profile.u[0]))
    return g0 <= pr.lam + pr.f(0.0) + pr.n * ADMISSIBLE_TOL


def default_scan_window(problem: RadialProblem) -> tuple:
    """[-2 R(4(lambda+M)), inverse_plus(lambda+f(0))].

    Lower end: a-priori amplitude bound (no solution can start below it);
    upper end: the admissibility boundary for a local minimum at t = 0.
    """
    lo = -2.0 * float(envelope_R(4.0 * (problem.lam + problem.M), problem.nl))
    hi = float(inverse_plus(problem.lam + problem.f(0.0), problem.nl))
    return lo, hi


def _refine_bracket(problem, cfg, a, fa, b, fb, boundary_tol, max_iter=220):
    """Bisect a sign-change bracket of the miss map.

    Keeps the iterate with the smallest finite |u(1)|; stops when the
    boundary tolerance is met or the bracket collapses in floats (the miss
    map can be steeper than boundary_tol/ulp near the admissibility
    boundary, in which case the best achievable iterate is returned).
    """
    best = (math.inf, None, None)  # |miss|, s, profile
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        if m == a or m == b:
            break
        fm, prof = boundary_miss(m, problem, cfg)
        if prof is not None and abs(fm) < best[0]:
            best = (abs(fm), m, prof)
        if abs(fm) <= boundary_tol:
            break
        # signs stay bracketed at every step (escape markers carry signs)
        if (fa < 0.0) != (fm < 0.0):
            b, fb = m, fm
        else:
            a, fa = m, fm
    return best


def solve_all(
    problem: RadialProblem,
    s_lo: float = None,
    s_hi: float = None,
    n_scan: int = 2000,
    *,
    config: IntegratorConfig = None,
    boundary_tol: float = 1e-9,
    merge_tol: float = 1e-8,
    refine_max_step: float = 1.0 / 1024.0,
) -> SolutionSet:
    """Find every admissible shooting solution in the scan window.

    Evaluates the boundary miss on a uniform n_scan grid, refines every
    sign change (escape markers count with their sign) by bisection, keeps
    refined profiles that pass filter_admissible, and merges duplicates
    closer than merge_tol in s.  An empty SolutionSet is a valid result.

    Refinement and the returned profiles use a finer step ceiling than the
    scan: the dense-output curvature error scales with the square of the
    step, and the residual certification on returned solutions needs the
    finer grid, while scan trajectories only contribute a sign.
    """
    if s_lo is None or s_hi is None:
        d_lo, d_hi = default_scan_window(problem)
        s_lo = d_lo if s_lo is None else s_lo
        s_hi = d_hi if s_hi is None else s_hi
    if not s_lo < s_hi:
        raise ValueError("scan window must satisfy s_lo < s_hi")
    if n_scan < 100:
        raise ValueError("n_scan must be at least 100")

    cfg = _scan_config(problem, config or IntegratorConfig())
    fine_cfg = dataclasses.replace(cfg, max_step=min(cfg.max_step, refine_max_step))
    svals = np.linspace(s_lo, s_hi, n_scan)
    outcomes = []
    fvals = np.empty(n_scan)
    for i, s in enumerate(svals):
        val, prof = boundary_miss(float(s), problem, cfg)
        fvals[i] = val
        outcomes.append(ShootingOutcome(float(s), float(val), blown=prof is None))

    brackets = []
    candidates = []  # (miss, s, profile)
    for i in range(n_scan - 1):
        fa, fb = fvals[i], fvals[i + 1]
        if fa == 0.0:
            val, prof = boundary_miss(float(svals[i]), problem, fine_cfg)
            if prof is not None:
                candidates.append((abs(val), float(svals[i]), prof))
            continue
        if (fa < 0.0) != (fb < 0.0):
            brackets.append((float(svals[i]), float(svals[i + 1])))
            best = _refine_bracket(
                problem, fine_cfg, float(svals[i]), fa, float(svals[i + 1]), fb, boundary_tol
            )
            if best[2] is not None:
                candidates.append(best)

    accepted = []
    for miss, s, prof in sorted(candidates, key=lambda c: c[1]):
        if not filter_admissible(prof):
            continue
        if accepted and abs(s - accepted[-1][1]) <= merge_tol:
            if miss < accepted[-1][0]:
                accepted[-1] = (miss, s, prof)
            continue
        accepted.append((miss, s, prof))

    result = SolutionSet(
        solutions=[prof for _, _, prof in accepted],
        misses=[miss for miss, _, _ in accepted],
        brackets=brackets,
        outcomes=outcomes,
        meta={
            "s_lo": float(s_lo),
            "s_hi": float(s_hi),
            "n_scan": int(n_scan),
            "boundary_tol": boundary_tol,
            "merge_tol": merge_tol,
            "n_brackets": len(brackets),
        },
    )
    return result
