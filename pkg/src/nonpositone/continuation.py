"""Parameter sweeps: warm-started branch tracking across a lambda range.

Each sweep point runs a coarse global scan plus narrow warm-start scans
around the previous branch locations, then links solutions to branches by
nearest initial value under a jump guard.  The guard flags discontinuous
jumps for inspection instead of silently connecting them; turning points
are not expected in the large-lambda regime this targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classification import classify
from .problem import RadialProblem
from .radial_ivp import IntegratorConfig
from .shooting import default_scan_window, solve_all

__all__ = ["BranchPoint", "Branch", "TransitionEvent", "sweep_lambda",
           "detect_transitions", "jump_guard"]


def jump_guard(s: float) -> float:
    """Largest credible move of a branch's s between consecutive sweep points."""
    return 0.5 * abs(s) + 1.0


@dataclass(frozen=True)
class BranchPoint:
    lam: float
    s: float
    class_label: str
    k: int
    u_min: float
    u_max: float
    boundary_miss: float

    def to_json_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "s": self.s,
            "class_label": self.class_label,
            "k": self.k,
            "u_min": self.u_min,
            "u_max": self.u_max,
            "boundary_miss": self.boundary_miss,
        }


@dataclass
class Branch:
    points: list = field(default_factory=list)
    status: str = "alive"  # alive | terminated | merged

    @property
    def first_lambda(self) -> float:
        return self.points[0].lam

    @property
    def last_lambda(self) -> float:
        return self.points[-1].lam

    def to_json_dict(self) -> dict:
        return {"status": self.status,
                "points": [p.to_json_dict() for p in self.points]}


@dataclass(frozen=True)
class TransitionEvent:
    kind: str  # class-change | birth | termination
    lam_lo: float
    lam_hi: float
    branch_index: int
    description: str

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lambda_interval": [self.lam_lo, self.lam_hi],
            "branch_index": self.branch_index,
            "description": self.description,
        }


def _sweep_grid(lambda_lo: float, lambda_hi: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if not 0.0 < lambda_lo <= lambda_hi:
        raise ValueError("need 0 < lambda_lo <= lambda_hi")
    if lambda_lo == lambda_hi:
        return np.array([lambda_lo])
    # geometric grid: every tracked quantity scales as a power of lambda
    return np.geomspace(lambda_lo, lambda_hi, steps)


def _solve_at(problem, n_scan_coarse, warm_centers, config, boundary_tol):
    """Coarse global scan plus warm windows; deduped solutions sorted by s."""
    lo, hi = default_scan_window(problem)
    found = {}

    def absorb(sol_set):
        for prof, miss in zip(sol_set.solutions, sol_set.misses):
            key = round(prof.s0 / 1e-8)
            if key not in found or miss < found[key][0]:
                found[key] = (miss, prof)

    absorb(solve_all(problem, lo, hi, n_scan_coarse, config=config,
                     boundary_tol=boundary_tol))
    for s_prev in warm_centers:
        w = 0.5 * jump_guard(s_prev)
        w_lo, w_hi = s_prev - w, min(s_prev + w, hi)
        if w_lo < w_hi:
            absorb(solve_all(problem, w_lo, w_hi, 120, config=config,
                             boundary_tol=boundary_tol))
    pairs = sorted(found.values(), key=lambda mp: mp[1].s0)
    # re-dedupe across windows after sorting (keys can straddle a rounding cell)
    deduped = []
    for miss, prof in pairs:
        if deduped and abs(prof.s0 - deduped[-1][1].s0) <= 1e-8:
            if miss < deduped[-1][0]:
                deduped[-1] = (miss, prof)
            continue
        deduped.append((miss, prof))
    return deduped


def sweep_lambda(
    problem: RadialProblem,
    lambda_lo: float,
    lambda_hi: float,
    steps: int,
    *,
    n_scan_coarse: int = 600,
    config: IntegratorConfig = None,
    boundary_tol: float = 1e-9,
    classify_grid: int = 4096,
) -> list:
    """Track solution branches over a geometric lambda grid.

    The problem argument is the template; its lambda is replaced at each
    sweep point.  Branch loss is recorded as termination, never raised.
    Requires lambda_lo > g(A) + M so the classification level exists at
    every point.
    """
    floor = problem.nl(problem.nl.A) + problem.M if problem.nl.kind != "zero" else 0.0
    if not lambda_lo > floor:
        raise ValueError(f"lambda_lo must exceed g(A) + M = {floor:g}")
    lams = _sweep_grid(lambda_lo, lambda_hi, steps)

    branches: list[Branch] = []
    for lam in lams:
        prob = problem.with_lambda(float(lam))
        alive = [br for br in branches if br.status == "alive"]
        warm_centers = [br.points[-1].s for br in alive]
        solutions = _solve_at(prob, n_scan_coarse, warm_centers, config, boundary_tol)

        points = []
        for miss, prof in solutions:
            rep = classify(prof, grid_points=classify_grid)
            points.append(
                BranchPoint(
                    lam=float(lam),
                    s=prof.s0,
                    class_label=rep.class_label,
                    k=rep.k,
                    u_min=float(np.min(prof.u)),
                    u_max=float(np.max(prof.u)),
                    boundary_miss=miss,
                )
            )

        # greedy nearest-s matching under the jump guard
        pairs = []
        for bi, br in enumerate(alive):
            s_prev = br.points[-1].s
            for ci, pt in enumerate(points):
                d = abs(pt.s - s_prev)
                if d < jump_guard(s_prev):
                    pairs.append((d, bi, ci))
        pairs.sort()
        used_b, used_c = set(), set()
        for d, bi, ci in pairs:
            if bi in used_b or ci in used_c:
                continue
            used_b.add(bi)
            used_c.add(ci)
            alive[bi].points.append(points[ci])

        for bi, br in enumerate(alive):
            if bi in used_b:
                continue
            s_prev = br.points[-1].s
            stolen = any(
                abs(points[ci].s - s_prev) < jump_guard(s_prev) for ci in used_c
            )
            br.status = "merged" if stolen else "terminated"

        for ci, pt in enumerate(points):
            if ci not in used_c:
                branches.append(Branch(points=[pt]))

    return branches


def detect_transitions(branches: list) -> list:
    """Class changes along branches, plus branch births and terminations.

    Every event carries the bracketing lambda interval from the sweep grid.
    """
    grid = sorted({p.lam for br in branches for p in br.points})
    if not grid:
        return []
    events = []
    for idx, br in enumerate(branches):
        for a, b in zip(br.points[:-1], br.points[1:]):
            if a.class_label != b.class_label:
                events.append(
                    TransitionEvent(
                        "class-change", a.lam, b.lam, idx,
                        f"branch {idx}: {a.class_label} -> {b.class_label}",
                    )
                )
        first = br.first_lambda
        gi = grid.index(first)
        if gi > 0:
            events.append(
                TransitionEvent(
                    "birth", grid[gi - 1], first, idx,
                    f"branch {idx} appears ({br.points[0].class_label} at s={br.points[0].s:.6g})",
                )
            )
        last = br.last_lambda
        gj = grid.index(last)
        if gj < len(grid) - 1:
            events.append(
                TransitionEvent(
                    "termination", last, grid[gj + 1], idx,
                    f"branch {idx} {br.status} after lambda={last:g}",
                )
            )
    events.sort(key=lambda e: (e.lam_lo, e.branch_index))
    return events
