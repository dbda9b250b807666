"""Singular radial initial value problem: adaptive integration and residuals.

The second-order equation

    -u'' - ((n-1)/t) u' = g(u) - lambda - f(t),   u'(0) = 0,

has a removable singularity at t = 0: symmetry forces
u''(0) = -(g(u(0)) - lambda - f(0)) / n.  Integration starts from a two-term
Taylor expansion at t_start (error O(t_start^3), far below tolerance) and
proceeds with an explicit Dormand-Prince 5(4) embedded pair to t = 1.
Superlinear g makes escaping trajectories blow up in finite time; an
amplitude guard converts that into a classified shooting outcome instead of
an overflow.

Dense output is cubic Hermite on the stored (u, u') nodes, which matches the
order-4 accuracy of the propagated solution between nodes and supports the
zero refinement done downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .nonlinearity import eval_g
from .problem import RadialProblem

__all__ = [
    "BlowUpError",
    "StepFailureError",
    "IntegratorConfig",
    "SolutionProfile",
    "rhs",
    "integrate",
    "residual_norm",
]


class BlowUpError(RuntimeError):
    """Trajectory escaped (amplitude guard crossed, or a certified plunge)."""

    def __init__(self, sign: int, t: float, amplitude: float):
        super().__init__(
            f"|u| escaped through {amplitude:g} at t = {t:.6g} (sign {sign:+d})"
        )
        self.sign = sign
        self.t = t
        self.amplitude = amplitude


class StepFailureError(RuntimeError):
    """Adaptive step size underflowed; the trajectory cannot be continued."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and guards for the adaptive integrator.

    neg_exit, when set, certifies an early negative escape: once u < -neg_exit
    with u' < 0 and g(u) > lambda + M the plunge is monotone (valid for n = 1,
    where no radial damping can push back), so the trajectory is classified
    without stepping into the expensive singular tail.
    """

    atol: float = 1e-10
    rtol: float = 1e-10
    max_step: float = 1.0 / 256.0
    t_start: float = 1e-6
    guard: float = 1e12
    max_steps: int = 2_000_000
    neg_exit: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.atol <= 0.0 or self.rtol <= 0.0:
            raise ValueError("tolerances must be positive")
        if not 0.0 < self.max_step <= 1.0:
            raise ValueError("max_step must lie in (0, 1]")
        if not 0.0 < self.t_start < 0.5:
            raise ValueError("t_start must lie in (0, 0.5)")


@dataclass
class SolutionProfile:
    """Computed trajectory (t, u, u') on [0, 1] with dense cubic-Hermite output."""

    grid: np.ndarray
    u: np.ndarray
    du: np.ndarray
    s0: float
    meta: dict = field(default_factory=dict)
    problem: RadialProblem = None  # type: ignore[assignment]

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.u = np.asarray(self.u, dtype=float)
        self.du = np.asarray(self.du, dtype=float)
        if not (len(self.grid) == len(self.u) == len(self.du)):
            raise ValueError("grid, u, du must have equal lengths")
        if len(self.grid) < 2 or np.any(np.diff(self.grid) <= 0.0):
            raise ValueError("grid must be strictly increasing with >= 2 nodes")

    # -- dense output ---------------------------------------------------

    def _locate(self, t):
        t = np.asarray(t, dtype=float)
        i = np.clip(np.searchsorted(self.grid, t, side="right") - 1, 0, len(self.grid) - 2)
        h = self.grid[i + 1] - self.grid[i]
        theta = (t - self.grid[i]) / h
        return i, h, theta

    def eval(self, t):
        """u(t) between nodes via cubic Hermite on (u, u')."""
        scalar = np.isscalar(t)
        i, h, th = self._locate(t)
        t2 = th * th
        t3 = t2 * th
        val = (
            (2.0 * t3 - 3.0 * t2 + 1.0) * self.u[i]
            + (t3 - 2.0 * t2 + th) * h * self.du[i]
            + (-2.0 * t3 + 3.0 * t2) * self.u[i + 1]
            + (t3 - t2) * h * self.du[i + 1]
        )
        return float(val) if scalar else val

    def eval_deriv(self, t):
        """u'(t): exact derivative of the Hermite interpolant."""
        scalar = np.isscalar(t)
        i, h, th = self._locate(t)
        t2 = th * th
        val = (
            (6.0 * t2 - 6.0 * th) * (self.u[i] - self.u[i + 1]) / h
            + (3.0 * t2 - 4.0 * th + 1.0) * self.du[i]
            + (3.0 * t2 - 2.0 * th) * self.du[i + 1]
        )
        return float(val) if scalar else val

    @property
    def boundary_value(self) -> float:
        """u at the right end of the computed grid (u(1) for full profiles)."""
        return float(self.u[-1])

    def to_json_dict(self) -> dict:
        return {
            "s0": self.s0,
            "u1": self.boundary_value,
            "nodes": len(self.grid),
            "meta": dict(self.meta),
        }


def rhs(t: float, u: float, du: float, problem: RadialProblem) -> float:
    """u'' from the radial equation; at t = 0 the removable-singularity limit."""
    lam = problem.lam
    g = problem.nl(u)
    src = problem.f(t)
    if t == 0.0:
        return -(g - lam - src) / problem.n
    return -((problem.n - 1) / t) * du - (g - lam - src)


def _compile_rhs(problem: RadialProblem):
    """Specialized scalar closure (t, u, du) -> u'' for the hot loop (t > 0)."""
    nl, f = problem.nl, problem.f
    lam = float(problem.lam)
    nm1 = float(problem.n - 1)

    if nl.kind == "zero":
        gf = None
    elif nl.p == 2.0 and nl.q == 5.0:
        def gf(u):
            if u >= 0.0:
                return u * u
            a = -u
            a2 = a * a
            return a2 * a2 * a
    else:
        p, q = nl.p, nl.q

        def gf(u):
            return u**p if u >= 0.0 else (-u) ** q

    cos = math.cos
    pi = math.pi
    if f.is_zero():
        if gf is None:
            if nm1 == 0.0:
                return lambda t, u, du: lam
            return lambda t, u, du: -(nm1 / t) * du + lam
        if nm1 == 0.0:
            return lambda t, u, du: lam - gf(u)
        return lambda t, u, du: -(nm1 / t) * du - (gf(u) - lam)

    if f.kind == "cosine" and len(f.coefficients) == 2 and f.coefficients[0] == 0.0:
        c1 = f.coefficients[1]
        if gf is None:
            if nm1 == 0.0:
                return lambda t, u, du: lam + c1 * cos(pi * t)
            return lambda t, u, du: -(nm1 / t) * du + lam + c1 * cos(pi * t)
        if nm1 == 0.0:
            return lambda t, u, du: lam + c1 * cos(pi * t) - gf(u)
        return lambda t, u, du: -(nm1 / t) * du - (gf(u) - lam - c1 * cos(pi * t))

    feval = f.__call__
    if gf is None:
        if nm1 == 0.0:
            return lambda t, u, du: lam + feval(t)
        return lambda t, u, du: -(nm1 / t) * du + lam + feval(t)
    if nm1 == 0.0:
        return lambda t, u, du: lam + feval(t) - gf(u)
    return lambda t, u, du: -(nm1 / t) * du - (gf(u) - lam - feval(t))


# Dormand-Prince 5(4) coefficients.  The 5th-order solution propagates; the
# embedded 4th-order difference drives the error estimate (FSAL: the last
# stage of an accepted step is the first stage of the next).
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


def integrate(s0: float, problem: RadialProblem, config: IntegratorConfig = None) -> SolutionProfile:
    """Integrate the radial problem from u(0) = s0, u'(0) = 0 up to t = 1.

    Local error per step is controlled to atol + rtol*|state|.  Raises
    BlowUpError (with the sign of u at the guard crossing) when |u| exceeds
    the overflow guard before t = 1, and StepFailureError if the step size
    underflows.
    """
    cfg = config or IntegratorConfig()
    fr = _compile_rhs(problem)
    s0 = float(s0)

    upp0 = -(problem.nl(s0) - problem.lam - problem.f(0.0)) / problem.n
    ts = cfg.t_start
    t = ts
    u = s0 + 0.5 * upp0 * ts * ts
    v = upp0 * ts

    grid = [0.0, t]
    us = [s0, u]
    dus = [0.0, v]

    atol, rtol = cfg.atol, cfg.rtol
    guard = cfg.guard
    neg_exit = None
    if cfg.neg_exit is not None and problem.n == 1 and problem.nl.kind != "zero":
        # certified only where g(-x) > lambda + M keeps u'' < 0 on the plunge
        if eval_g(-float(cfg.neg_exit), problem.nl) > problem.lam + problem.M + 1.0:
            neg_exit = float(cfg.neg_exit)
    max_step = cfg.max_step
    h = min(max_step, 1e-3, 1.0 - t)
    k1u = v
    k1v = fr(t, u, v)
    nfev = 1
    accepted = 0
    rejected = 0
    tiny = 16.0 * np.finfo(float).eps

    while t < 1.0:
        if accepted + rejected > cfg.max_steps:
            raise StepFailureError(f"step budget exhausted at t = {t:.6g}")
        final = False
        if h >= 1.0 - t:
            h = 1.0 - t
            final = True
        if h < tiny * max(t, 1.0):
            # Superlinear escape squeezes the remaining time below float
            # resolution before |u| reaches the guard (e.g. |u| ~ (T-t)^(-1/2)
            # for q = 5 would need T - t ~ 1e-24 to hit 1e12).  A trajectory
            # already far outside every a-priori solution scale and still
            # accelerating outward is the same classified escape.
            if abs(u) > 1e5 and u * v > 0.0:
                raise BlowUpError(1 if u > 0.0 else -1, t, abs(u))
            raise StepFailureError(f"step size underflow at t = {t:.6g}")

        u2 = u + h * _A21 * k1u
        v2 = v + h * _A21 * k1v
        k2u = v2
        k2v = fr(t + _C2 * h, u2, v2)

        u3 = u + h * (_A31 * k1u + _A32 * k2u)
        v3 = v + h * (_A31 * k1v + _A32 * k2v)
        k3u = v3
        k3v = fr(t + _C3 * h, u3, v3)

        u4 = u + h * (_A41 * k1u + _A42 * k2u + _A43 * k3u)
        v4 = v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v)
        k4u = v4
        k4v = fr(t + _C4 * h, u4, v4)

        u5 = u + h * (_A51 * k1u + _A52 * k2u + _A53 * k3u + _A54 * k4u)
        v5 = v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v)
        k5u = v5
        k5v = fr(t + _C5 * h, u5, v5)

        u6 = u + h * (_A61 * k1u + _A62 * k2u + _A63 * k3u + _A64 * k4u + _A65 * k5u)
        v6 = v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v + _A65 * k5v)
        k6u = v6
        k6v = fr(t + h, u6, v6)

        un = u + h * (_B1 * k1u + _B3 * k3u + _B4 * k4u + _B5 * k5u + _B6 * k6u)
        vn = v + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v + _B6 * k6v)
        tn = 1.0 if final else t + h
        k7u = vn
        k7v = fr(tn, un, vn)
        nfev += 6

        eu = h * (_E1 * k1u + _E3 * k3u + _E4 * k4u + _E5 * k5u + _E6 * k6u + _E7 * k7u)
        ev = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v + _E7 * k7v)
        su = atol + rtol * max(abs(u), abs(un))
        sv = atol + rtol * max(abs(v), abs(vn))
        ru = eu / su
        rv = ev / sv
        err = math.sqrt(0.5 * (ru * ru + rv * rv))

        if not math.isfinite(err):
            rejected += 1
            h *= 0.2
            continue
        if err <= 1.0:
            accepted += 1
            t, u, v = tn, un, vn
            k1u, k1v = k7u, k7v
            grid.append(t)
            us.append(u)
            dus.append(v)
            if abs(u) >= guard:
                raise BlowUpError(1 if u > 0.0 else -1, t, abs(u))
            if neg_exit is not None and u < -neg_exit and v < 0.0:
                raise BlowUpError(-1, t, abs(u))
            factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            h = min(h * factor, max_step)
        else:
            rejected += 1
            h *= max(0.2, 0.9 * err ** -0.2)

    meta = {
        "steps": accepted,
        "rejected": rejected,
        "nfev": nfev,
        "atol": atol,
        "rtol": rtol,
        "max_step": max_step,
        "t_start": cfg.t_start,
        "guard": guard,
    }
    return SolutionProfile(np.array(grid), np.array(us), np.array(dus), s0, meta, problem)


def residual_norm(profile: SolutionProfile, n_grid: int = 4096) -> float:
    """How well the dense profile satisfies the radial equation.

    Max over interior points of a uniform grid of
    |u''_fd + ((n-1)/t) u' + g(u) - lambda - f(t)| / (1 + lambda),
    with u'' from centered second differences of the dense output.
    """
    if len(profile.grid) < 3:
        raise ValueError("profile needs at least 3 nodes")
    pr = profile.problem
    tq = np.linspace(0.0, 1.0, n_grid)
    uq = profile.eval(tq)
    duq = profile.eval_deriv(tq)
    hh = tq[1] - tq[0]
    upp = (uq[:-2] - 2.0 * uq[1:-1] + uq[2:]) / (hh * hh)
    ti = tq[1:-1]
    res = upp + ((pr.n - 1) / ti) * duq[1:-1] + eval_g(uq[1:-1], pr.nl) - pr.lam - pr.f(ti)
    return float(np.max(np.abs(res))) / (1.0 + pr.lam)
