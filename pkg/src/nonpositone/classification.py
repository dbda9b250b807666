"""Level-crossing classification of computed profiles.

Phi(t) = u(t) - inverse_plus(lambda + f(t)) measures the trajectory against
the upper branch of g(u) = lambda + f.  Profiles are classified by the number
of simple zeros of Phi: the class label counts only simple zeros, and any
non-simple (tangential) zero makes the profile degenerate.  Grid sign scans
cannot see even-order touches, so dips of |Phi| without a sign change are
probed separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .nonlinearity import inverse_envelope_derivative, inverse_plus
from .radial_ivp import SolutionProfile

__all__ = ["ZeroRecord", "ClassificationReport", "phi", "classify", "critical_points"]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ZeroRecord:
    """One located zero of Phi with its transversality data."""

    tau: float
    phi_slope: float
    simple: bool
    u_slope: float

    def to_json_dict(self) -> dict:
        return {
            "tau": self.tau,
            "phi_slope": self.phi_slope,
            "simple": self.simple,
            "u_slope": self.u_slope,
        }


@dataclass
class ClassificationReport:
    """Zeros of Phi, class index, and critical points of u for one profile."""

    zeros: list = field(default_factory=list)     # ZeroRecord sorted by tau
    k: int = 0                                    # number of simple zeros
    class_label: str = "Z0"                       # "Zk" or "degenerate"
    maxima: list = field(default_factory=list)    # (beta, u(beta))
    minima: list = field(default_factory=list)    # (alpha, u(alpha))
    eta: float = None                             # first zero of u after largest tau
    meta: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "zeros": [z.to_json_dict() for z in self.zeros],
            "k": self.k,
            "class_label": self.class_label,
            "maxima": [[t, u] for t, u in self.maxima],
            "minima": [[t, u] for t, u in self.minima],
            "eta": self.eta,
            "meta": dict(self.meta),
        }


def phi(t, profile: SolutionProfile):
    """u(t) - inverse_plus(lambda + f(t)) on the dense profile."""
    pr = profile.problem
    return profile.eval(t) - inverse_plus(pr.lam + pr.f(t), pr.nl)


def _phi_slope(t: float, profile: SolutionProfile) -> float:
    return profile.eval_deriv(t) - inverse_envelope_derivative(t, profile.problem)


def _bisect_zero(fun, a, b, fa, tol, max_iter=200):
    """Standard bisection to |fun| <= tol or float collapse; returns (t, f(t))."""
    best_t, best_f = a, fa
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        if m == a or m == b:
            break
        fm = fun(m)
        if abs(fm) < abs(best_f):
            best_t, best_f = m, fm
        if abs(fm) <= tol:
            return m, fm
        if (fa < 0.0) != (fm < 0.0):
            b = m
        else:
            a, fa = m, fm
    return best_t, best_f


def _golden_min_abs(fun, a, b, iters=120):
    """Golden-section minimizer of |fun| on [a, b]; returns (t, |fun(t)|)."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = abs(fun(x1)), abs(fun(x2))
    for _ in range(iters):
        if f1 > f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = abs(fun(x2))
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = abs(fun(x1))
        if b - a <= 1e-15:
            break
    return (x1, f1) if f1 <= f2 else (x2, f2)


def classify(
    profile: SolutionProfile,
    *,
    grid_points: int = 4096,
    zero_tol: float = 1e-9,
    tangency_tol: float = 1e-7,
    simple_rel: float = 1e-6,
) -> ClassificationReport:
    """Locate all zeros of Phi, test simplicity, and assign the class.

    Sign changes on a uniform grid are refined by bisection to |Phi| <=
    zero_tol; local dips of |Phi| below tangency_tol without a sign change
    are recorded as non-simple zeros.  A zero is simple when |Phi'(tau)|
    exceeds simple_rel * (1 + |u'(tau)|) - the threshold scales with the
    trajectory slope, which grows with lambda.
    """
    pr = profile.problem
    tq = np.linspace(0.0, 1.0, grid_points)
    # domain check happens here: inverse_plus raises when lambda too small
    pq = profile.eval(tq) - inverse_plus(pr.lam + pr.f(tq), pr.nl)
    phi_t = lambda t: phi(t, profile)

    taus = []
    crossing = []
    for i in range(grid_points - 1):
        fa, fb = pq[i], pq[i + 1]
        if fa == 0.0:
            taus.append(float(tq[i]))
            crossing.append(True)
        elif (fa < 0.0) != (fb < 0.0):
            tau, _ = _bisect_zero(phi_t, float(tq[i]), float(tq[i + 1]), float(fa), zero_tol)
            taus.append(tau)
            crossing.append(True)
    if pq[-1] == 0.0:
        taus.append(1.0)
        crossing.append(True)

    # tangential candidates: interior dips of |Phi| with no sign change
    spacing = 1.0 / (grid_points - 1)
    apq = np.abs(pq)
    for i in range(1, grid_points - 1):
        if pq[i] == 0.0:
            continue
        same_sign = (pq[i - 1] < 0.0) == (pq[i] < 0.0) == (pq[i + 1] < 0.0)
        if same_sign and apq[i] <= apq[i - 1] and apq[i] <= apq[i + 1]:
            tau, val = _golden_min_abs(phi_t, float(tq[i - 1]), float(tq[i + 1]))
            if val < tangency_tol and all(abs(tau - t0) > spacing for t0 in taus):
                taus.append(tau)
                crossing.append(False)

    order = np.argsort(taus)
    records = []
    for j in order:
        tau = taus[j]
        slope = _phi_slope(tau, profile)
        u_slope = profile.eval_deriv(tau)
        simple = crossing[j] and abs(slope) > simple_rel * (1.0 + abs(u_slope))
        records.append(ZeroRecord(tau, slope, simple, u_slope))

    maxima, minima = critical_points(profile, grid_points=grid_points)

    eta = None
    if records:
        tau_max = records[-1].tau
        eta = _first_u_zero_after(profile, tau_max, grid_points)

    k = sum(1 for r in records if r.simple)
    degenerate = any(not r.simple for r in records)
    report = ClassificationReport(
        zeros=records,
        k=k,
        class_label="degenerate" if degenerate else f"Z{k}",
        maxima=maxima,
        minima=minima,
        eta=eta,
        meta={"grid_points": grid_points, "zero_tol": zero_tol,
              "tangency_tol": tangency_tol, "simple_rel": simple_rel},
    )
    return report


def _first_u_zero_after(profile: SolutionProfile, t0: float, grid_points: int):
    """Smallest zero of u in (t0, 1]; the right boundary counts when u(1) ~ 0."""
    tq = np.linspace(t0, 1.0, max(256, grid_points // 4))
    uq = profile.eval(tq)
    for i in range(1, len(tq) - 1):
        fa, fb = uq[i], uq[i + 1]
        if fa == 0.0:
            return float(tq[i])
        if (fa < 0.0) != (fb < 0.0):
            z, _ = _bisect_zero(profile.eval, float(tq[i]), float(tq[i + 1]), float(fa), 1e-12)
            return z
    if abs(profile.boundary_value) <= 1e-6 and profile.grid[-1] == 1.0:
        return 1.0
    return None


def critical_points(profile: SolutionProfile, *, grid_points: int = 4096):
    """Interior critical points of u from sign changes of u', plus t = 0.

    u' passing + -> - gives a maximum beta, - -> + a minimum alpha.  The
    right endpoint is excluded; t = 0 (where u'(0) = 0 structurally) is
    reported as a minimum when u''(0) > 0 and as a maximum when u''(0) < 0.
    """
    tq = np.linspace(0.0, 1.0, grid_points)
    duq = profile.eval_deriv(tq)
    maxima = []
    minima = []

    # curvature sign at the origin from the dense derivative just inside;
    # when that is below resolution (starts arbitrarily close to the
    # admissibility boundary have u''(0) ~ 0), fall back to the exact
    # equation curvature, which the profile's own shape cannot resolve
    d0 = duq[1]
    u0 = float(profile.u[0])
    thresh = 1e-12 * (1.0 + abs(u0))
    if abs(d0) <= thresh and profile.problem is not None and profile.du[0] == 0.0:
        from .radial_ivp import rhs as _rhs

        d0 = _rhs(0.0, u0, 0.0, profile.problem)
        thresh = 0.0
    if d0 > thresh:
        minima.append((0.0, u0))
    elif d0 < -thresh:
        maxima.append((0.0, u0))

    for i in range(1, grid_points - 2):
        fa, fb = duq[i], duq[i + 1]
        if fa == 0.0 or (fa < 0.0) == (fb < 0.0):
            continue
        t_star, _ = _bisect_zero(
            profile.eval_deriv, float(tq[i]), float(tq[i + 1]), float(fa), 1e-13
        )
        val = profile.eval(t_star)
        if fa > 0.0:
            maxima.append((t_star, val))
        else:
            minima.append((t_star, val))
    return maxima, minima
