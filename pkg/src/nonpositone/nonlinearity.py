"""Admissible nonlinearities: branch structure, inverses, and hypothesis checks.

The built-in family is the piecewise power law

    g(u) = u**p        for u >= 0,
    g(u) = abs(u)**q   for u < 0,

with exponents p, q > 1.  Beyond the branch threshold A the positive branch
is increasing and convex, the negative branch decreasing and convex, which
is what every estimate downstream relies on.  A trivial ``zero`` family
(g identically 0) is included purely to validate the integrator against
closed-form solutions; it has no usable branch structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BranchDomainError",
    "Nonlinearity",
    "ConditionReport",
    "eval_g",
    "eval_g_prime",
    "inverse_plus",
    "inverse_minus",
    "envelope_R",
    "inverse_envelope_derivative",
    "verify_conditions",
]


class BranchDomainError(ValueError):
    """Requested branch inverse is undefined at the given level."""


@dataclass(frozen=True)
class Nonlinearity:
    """Evaluable nonlinearity with branch inverses and envelope.

    kind: "piecewise-power" (the real family) or "zero" (integrator test).
    p: exponent of the positive branch, > 1.
    q: exponent of the negative branch, > 1.
    A: branch threshold, > 0; the structural hypotheses are checked on
       [A, inf) and (-inf, -A].
    """

    kind: str = "piecewise-power"
    p: float = 2.0
    q: float = 5.0
    A: float = 1.0

    def __post_init__(self):
        if self.kind not in ("piecewise-power", "zero"):
            raise ValueError(f"unknown nonlinearity kind {self.kind!r}")
        if self.kind == "piecewise-power":
            # p = q = 1 is evaluable (used to demonstrate failed growth
            # checks); the config layer enforces the structural p, q > 1.
            if not self.p >= 1.0:
                raise ValueError("p must be at least 1")
            if not self.q >= 1.0:
                raise ValueError("q must be at least 1")
            if not self.A > 0.0:
                raise ValueError("A must be positive")

    # -- evaluation ---------------------------------------------------------

    def __call__(self, u):
        return eval_g(u, self)

    def prime(self, u):
        return eval_g_prime(u, self)

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "p": self.p, "q": self.q, "A": self.A}


def eval_g(u, nl: Nonlinearity):
    """g(u) for scalar or array u; continuous across u = 0."""
    if nl.kind == "zero":
        return np.zeros_like(u, dtype=float) if isinstance(u, np.ndarray) else 0.0
    if isinstance(u, np.ndarray):
        return np.where(u >= 0.0, np.abs(u) ** nl.p, np.abs(u) ** nl.q)
    u = float(u)
    return u**nl.p if u >= 0.0 else (-u) ** nl.q


def eval_g_prime(u, nl: Nonlinearity):
    """Derivative of the active branch.

    At u = 0 the one-sided limits coincide at 0 for p, q > 1; that common
    value is returned.
    """
    if nl.kind == "zero":
        return np.zeros_like(u, dtype=float) if isinstance(u, np.ndarray) else 0.0
    if isinstance(u, np.ndarray):
        a = np.abs(u)
        return np.where(u >= 0.0, nl.p * a ** (nl.p - 1.0), -nl.q * a ** (nl.q - 1.0))
    u = float(u)
    if u == 0.0:
        return 0.0
    return nl.p * u ** (nl.p - 1.0) if u > 0.0 else -nl.q * (-u) ** (nl.q - 1.0)


def _require_level(y, floor: float, branch: str):
    bad = np.any(np.asarray(y) < floor)
    if bad:
        raise BranchDomainError(
            f"{branch} inverse undefined below level {floor:g} (got {np.min(y):g})"
        )


def inverse_plus(y, nl: Nonlinearity):
    """Unique x >= A with g(x) = y, defined for y >= g(A)."""
    if nl.kind == "zero":
        raise BranchDomainError("zero nonlinearity has no invertible positive branch")
    _require_level(y, nl.A**nl.p, "positive-branch")
    if isinstance(y, np.ndarray):
        return y ** (1.0 / nl.p)
    return float(y) ** (1.0 / nl.p)


def inverse_minus(y, nl: Nonlinearity):
    """Unique x <= -A with g(x) = y, defined for y >= g(-A)."""
    if nl.kind == "zero":
        raise BranchDomainError("zero nonlinearity has no invertible negative branch")
    _require_level(y, nl.A**nl.q, "negative-branch")
    if isinstance(y, np.ndarray):
        return -(y ** (1.0 / nl.q))
    return -(float(y) ** (1.0 / nl.q))


def envelope_R(y, nl: Nonlinearity):
    """max(|inverse_minus(y)|, |inverse_plus(y)|): worst-case amplitude scale."""
    return np.maximum(np.abs(inverse_plus(y, nl)), np.abs(inverse_minus(y, nl)))


def inverse_envelope_derivative(t, problem):
    """d/dt of inverse_plus(lambda + f(t)): equals f'(t) / g'(inverse_plus(...))."""
    nl = problem.nl
    x = inverse_plus(problem.lam + problem.f(t), nl)
    return problem.f.deriv(t) / eval_g_prime(x, nl)


# -- structural hypothesis checks -------------------------------------------


@dataclass
class ConditionReport:
    """Outcome of the sampled structural checks on a nonlinearity.

    superlinear_pos / superlinear_neg: |g(x)/x| grows monotonically along the
    probes and clears the threshold at the last one, per branch.
    ratio_condition: same monotone-growth-plus-threshold heuristic applied to
    |sqrt(R(x)/x) * inverse_plus(x) / inverse_minus(x)|.
    shape_ok: sampled monotonicity/positivity/convexity of both branches.
    """

    superlinear_pos: bool
    superlinear_neg: bool
    ratio_condition: bool
    shape_ok: bool
    samples: list = field(default_factory=list)
    verdict: bool = False

    def __post_init__(self):
        self.verdict = (
            self.superlinear_pos
            and self.superlinear_neg
            and self.ratio_condition
            and self.shape_ok
        )

    def to_json_dict(self) -> dict:
        return {
            "superlinear_pos": self.superlinear_pos,
            "superlinear_neg": self.superlinear_neg,
            "ratio_condition": self.ratio_condition,
            "shape_ok": self.shape_ok,
            "samples": [[name, float(x), float(v)] for name, x, v in self.samples],
            "verdict": self.verdict,
        }


def _strictly_increasing(vals) -> bool:
    vals = np.asarray(vals)
    return bool(np.all(np.diff(vals) > 0.0))


def _branch_shape_ok(nl: Nonlinearity, side: int, decades: float = 6.0,
                     per_decade: int = 64) -> bool:
    """Sampled positivity, monotonicity, convexity on one branch.

    side=+1 checks g on [A, A*10^decades] (positive, increasing, convex);
    side=-1 checks g on [-A*10^decades, -A] (positive, decreasing, convex).
    Convexity via nondecreasing divided differences, valid on the log grid.
    """
    xs = side * nl.A * np.logspace(0.0, decades, int(per_decade * decades) + 1)
    xs = np.sort(xs)
    gs = eval_g(xs, nl)
    if np.any(gs <= 0.0):
        return False
    slopes = np.diff(gs) / np.diff(xs)
    expected = 1.0 if side > 0 else -1.0
    if np.any(expected * slopes <= 0.0):
        return False
    return bool(np.all(np.diff(slopes) >= -1e-12 * np.maximum(1.0, np.abs(slopes[1:]))))


def verify_conditions(
    nl: Nonlinearity,
    probe_points=None,
    *,
    superlinear_threshold: float = 1e2,
    ratio_threshold: float = 2.0,
) -> ConditionReport:
    """Check the growth and asymmetry hypotheses by finite probing.

    True limits cannot be certified numerically; each condition is accepted
    when its probe expression is strictly increasing along ``probe_points``
    and exceeds its threshold at the last probe.  Failures are reported in
    the ConditionReport, never raised.

    The growth and asymmetry expressions live on different scales (for the
    default family the asymmetry probe is x**(1/20)), so they carry separate
    thresholds.
    """
    if probe_points is None:
        probe_points = np.logspace(3, 9, 13)
    probes = np.asarray(probe_points, dtype=float)
    if probes.ndim != 1 or len(probes) < 3 or not _strictly_increasing(probes):
        raise ValueError("probe_points must be increasing with at least 3 entries")

    samples = []
    if nl.kind == "zero":
        return ConditionReport(False, False, False, False, samples=[])

    ratio_pos = np.abs(eval_g(probes, nl) / probes)
    ratio_neg = np.abs(eval_g(-probes, nl) / probes)
    for x, v in zip(probes, ratio_pos):
        samples.append(("superlinear_pos", x, v))
    for x, v in zip(probes, ratio_neg):
        samples.append(("superlinear_neg", x, v))
    superlinear_pos = _strictly_increasing(ratio_pos) and ratio_pos[-1] > superlinear_threshold
    superlinear_neg = _strictly_increasing(ratio_neg) and ratio_neg[-1] > superlinear_threshold

    floor = max(nl.A**nl.p, nl.A**nl.q)
    ok = probes >= floor
    asym = np.abs(
        np.sqrt(envelope_R(probes[ok], nl) / probes[ok])
        * inverse_plus(probes[ok], nl)
        / inverse_minus(probes[ok], nl)
    )
    for x, v in zip(probes[ok], asym):
        samples.append(("ratio", x, v))
    ratio_condition = (
        len(asym) >= 3 and _strictly_increasing(asym) and asym[-1] > ratio_threshold
    )

    shape_ok = _branch_shape_ok(nl, +1) and _branch_shape_ok(nl, -1)
    return ConditionReport(
        bool(superlinear_pos), bool(superlinear_neg), bool(ratio_condition),
        bool(shape_ok), samples=samples,
    )
