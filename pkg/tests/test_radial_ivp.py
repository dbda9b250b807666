"""Integrator: analytic exactness, convergence, dense output, escapes."""

import math

import numpy as np
import pytest

from nonpositone import (
    BlowUpError,
    IntegratorConfig,
    Nonlinearity,
    RadialProblem,
    SolutionProfile,
    SourceTerm,
    StepFailureError,
    integrate,
    residual_norm,
    rhs,
)

ZERO_NL = Nonlinearity(kind="zero")
POWER_NL = Nonlinearity()


def analytic_problem(n=3, lam=6.0):
    """g = 0, f = 0: the equation forces u = u(0) + (lam/(2n)) t^2; with
    lam = 2n the solution is exactly u(0) + t^2."""
    return RadialProblem(n=n, lam=lam, f=SourceTerm("zero"), nl=ZERO_NL)


def test_rhs_values():
    pr = analytic_problem()
    assert rhs(1.0, 0.0, 0.0, pr) == 6.0
    assert rhs(0.0, 0.0, 0.0, pr) == 2.0  # removable-singularity limit
    pr1 = RadialProblem(n=1, lam=1.0, f=SourceTerm("zero"), nl=POWER_NL)
    assert rhs(0.5, 2.0, 0.0, pr1) == -3.0


def test_analytic_case_n3():
    prof = integrate(1.0, analytic_problem())
    assert abs(prof.boundary_value - 2.0) <= 1e-9
    tq = np.linspace(0.0, 1.0, 1001)
    assert np.max(np.abs(prof.eval(tq) - (1.0 + tq**2))) <= 1e-9


def test_analytic_case_n1():
    pr = RadialProblem(n=1, lam=2.0, f=SourceTerm("zero"), nl=ZERO_NL)
    prof = integrate(1.0, pr)
    assert abs(prof.boundary_value - 2.0) <= 1e-9


def test_profile_structure():
    prof = integrate(1.0, analytic_problem())
    assert prof.grid[0] == 0.0 and prof.grid[-1] == 1.0
    assert prof.du[0] == 0.0
    assert np.all(np.diff(prof.grid) > 0)
    assert len(prof.grid) - 1 >= 256
    for key in ("steps", "rejected", "nfev", "atol", "rtol"):
        assert key in prof.meta


def test_tolerance_halving_never_hurts():
    errs = []
    for k in range(4):
        tol = 1e-10 / 2**k
        cfg = IntegratorConfig(atol=tol, rtol=tol)
        prof = integrate(1.0, analytic_problem(), cfg)
        errs.append(abs(prof.boundary_value - 2.0))
    for a, b in zip(errs, errs[1:]):
        assert b <= a + 1e-14  # roundoff allowance at the exactness floor


def test_taylor_start_consistency():
    pr = analytic_problem()
    pr100 = RadialProblem(n=1, lam=100.0, f=SourceTerm("zero"), nl=POWER_NL)
    for problem, s0 in ((pr, 1.0), (pr100, -2.0)):
        u1 = integrate(s0, problem, IntegratorConfig(t_start=1e-6)).boundary_value
        u2 = integrate(s0, problem, IntegratorConfig(t_start=1e-7)).boundary_value
        assert abs(u1 - u2) <= 1e-8


def test_local_evenness_about_extremum():
    # n = 1, f = 0 is conservative: the trajectory is locally even about a
    # critical point, up to integration accuracy
    pr = RadialProblem(n=1, lam=100.0, f=SourceTerm("zero"), nl=POWER_NL)
    prof = integrate(-1.0, pr)
    tq = np.linspace(0.3, 0.9, 6001)
    duq = prof.eval_deriv(tq)
    idx = np.nonzero((duq[:-1] > 0) & (duq[1:] <= 0))[0]
    assert idx.size >= 1
    lo, hi = tq[idx[0]], tq[idx[0] + 1]
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if prof.eval_deriv(mid) > 0:
            lo = mid
        else:
            hi = mid
    t_star = 0.5 * (lo + hi)
    deltas = np.linspace(1e-4, 0.02, 50)
    asym = np.abs(prof.eval(t_star + deltas) - prof.eval(t_star - deltas))
    assert np.max(asym) <= 1e-7


def test_dense_output_matches_nodes():
    pr = RadialProblem(n=1, lam=100.0, f=SourceTerm("zero"), nl=POWER_NL)
    prof = integrate(-2.0, pr)
    assert np.allclose(prof.eval(prof.grid), prof.u, rtol=0, atol=1e-12)
    assert np.allclose(prof.eval_deriv(prof.grid[1:-1]), prof.du[1:-1], rtol=0, atol=1e-9)


def test_residual_analytic_profile():
    prof = integrate(1.0, analytic_problem())
    assert residual_norm(prof) <= 1e-6


def test_residual_detects_perturbation():
    pr = analytic_problem()
    prof = integrate(1.0, pr)
    tq = prof.grid
    pert = SolutionProfile(tq, prof.u + 0.01 * np.sin(math.pi * tq), prof.du,
                           prof.s0, {}, pr)
    assert residual_norm(pert) >= 0.01 * math.pi**2 / (1.0 + pr.lam) * 0.9


def test_residual_accepted_solutions_ceiling(solutions_f0):
    for lam, (pr, sol_set) in solutions_f0.items():
        for prof in sol_set.solutions:
            assert residual_norm(prof) <= 1e-5, f"residual ceiling at lambda={lam}"


def test_blow_up_positive_branch():
    # far above the admissibility window the trajectory escapes in finite time
    pr = RadialProblem(n=1, lam=100.0, f=SourceTerm("zero"), nl=POWER_NL)
    with pytest.raises(BlowUpError) as exc:
        integrate(25.0, pr)
    assert exc.value.sign == -1  # falls over the negative side for p < q
    assert 0.0 < exc.value.t <= 1.0


def test_blow_down_negative_branch():
    pr = RadialProblem(n=1, lam=100.0, f=SourceTerm("zero"), nl=POWER_NL)
    with pytest.raises(BlowUpError) as exc:
        integrate(-30.0, pr)
    assert exc.value.sign == -1
    assert exc.value.amplitude > 1e5


def test_neg_exit_matches_full_classification():
    pr = RadialProblem(n=1, lam=100.0, f=SourceTerm("zero"), nl=POWER_NL)
    fast = IntegratorConfig(neg_exit=50.0)
    with pytest.raises(BlowUpError) as exc:
        integrate(-30.0, pr, fast)
    assert exc.value.sign == -1
    assert exc.value.t < 0.01  # exits early, long before the singular tail


def test_two_integrator_agreement_oracle():
    """Terminal values against an independent reference (frozen from scipy
    DOP853/RK45 at rtol = 1e-13; regenerate via scripts/generate_oracles.py)."""
    from frozen_oracles import LAM100_TERMINAL_S0, LAM100_TERMINAL_SM3

    pr = RadialProblem(n=1, lam=100.0, f=SourceTerm("zero"), nl=POWER_NL)
    tight = IntegratorConfig(atol=1e-13, rtol=1e-13)
    u1 = integrate(0.0, pr, tight).boundary_value
    assert u1 == pytest.approx(LAM100_TERMINAL_S0, abs=5e-9)
    u2 = integrate(-3.0, pr, tight).boundary_value
    assert u2 == pytest.approx(LAM100_TERMINAL_SM3, rel=5e-7)


def test_integrator_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(atol=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(max_step=2.0)
    with pytest.raises(ValueError):
        IntegratorConfig(t_start=0.7)


def test_profile_validation():
    pr = analytic_problem()
    with pytest.raises(ValueError):
        SolutionProfile(np.array([0.0, 0.5, 0.25]), np.zeros(3), np.zeros(3), 0.0, {}, pr)
    with pytest.raises(ValueError):
        SolutionProfile(np.array([0.0, 1.0]), np.zeros(3), np.zeros(2), 0.0, {}, pr)
