"""Branch structure, inverses, envelope, and hypothesis verification."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonpositone import (
    BranchDomainError,
    Nonlinearity,
    RadialProblem,
    SourceTerm,
    envelope_R,
    eval_g,
    eval_g_prime,
    inverse_envelope_derivative,
    inverse_minus,
    inverse_plus,
    verify_conditions,
)

NL = Nonlinearity()  # p=2, q=5, A=1


def test_eval_g_branches():
    assert eval_g(3.0, NL) == 9.0
    assert eval_g(-2.0, NL) == 32.0
    assert eval_g(0.0, NL) == 0.0


def test_eval_g_continuous_across_zero():
    eps = 1e-8
    assert abs(eval_g(eps, NL) - eval_g(-eps, NL)) < 1e-15


def test_eval_g_prime():
    assert eval_g_prime(3.0, NL) == 6.0
    assert eval_g_prime(-2.0, NL) == -80.0
    assert eval_g_prime(0.0, NL) == 0.0


def test_inverse_plus_values_and_domain():
    assert inverse_plus(9.0, NL) == 3.0
    assert inverse_plus(1.0, NL) == 1.0
    with pytest.raises(BranchDomainError):
        inverse_plus(0.25, NL)


def test_inverse_minus_values_and_domain():
    assert inverse_minus(32.0, NL) == pytest.approx(-2.0, rel=1e-14)
    assert inverse_minus(1.0, NL) == pytest.approx(-1.0, rel=1e-14)
    assert inverse_minus(243.0, NL) == pytest.approx(-3.0, rel=1e-14)
    with pytest.raises(BranchDomainError):
        inverse_minus(0.5, NL)


def test_envelope_values():
    assert envelope_R(16.0, NL) == pytest.approx(4.0, rel=1e-14)
    assert envelope_R(1.0, NL) == pytest.approx(1.0, rel=1e-14)
    assert envelope_R(64.0, NL) == pytest.approx(8.0, rel=1e-14)


def test_zero_family_has_no_branches():
    z = Nonlinearity(kind="zero")
    assert eval_g(5.0, z) == 0.0
    with pytest.raises(BranchDomainError):
        inverse_plus(1.0, z)
    with pytest.raises(BranchDomainError):
        inverse_minus(1.0, z)


@given(st.floats(min_value=1.0, max_value=1e12))
def test_inverse_round_trip(y):
    assert abs(eval_g(inverse_plus(y, NL), NL) - y) <= 1e-10 * max(1.0, y)
    assert abs(eval_g(inverse_minus(y, NL), NL) - y) <= 1e-10 * max(1.0, y)


def test_inverse_plus_increasing_and_midpoint_concave():
    ys = np.logspace(0, 12, 400)
    xs = inverse_plus(ys, NL)
    assert np.all(np.diff(xs) > 0)
    mids = inverse_plus(0.5 * (ys[:-1] + ys[1:]), NL)
    assert np.all(mids >= 0.5 * (xs[:-1] + xs[1:]) - 1e-12 * np.abs(xs[1:]))


def test_envelope_dominates_both_inverses():
    ys = np.logspace(0, 10, 200)
    R = envelope_R(ys, NL)
    assert np.all(R >= np.abs(inverse_plus(ys, NL)) - 1e-15)
    assert np.all(R >= np.abs(inverse_minus(ys, NL)) - 1e-15)


def test_curvature_reciprocal_trend():
    # 1 / g'(inverse_plus(lam)) decreases along probes and ends below 1e-3
    lams = np.logspace(1, 9, 17)
    vals = 1.0 / eval_g_prime(inverse_plus(lams, NL), NL)
    assert np.all(np.diff(vals) < 0)
    assert vals[-1] < 1e-3


def test_inverse_ratio_constant_for_power_family():
    lams = np.logspace(2, 9, 15)
    ratios = inverse_plus(4.0 * lams, NL) / inverse_plus(lams, NL)
    assert np.max(np.abs(ratios - 2.0)) < 1e-12


def test_inverse_envelope_derivative_values():
    nl = NL
    poly = SourceTerm("polynomial", (0.0, 0.0, 1.0))  # t^2
    pr = RadialProblem(n=1, lam=3.0, f=poly, nl=nl)
    assert inverse_envelope_derivative(1.0, pr) == pytest.approx(0.5, rel=1e-12)
    assert inverse_envelope_derivative(0.0, pr) == 0.0
    pr0 = RadialProblem(n=1, lam=3.0, f=SourceTerm("zero"), nl=nl)
    assert inverse_envelope_derivative(0.7, pr0) == 0.0


def test_verify_conditions_default_family():
    rep = verify_conditions(NL)
    assert rep.superlinear_pos and rep.superlinear_neg
    assert rep.ratio_condition and rep.shape_ok
    assert rep.verdict is True
    assert rep.samples  # evidence recorded


def test_verify_conditions_symmetric_family_fails_ratio():
    rep = verify_conditions(Nonlinearity(p=3.0, q=3.0))
    assert rep.ratio_condition is False
    assert rep.verdict is False
    assert rep.superlinear_pos and rep.superlinear_neg  # growth itself is fine


def test_verify_conditions_linear_branch_fails_superlinearity():
    rep = verify_conditions(Nonlinearity(p=1.0, q=5.0))
    assert rep.superlinear_pos is False
    assert rep.verdict is False


def test_verify_conditions_zero_family_fails_by_design():
    rep = verify_conditions(Nonlinearity(kind="zero"))
    assert rep.verdict is False


def test_verify_conditions_report_shape():
    rep = verify_conditions(NL)
    d = rep.to_json_dict()
    assert set(d) == {"superlinear_pos", "superlinear_neg", "ratio_condition",
                      "shape_ok", "samples", "verdict"}
    assert d["verdict"] == (d["superlinear_pos"] and d["superlinear_neg"]
                            and d["ratio_condition"] and d["shape_ok"])


def test_probe_expression_matches_power_law():
    # for the default family the asymmetry probe is exactly x^(1/20)
    xs = np.logspace(3, 9, 7)
    expr = np.abs(np.sqrt(envelope_R(xs, NL) / xs) * inverse_plus(xs, NL) / inverse_minus(xs, NL))
    assert np.allclose(expr, xs ** 0.05, rtol=1e-12)


def test_constructor_validation():
    with pytest.raises(ValueError):
        Nonlinearity(p=0.5)
    with pytest.raises(ValueError):
        Nonlinearity(A=-1.0)
    with pytest.raises(ValueError):
        Nonlinearity(kind="cubic")
