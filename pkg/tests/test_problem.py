"""Source terms, the C1 norm, and problem construction."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonpositone import Nonlinearity, RadialProblem, SourceTerm, c1_norm


def test_c1_norm_zero():
    assert c1_norm(SourceTerm("zero")) == 0.0


def test_c1_norm_quadratic():
    f = SourceTerm("polynomial", (0.0, 0.0, 1.0))  # t^2
    assert c1_norm(f) == pytest.approx(3.0, rel=1e-9)


def test_c1_norm_cosine():
    f = SourceTerm("cosine", (0.0, 0.5))  # 0.5 cos(pi t)
    assert c1_norm(f) == pytest.approx(0.5 + 0.5 * math.pi, rel=1e-9)


@given(st.floats(min_value=-100.0, max_value=100.0).filter(lambda c: c != 0.0))
def test_c1_norm_absolutely_homogeneous(c):
    base = (0.3, -1.2, 0.7)
    f1 = SourceTerm("cosine", base)
    fc = SourceTerm("cosine", tuple(c * b for b in base))
    n1, nc = c1_norm(f1), c1_norm(fc)
    assert nc == pytest.approx(abs(c) * n1, rel=1e-9)


def test_c1_norm_dominates_dense_samples():
    f = SourceTerm("cosine", (0.2, -0.7, 0.4))
    ts = np.linspace(0.0, 1.0, 10_001)
    assert c1_norm(f) >= np.max(np.abs(f(ts))) - 1e-12


def test_source_eval_and_deriv():
    f = SourceTerm("polynomial", (1.0, 2.0, 3.0))  # 1 + 2t + 3t^2
    assert f(0.5) == pytest.approx(1.0 + 1.0 + 0.75)
    assert f.deriv(0.5) == pytest.approx(2.0 + 3.0)
    g = SourceTerm("cosine", (0.0, 0.5))
    assert g(0.0) == pytest.approx(0.5)
    assert g(1.0) == pytest.approx(-0.5)
    assert g.deriv(0.5) == pytest.approx(-0.5 * math.pi)
    assert g.deriv(0.0) == pytest.approx(0.0)


def test_source_vectorized():
    f = SourceTerm("cosine", (0.1, 0.5, -0.2))
    ts = np.linspace(0, 1, 17)
    assert np.allclose(f(ts), [f(float(t)) for t in ts])
    assert np.allclose(f.deriv(ts), [f.deriv(float(t)) for t in ts])


def test_source_validation():
    with pytest.raises(ValueError):
        SourceTerm("noise")
    with pytest.raises(ValueError):
        SourceTerm("zero", (1.0,))
    with pytest.raises(ValueError):
        SourceTerm("polynomial", (float("inf"),))


def test_problem_caches_c1_norm():
    nl = Nonlinearity()
    pr = RadialProblem(n=1, lam=100.0, f=SourceTerm("cosine", (0.0, 0.5)), nl=nl)
    assert pr.M == pytest.approx(0.5 + 0.5 * math.pi, rel=1e-9)
    pr0 = RadialProblem(n=3, lam=6.0, f=SourceTerm("zero"), nl=nl)
    assert pr0.M == 0.0


def test_problem_validation():
    nl = Nonlinearity()
    with pytest.raises(ValueError):
        RadialProblem(n=0, lam=1.0, f=SourceTerm("zero"), nl=nl)
    with pytest.raises(ValueError):
        RadialProblem(n=1, lam=-1.0, f=SourceTerm("zero"), nl=nl)


def test_with_lambda_preserves_norm():
    nl = Nonlinearity()
    pr = RadialProblem(n=1, lam=50.0, f=SourceTerm("cosine", (0.0, 0.5)), nl=nl)
    pr2 = pr.with_lambda(200.0)
    assert pr2.lam == 200.0
    assert pr2.M == pr.M
    assert pr2.f is pr.f
