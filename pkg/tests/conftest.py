"""Shared fixtures: expensive solve/sweep runs are session-scoped so the
module tests and the acceptance suite reuse the same computed solutions."""

import pytest

from nonpositone import (
    Nonlinearity,
    RadialProblem,
    SourceTerm,
    solve_all,
    sweep_lambda,
)


@pytest.fixture(scope="session")
def power_nl():
    return Nonlinearity()


@pytest.fixture(scope="session")
def zero_nl():
    return Nonlinearity(kind="zero")


@pytest.fixture(scope="session")
def cosine_source():
    return SourceTerm("cosine", (0.0, 0.5))


def _problem(lam, src, nl):
    return RadialProblem(n=1, lam=lam, f=src, nl=nl)


@pytest.fixture(scope="session")
def solutions_f0(power_nl):
    """solve_all at lambda in {50, 100, 200, 400}, zero source, n_scan=2000."""
    out = {}
    for lam in (50.0, 100.0, 200.0, 400.0):
        pr = _problem(lam, SourceTerm("zero"), power_nl)
        out[lam] = (pr, solve_all(pr, n_scan=2000))
    return out


@pytest.fixture(scope="session")
def solutions_cos(power_nl, cosine_source):
    """Same lambda grid with the cosine source."""
    out = {}
    for lam in (50.0, 100.0, 200.0, 400.0):
        pr = _problem(lam, cosine_source, power_nl)
        out[lam] = (pr, solve_all(pr, n_scan=2000))
    return out


@pytest.fixture(scope="session")
def solutions_600(power_nl):
    """lambda = 600: the sign-changing class exists here (born near 435)."""
    pr = _problem(600.0, SourceTerm("zero"), power_nl)
    return pr, solve_all(pr, n_scan=2000)


@pytest.fixture(scope="session")
def sweep_branches(power_nl):
    """The acceptance sweep: lambda in [50, 400], 16 geometric steps."""
    pr = _problem(50.0, SourceTerm("zero"), power_nl)
    return sweep_lambda(pr, 50.0, 400.0, 16)
