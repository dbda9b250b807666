"""Radial problem instances: source term, dimension, parameter, C1 norm."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .nonlinearity import Nonlinearity

__all__ = ["SourceTerm", "RadialProblem", "c1_norm"]


@dataclass(frozen=True)
class SourceTerm:
    """Closed-form source term f on [0, 1] with closed-form derivative.

    Families:
      zero        f = 0
      polynomial  f(t) = sum_j c_j * t**j
      cosine      f(t) = sum_j c_j * cos(j*pi*t)

    Closed-form derivatives keep numerical differentiation error out of the
    bound checks downstream.
    """

    kind: str = "zero"
    coefficients: tuple = ()

    def __post_init__(self):
        if self.kind not in ("zero", "polynomial", "cosine"):
            raise ValueError(f"unknown source kind {self.kind!r}")
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if self.kind == "zero" and self.coefficients:
            raise ValueError("zero source takes no coefficients")
        for c in self.coefficients:
            if not math.isfinite(c):
                raise ValueError("source coefficients must be finite")

    def __call__(self, t):
        if self.kind == "zero" or not self.coefficients:
            return np.zeros_like(t, dtype=float) if isinstance(t, np.ndarray) else 0.0
        c = self.coefficients
        if self.kind == "polynomial":
            acc = np.zeros_like(t, dtype=float) if isinstance(t, np.ndarray) else 0.0
            for cj in reversed(c):
                acc = acc * t + cj
            return acc
        acc = np.zeros_like(t, dtype=float) if isinstance(t, np.ndarray) else 0.0
        for j, cj in enumerate(c):
            if cj != 0.0:
                acc = acc + cj * np.cos(j * math.pi * t)
        return acc

    def deriv(self, t):
        if self.kind == "zero" or not self.coefficients:
            return np.zeros_like(t, dtype=float) if isinstance(t, np.ndarray) else 0.0
        c = self.coefficients
        if self.kind == "polynomial":
            acc = np.zeros_like(t, dtype=float) if isinstance(t, np.ndarray) else 0.0
            for j in range(len(c) - 1, 0, -1):
                acc = acc * t + j * c[j]
            return acc
        acc = np.zeros_like(t, dtype=float) if isinstance(t, np.ndarray) else 0.0
        for j, cj in enumerate(c):
            if cj != 0.0 and j != 0:
                acc = acc - cj * j * math.pi * np.sin(j * math.pi * t)
        return acc

    def is_zero(self) -> bool:
        return self.kind == "zero" or all(c == 0.0 for c in self.coefficients)

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "coefficients": list(self.coefficients)}


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fun, a: float, b: float, iters: int = 80) -> float:
    """Comparison-only maximizer of fun on [a, b]; scale-invariant by design."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fun(x1), fun(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fun(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fun(x1)
        if b - a <= 1e-14:
            break
    return max(f1, f2)


def _sup_abs(fun, grid_points: int = 2048) -> float:
    """sup |fun| on [0, 1]: dense grid plus golden-section refinement of
    every interior local maximum of |fun|."""
    ts = np.linspace(0.0, 1.0, grid_points + 1)
    vals = np.abs(np.asarray(fun(ts), dtype=float))
    best = float(np.max(vals))
    interior = np.nonzero(
        (vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])
    )[0] + 1
    absfun = lambda t: abs(float(fun(t)))
    for i in interior:
        best = max(best, _golden_max(absfun, ts[i - 1], ts[i + 1]))
    return best


def c1_norm(f: SourceTerm) -> float:
    """sup|f| + sup|f'| on [0, 1].

    Sampled on a 2048-interval grid with golden-section refinement at
    interior extrema; exact to ~1e-12 relative for the built-in families
    and absolutely homogeneous in the coefficients.
    """
    if f.is_zero():
        return 0.0
    return _sup_abs(f) + _sup_abs(f.deriv)


@dataclass(frozen=True)
class RadialProblem:
    """One problem instance: dimension n, parameter lambda, source f, and g.

    M caches the C1 norm of f; it is computed on construction and is 0
    exactly when f is identically zero.
    """

    n: int
    lam: float
    f: SourceTerm
    nl: Nonlinearity
    M: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be an integer >= 1")
        object.__setattr__(self, "n", int(self.n))
        if not self.lam > 0.0:
            raise ValueError("lambda must be positive")
        if self.M is None:
            object.__setattr__(self, "M", c1_norm(self.f))

    def with_lambda(self, lam: float) -> "RadialProblem":
        return dataclasses.replace(self, lam=float(lam), M=self.M)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "lambda": self.lam,
            "source": self.f.to_json_dict(),
            "nonlinearity": self.nl.to_json_dict(),
            "M": self.M,
        }
