"""Run configuration: TOML parsing, validation, defaults.

The configuration document is TOML with flat sections (scalar and list
values only).  Unknown keys are rejected with their full path; validation
failures name the violated precondition.  Every run echoes the fully
defaulted configuration into its manifest, so a config file never needs to
spell out more than the values it overrides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from .estimates import DEFAULT_B
from .nonlinearity import Nonlinearity
from .problem import RadialProblem, SourceTerm
from .radial_ivp import IntegratorConfig

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_config"]


class ConfigError(ValueError):
    """Configuration document failed to parse or validate."""


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


# section -> key -> (kind, default); kind in {float, int, str, bool,
# float_list, opt_float}.  None defaults mean "derived downstream".
_SCHEMA = {
    "nonlinearity": {
        "kind": ("str", "piecewise-power"),
        "p": ("float", 2.0),
        "q": ("float", 5.0),
        "A": ("float", 1.0),
    },
    "source": {
        "kind": ("str", "zero"),
        "coefficients": ("float_list", []),
    },
    "problem": {
        "n": ("int", 1),
        "lambda": ("float", 100.0),
        "lambda_lo": ("float", 50.0),
        "lambda_hi": ("float", 400.0),
        "steps": ("int", 16),
    },
    "solver": {
        "atol": ("float", 1e-10),
        "rtol": ("float", 1e-10),
        "max_step": ("float", 1.0 / 256.0),
        "refine_max_step": ("float", 1.0 / 1024.0),
        "t_start": ("float", 1e-6),
        "guard": ("float", 1e12),
        "n_scan": ("int", 2000),
        "scan_lo": ("opt_float", None),
        "scan_hi": ("opt_float", None),
        "boundary_tol": ("float", 1e-9),
        "merge_tol": ("float", 1e-8),
        "lambda_min": ("float", 50.0),
        "lemma2_B": ("float", DEFAULT_B),
        "lemma2_delta": ("opt_float", None),
        "eq6_m1": ("float", 0.0),
        "eq6_m2": ("float", 1.0),
        "eq9_a": ("float", 1.0),
        "eq9_b": ("float", 4.0),
        "sweep_n_scan": ("int", 600),
        "classify_grid": ("int", 4096),
    },
    "output": {
        "directory": ("str", "out"),
        "formats": ("str_list", ["json", "csv"]),
        "plots": ("bool", True),
    },
}


def _coerce(path: str, kind: str, value):
    if kind == "float":
        if not _is_number(value):
            raise ConfigError(f"{path} must be a number")
        return float(value)
    if kind == "opt_float":
        if value is None:
            return None
        if not _is_number(value):
            raise ConfigError(f"{path} must be a number")
        return float(value)
    if kind == "int":
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"{path} must be an integer")
        return int(value)
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{path} must be a string")
        return value
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"{path} must be a boolean")
        return value
    if kind == "float_list":
        if not isinstance(value, list) or not all(_is_number(v) for v in value):
            raise ConfigError(f"{path} must be a list of numbers")
        return [float(v) for v in value]
    if kind == "str_list":
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise ConfigError(f"{path} must be a list of strings")
        return list(value)
    raise AssertionError(kind)


@dataclass
class RunConfig:
    """Validated, fully defaulted configuration for one CLI run."""

    values: dict = field(default_factory=dict)

    def __getitem__(self, section: str) -> dict:
        return self.values[section]

    # -- constructors for the module objects ------------------------------

    def nonlinearity(self) -> Nonlinearity:
        b = self.values["nonlinearity"]
        return Nonlinearity(kind=b["kind"], p=b["p"], q=b["q"], A=b["A"])

    def source(self) -> SourceTerm:
        b = self.values["source"]
        return SourceTerm(kind=b["kind"], coefficients=tuple(b["coefficients"]))

    def radial_problem(self, lam: float = None) -> RadialProblem:
        b = self.values["problem"]
        return RadialProblem(
            n=b["n"],
            lam=b["lambda"] if lam is None else float(lam),
            f=self.source(),
            nl=self.nonlinearity(),
        )

    def integrator_config(self) -> IntegratorConfig:
        s = self.values["solver"]
        return IntegratorConfig(
            atol=s["atol"],
            rtol=s["rtol"],
            max_step=s["max_step"],
            t_start=s["t_start"],
            guard=s["guard"],
        )

    def to_json_dict(self) -> dict:
        return {sec: dict(block) for sec, block in self.values.items()}


def _validate(values: dict) -> None:
    nl = values["nonlinearity"]
    if nl["kind"] not in ("piecewise-power", "zero"):
        raise ConfigError("nonlinearity.kind must be 'piecewise-power' or 'zero'")
    if nl["kind"] == "piecewise-power":
        if not nl["p"] > 1.0:
            raise ConfigError("nonlinearity.p: p must exceed 1")
        if not nl["q"] > 1.0:
            raise ConfigError("nonlinearity.q: q must exceed 1")
        if not nl["A"] > 0.0:
            raise ConfigError("nonlinearity.A: A must be positive")

    src = values["source"]
    if src["kind"] not in ("zero", "polynomial", "cosine"):
        raise ConfigError("source.kind must be 'zero', 'polynomial' or 'cosine'")
    if src["kind"] == "zero" and src["coefficients"]:
        raise ConfigError("source.coefficients must be empty for the zero source")
    if any(not math.isfinite(c) for c in src["coefficients"]):
        raise ConfigError("source.coefficients must be finite")

    pb = values["problem"]
    if pb["n"] < 1:
        raise ConfigError("problem.n: n must be an integer >= 1")
    if not pb["lambda"] > 0.0:
        raise ConfigError("problem.lambda: lambda must be positive")
    if not 0.0 < pb["lambda_lo"] <= pb["lambda_hi"]:
        raise ConfigError("problem.lambda_lo/lambda_hi must satisfy 0 < lo <= hi")
    if pb["steps"] < 2:
        raise ConfigError("problem.steps must be at least 2")

    sv = values["solver"]
    if sv["atol"] <= 0.0 or sv["rtol"] <= 0.0:
        raise ConfigError("solver.atol/rtol must be positive")
    if not 0.0 < sv["max_step"] <= 1.0:
        raise ConfigError("solver.max_step must lie in (0, 1]")
    if not 0.0 < sv["t_start"] < 0.5:
        raise ConfigError("solver.t_start must lie in (0, 0.5)")
    if sv["n_scan"] < 100:
        raise ConfigError("solver.n_scan must be at least 100")
    if sv["sweep_n_scan"] < 100:
        raise ConfigError("solver.sweep_n_scan must be at least 100")
    if (sv["scan_lo"] is None) != (sv["scan_hi"] is None):
        raise ConfigError("solver.scan_lo and scan_hi must be given together")
    if sv["scan_lo"] is not None and not sv["scan_lo"] < sv["scan_hi"]:
        raise ConfigError("solver.scan_lo must be below scan_hi")
    if not sv["eq6_m1"] < sv["eq6_m2"]:
        raise ConfigError("solver.eq6_m1 must be below eq6_m2")
    if not 0.0 < sv["eq9_a"] < sv["eq9_b"]:
        raise ConfigError("solver.eq9_a/eq9_b must satisfy 0 < a < b")
    if sv["boundary_tol"] <= 0.0:
        raise ConfigError("solver.boundary_tol must be positive")
    if sv["classify_grid"] < 256:
        raise ConfigError("solver.classify_grid must be at least 256")

    out = values["output"]
    for fmt in out["formats"]:
        if fmt not in ("json", "csv"):
            raise ConfigError(f"output.formats: unknown format {fmt!r}")


def parse_config(text: str) -> RunConfig:
    """Parse and validate a TOML configuration document.

    Raises ConfigError with line diagnostics on malformed TOML, the full
    key path on unknown keys, and the violated precondition on bad values.
    """
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"TOML parse error: {e}") from e

    values = {sec: {k: spec[1] for k, spec in block.items()}
              for sec, block in _SCHEMA.items()}
    for sec, block in raw.items():
        if sec not in _SCHEMA:
            raise ConfigError(f"unknown section '{sec}'")
        if not isinstance(block, dict):
            raise ConfigError(f"section '{sec}' must be a table")
        for key, value in block.items():
            if key not in _SCHEMA[sec]:
                raise ConfigError(f"unknown key '{sec}.{key}'")
            kind = _SCHEMA[sec][key][0]
            values[sec][key] = _coerce(f"{sec}.{key}", kind, value)

    _validate(values)
    return RunConfig(values=values)


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
