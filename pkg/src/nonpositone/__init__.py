"""Shooting solver and inequality verifier for radial solutions of
superlinear nonpositone problems on the unit ball."""

from .nonlinearity import (
    BranchDomainError,
    ConditionReport,
    Nonlinearity,
    envelope_R,
    eval_g,
    eval_g_prime,
    inverse_envelope_derivative,
    inverse_minus,
    inverse_plus,
    verify_conditions,
)
from .problem import RadialProblem, SourceTerm, c1_norm
from .radial_ivp import (
    BlowUpError,
    IntegratorConfig,
    SolutionProfile,
    StepFailureError,
    integrate,
    residual_norm,
    rhs,
)

__version__ = "0.1.0"

from .classification import ClassificationReport, ZeroRecord, classify, critical_points, phi
from .config import ConfigError, RunConfig, load_config, parse_config
from .continuation import Branch, BranchPoint, TransitionEvent, detect_transitions, sweep_lambda
from .estimates import (
    DEFAULT_B,
    BoundEntry,
    BoundsReport,
    check_auxiliary_inequalities,
    check_extrema_bounds,
    check_sturm_gap,
    check_zero_derivative_bounds,
    evaluate_bounds,
)
from .shooting import (
    ShootingOutcome,
    SolutionSet,
    boundary_miss,
    default_scan_window,
    filter_admissible,
    solve_all,
)
