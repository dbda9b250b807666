"""Command-line front end: config-driven runs emitting JSON/CSV and figures.

Commands
    check-nonlinearity   structural hypothesis verdict for g
    solve                all shooting solutions at problem.lambda
    classify             solutions plus level-crossing classification
    verify-bounds        solutions, classification, and inequality checks
    sweep                branch tracking over [lambda_lo, lambda_hi]

Exit status: 0 on success, 1 when --strict is set and a check failed,
2 on configuration or computation errors, so CI can tell "ran, bound
failed" from "crashed".
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .classification import classify
from .config import ConfigError, RunConfig, load_config, parse_config
from .continuation import detect_transitions, sweep_lambda
from .estimates import evaluate_bounds
from .nonlinearity import BranchDomainError, verify_conditions
from .radial_ivp import StepFailureError, residual_norm
from .reports import (
    branches_to_csv,
    classification_to_csv,
    dumps_json,
    profile_to_csv,
    write_json,
    write_text,
)
from .shooting import solve_all

COMMANDS = ("check-nonlinearity", "solve", "classify", "verify-bounds", "sweep")


def _write_manifest(outdir: Path, command: str, config: RunConfig) -> None:
    write_json(outdir / "manifest.json", {
        "tool": "nonpositone",
        "version": __version__,
        "command": command,
        "config": config.to_json_dict(),
    })


def _emit(outdir: Path, name: str, payload, config: RunConfig) -> None:
    if "json" in config["output"]["formats"]:
        write_json(outdir / f"{name}.json", payload)


def _solve(config: RunConfig):
    problem = config.radial_problem()
    sv = config["solver"]
    return problem, solve_all(
        problem,
        sv["scan_lo"],
        sv["scan_hi"],
        sv["n_scan"],
        config=config.integrator_config(),
        boundary_tol=sv["boundary_tol"],
        merge_tol=sv["merge_tol"],
        refine_max_step=sv["refine_max_step"],
    )


def _solution_artifacts(outdir: Path, config: RunConfig, problem, sol_set) -> None:
    sv = config["solver"]
    payload = sol_set.to_json_dict()
    payload["problem"] = problem.to_json_dict()
    payload["solutions"] = [
        {**entry, "residual_norm": residual_norm(prof)}
        for entry, prof in zip(payload["solutions"], sol_set.solutions)
    ]
    _emit(outdir, "solution_set", payload, config)
    if "csv" in config["output"]["formats"]:
        for i, prof in enumerate(sol_set.solutions):
            write_text(outdir / f"solution_lam{problem.lam:g}_{i:03d}.csv",
                       profile_to_csv(prof))
    if config["output"]["plots"]:
        from . import plots

        plots.plot_scan(sol_set.outcomes, outdir / "scan.png", sv["boundary_tol"])
        plots.plot_profiles(sol_set.solutions, outdir / "profiles.png")


def run_command(command: str, config: RunConfig, out_override: str = None,
                strict: bool = False) -> int:
    """Execute one CLI command; returns the exit status."""
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}")
    outdir = Path(out_override or config["output"]["directory"])
    outdir.mkdir(parents=True, exist_ok=True)
    _write_manifest(outdir, command, config)
    failed = False

    if command == "check-nonlinearity":
        report = verify_conditions(config.nonlinearity())
        _emit(outdir, "condition_report", report.to_json_dict(), config)
        if config["output"]["plots"]:
            from . import plots

            plots.plot_condition_probes(report, outdir / "condition_probes.png")
        print(f"verdict: {report.verdict}")
        failed = not report.verdict

    elif command == "solve":
        problem, sol_set = _solve(config)
        _solution_artifacts(outdir, config, problem, sol_set)
        print(f"{len(sol_set.solutions)} solution(s) at lambda={problem.lam:g}")
        for prof, miss in zip(sol_set.solutions, sol_set.misses):
            print(f"  s = {prof.s0:.12g}   |u(1)| = {miss:.3g}")
        failed = any(m > config["solver"]["boundary_tol"] for m in sol_set.misses)

    elif command == "classify":
        problem, sol_set = _solve(config)
        _solution_artifacts(outdir, config, problem, sol_set)
        reports = [classify(p, grid_points=config["solver"]["classify_grid"])
                   for p in sol_set.solutions]
        for i, (prof, rep) in enumerate(zip(sol_set.solutions, reports)):
            _emit(outdir, f"classification_{i:03d}", rep.to_json_dict(), config)
            print(f"  s = {prof.s0:.12g}   class {rep.class_label}  (k = {rep.k})")
        if "csv" in config["output"]["formats"]:
            write_text(outdir / "classification.csv", classification_to_csv(reports))
        if config["output"]["plots"] and reports:
            from . import plots

            for i, (prof, rep) in enumerate(zip(sol_set.solutions, reports)):
                plots.plot_classification(prof, rep, outdir / f"classification_{i:03d}.png")
        failed = any(r.class_label == "degenerate" for r in reports)

    elif command == "verify-bounds":
        problem, sol_set = _solve(config)
        _solution_artifacts(outdir, config, problem, sol_set)
        sv = config["solver"]
        reports = []
        tables = []
        for i, prof in enumerate(sol_set.solutions):
            rep = classify(prof, grid_points=sv["classify_grid"])
            bounds = evaluate_bounds(
                prof, rep,
                B=sv["lemma2_B"],
                delta=sv["lemma2_delta"],
                aux_params=(sv["eq6_m1"], sv["eq6_m2"], sv["eq9_a"], sv["eq9_b"]),
                lambda_min=sv["lambda_min"],
            )
            reports.append(bounds)
            _emit(outdir, f"bounds_report_{i:03d}", bounds.to_json_dict(), config)
            tables.append(f"solution {i}: s = {prof.s0:.12g}\n" + bounds.to_table())
            if not bounds.all_pass:
                failed = True
        write_text(outdir / "bounds_table.txt", "\n\n".join(tables) if tables else "no solutions")
        print("\n\n".join(tables) if tables else "no solutions found")
        if config["output"]["plots"] and reports:
            from . import plots

            plots.plot_margins(reports, outdir / "margins.png")

    elif command == "sweep":
        pb = config["problem"]
        sv = config["solver"]
        problem = config.radial_problem(pb["lambda_lo"])
        branches = sweep_lambda(
            problem,
            pb["lambda_lo"],
            pb["lambda_hi"],
            pb["steps"],
            n_scan_coarse=sv["sweep_n_scan"],
            config=config.integrator_config(),
            boundary_tol=sv["boundary_tol"],
            classify_grid=sv["classify_grid"],
        )
        transitions = detect_transitions(branches)
        _emit(outdir, "sweep", {
            "branches": [br.to_json_dict() for br in branches],
            "transitions": [ev.to_json_dict() for ev in transitions],
        }, config)
        if "csv" in config["output"]["formats"]:
            write_text(outdir / "branches.csv", branches_to_csv(branches))
        if config["output"]["plots"]:
            from . import plots

            plots.plot_bifurcation(branches, outdir / "bifurcation.png")
        n_class = sum(1 for ev in transitions if ev.kind == "class-change")
        print(f"{len(branches)} branch(es); {len(transitions)} transition event(s), "
              f"{n_class} class change(s)")
        for ev in transitions:
            print(f"  [{ev.lam_lo:g}, {ev.lam_hi:g}] {ev.kind}: {ev.description}")
        failed = n_class > 0

    return 1 if (strict and failed) else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nonpositone",
        description="Shooting solver and inequality verifier for radial "
                    "superlinear nonpositone problems",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=Path, default=None,
                        help="TOML configuration file (defaults apply when omitted)")
    parser.add_argument("--out", type=Path, default=None,
                        help="output directory (overrides output.directory)")
    parser.add_argument("--strict", action="store_true",
                        help="exit 1 when any check fails")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config) if args.config else parse_config("")
        return run_command(args.command, config,
                           out_override=str(args.out) if args.out else None,
                           strict=args.strict)
    except (ConfigError, BranchDomainError, StepFailureError, ValueError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
