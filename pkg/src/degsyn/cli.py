"""Command-line front end.

Subcommands: synth, verify, simulate, example-f16, dump-lmi.  Exit codes
are part of the contract so CI harnesses can assert outcomes:

    0  success (synth: optimal and validated; verify: all checks pass)
    1  input error (unreadable files, bad flags, malformed model)
    2  synthesis problem infeasible
    3  solver numerical failure (or optimal result failing validation)
    4  verification found a failed check
    5  simulation diverged

DEGSYN_SOLVER_TOL overrides the residual tolerance used by solve/validate.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .degradation import DegradationParams, degradation_report
from .errors import DegsynError, DivergenceError, InvalidInputError
from .f16 import f16_model_dict
from .lti import assemble_closed_loop
from .modelio import (
    ModelFile,
    load_model,
    load_report,
    report_from_result,
    report_to_result,
    save_model,
    save_report,
)
from .sim import DisturbanceSpec, generate_disturbance, response_metrics, simulate, trajectory_to_csv
from .synthesis import SynthesisSpec, build_lmi, solve, validate

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY_FAILED = 4
EXIT_DIVERGED = 5


def _err(msg: str) -> None:
    print(f"degsyn: {msg}", file=sys.stderr)


def _solver_tol_default() -> float:
    raw = os.environ.get("DEGSYN_SOLVER_TOL")
    if raw is None:
        return 1e-7
    try:
        tol = float(raw)
    except ValueError as exc:
        raise InvalidInputError(f"DEGSYN_SOLVER_TOL={raw!r} is not a number") from exc
    if tol <= 0:
        raise InvalidInputError("DEGSYN_SOLVER_TOL must be positive")
    return tol


def _spec_from_args(args, model: ModelFile) -> SynthesisSpec:
    return SynthesisSpec(
        norm_kind=args.norm,
        gamma=args.gamma,
        lambda_a=args.lambda_a,
        lambda_wc=args.lambda_wc,
        lambda_xf=args.lambda_xf,
        Wd=model.wd,
        solver_tol=args.solver_tol,
        h2_bound_convention=args.h2_bound_convention,
        solver=args.solver,
    )


def _add_synth_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--norm", choices=("h2", "hinf"), required=True)
    p.add_argument("--gamma", type=float, required=True, help="closed-loop performance bound")
    p.add_argument("--lambda-a", type=float, default=1.0, dest="lambda_a")
    p.add_argument("--lambda-wc", type=float, default=1.0, dest="lambda_wc")
    p.add_argument("--lambda-xf", type=float, default=1.0, dest="lambda_xf")
    p.add_argument(
        "--h2-bound-convention", choices=("trace", "norm"), default="trace",
        help="trace: tr(Q1) <= gamma bounds the squared H2 norm (literal); "
        "norm: tr(Q1) <= gamma^2 bounds the norm itself",
    )
    p.add_argument("--solver", default="CLARABEL")
    p.add_argument("--solver-tol", type=float, default=None, dest="solver_tol")
    p.add_argument("--no-wz", action="store_true", help="do not fold the model's wz weights into Cz")


def cmd_synth(args) -> int:
    model = load_model(args.model)
    sys_ = model.state_space(apply_wz=not args.no_wz)
    spec = _spec_from_args(args, model)
    t0 = time.perf_counter()
    problem = build_lmi(sys_, spec)
    result = solve(problem, spec)
    if result.status == "infeasible":
        _err(f"problem infeasible: {result.diagnostics.get('certificate', 'solver certificate')}")
        return EXIT_INFEASIBLE
    if result.status != "optimal":
        _err(f"solver failed: {json.dumps(result.diagnostics.get('attempts', []), default=str)}")
        return EXIT_NUMERICAL
    report = validate(result, sys_, spec)
    deg_rep = degradation_report(
        result.deg, result.V, result.objective, actuator_labels=model.actuator_labels()
    )
    run = report_from_result(
        spec, result, deg_rep, report.to_dict(), timing_s=time.perf_counter() - t0
    )
    out = Path(args.out) if args.out else Path(f"{Path(args.model).stem}-{args.norm}-report.json")
    save_report(run, out)
    print(f"status: optimal  objective: {result.objective:.6g}")
    print(f"verified {result.verification.kind} norm: {result.verification.value:.6g} "
          f"(gamma = {spec.gamma:g})")
    for row in deg_rep.rows:
        print(
            f"  {row.actuator:<12} omega_c = {row.omega_c:12.6g} rad/s   "
            f"|x->xF| = {row.xf_gain:10.6g}   noise 1/sqrt(kappa) = {row.noise_scale:10.6g}"
        )
    print(f"report written to {out}")
    if not report.passed:
        _err("validation failed:\n" + report.format_table())
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_example_f16(args) -> int:
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "f16.json"
        save_model(f16_model_dict(), path)
    except OSError as exc:
        _err(f"cannot write example model: {exc}")
        return EXIT_INPUT
    print(f"wrote {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    model = load_model(args.model)
    run = load_report(args.report)
    if run.K is None or run.deg is None:
        _err("report does not contain a gain and degradation parameters")
        return EXIT_INPUT
    sys_ = model.state_space()
    result = dataclasses.replace(report_to_result(run), status="optimal")
    report = validate(result, sys_, run.spec)
    print(report.format_table())
    if not report.passed:
        return EXIT_VERIFY_FAILED
    print("all checks passed")
    return EXIT_OK


def cmd_simulate(args) -> int:
    model = load_model(args.model)
    sys_ = model.state_space()
    if args.open_loop:
        K = np.zeros((sys_.nu, sys_.nx))
        deg = DegradationParams(
            omega_c=np.ones(sys_.nu), kappa_a=np.ones(sys_.nu), gamma_xf=0.0
        )
        noise_scale = np.zeros(sys_.nu)
    else:
        if args.report is None:
            _err("either a report or --open-loop is required")
            return EXIT_INPUT
        run = load_report(args.report)
        if run.K is None or run.deg is None:
            _err("report does not contain a gain and degradation parameters")
            return EXIT_INPUT
        K = run.K
        deg = run.deg
        noise_scale = deg.noise_scaling
    loop = assemble_closed_loop(sys_, K, deg, model.wd)

    dspec = DisturbanceSpec(
        white_noise_gain=args.white_noise_gain,
        sinusoid_amplitude=args.sin_amplitude,
        sinusoid_freq=args.sin_freq,
        seed=args.seed,
        sample_rate=1.0 / args.dt,
    )
    times, d_phys = generate_disturbance(dspec, args.duration)
    n = times.shape[0]
    rng = np.random.default_rng((args.seed, 1))  # independent stream for actuator noise
    wa_bar = rng.standard_normal((n, sys_.nu)) if not args.open_loop else np.zeros((n, sys_.nu))

    # Bcl carries Bd Wd and Bu Wa, so feed the normalized inputs:
    # dbar = Wd^-1 d reproduces the physical disturbance d.
    d_phys = np.tile(d_phys[:, None], (1, sys_.nd))
    d_bar = d_phys / np.diag(loop.Wd)[None, :]
    try:
        traj = simulate(loop.Acl, loop.Bcl, loop.Ccl, d_bar, wa_bar, dt=args.dt)
    except DivergenceError as exc:
        _err(str(exc))
        return EXIT_DIVERGED
    # store physical inputs in the CSV
    traj = type(traj)(
        times=traj.times,
        states=traj.states,
        outputs=traj.outputs,
        d=d_phys,
        wa=wa_bar * noise_scale[None, :],
    )
    out = Path(args.out) if args.out else Path("trajectory.csv")
    trajectory_to_csv(traj, out, nx=sys_.nx)
    metrics = response_metrics(traj)
    metrics_path = out.with_suffix(".metrics.json")
    with open(metrics_path, "w") as fh:
        json.dump(metrics.to_dict(), fh, indent=2)
        fh.write("\n")
    print(f"wrote {out} ({n} rows) and {metrics_path}")
    print(f"z RMS per channel: {[f'{v:.6g}' for v in metrics.rms]}  total: {metrics.rms_total:.6g}")
    return EXIT_OK


def cmd_dump_lmi(args) -> int:
    model = load_model(args.model)
    sys_ = model.state_space(apply_wz=not args.no_wz)
    spec = _spec_from_args(args, model)
    problem = build_lmi(sys_, spec)
    text = problem.dump()
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="degsyn",
        description="State-feedback synthesis with maximum-actuator-degradation quantification",
    )
    parser.add_argument("--version", action="version", version=f"degsyn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a gain and degradation bounds")
    p.add_argument("model", help="model JSON file")
    _add_synth_flags(p)
    p.add_argument("--out", help="report JSON output path")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("example-f16", help="write the bundled F-16 longitudinal model")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_example_f16)

    p = sub.add_parser("verify", help="re-check a report against its model from scratch")
    p.add_argument("model")
    p.add_argument("report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="simulate the gust response of a synthesized loop")
    p.add_argument("model")
    p.add_argument("report", nargs="?", default=None)
    p.add_argument("--open-loop", action="store_true", help="simulate with K = 0 and no actuator noise")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--duration", type=float, default=600.0, help="seconds")
    p.add_argument("--dt", type=float, default=0.01, help="seconds")
    p.add_argument("--white-noise-gain", type=float, default=15.0, dest="white_noise_gain")
    p.add_argument("--sin-amplitude", type=float, default=1.0, dest="sin_amplitude")
    p.add_argument("--sin-freq", type=float, default=0.075, dest="sin_freq", help="rad/s")
    p.add_argument("--out", help="trajectory CSV output path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("dump-lmi", help="print the synthesis program in plain text")
    p.add_argument("model")
    _add_synth_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dump_lmi)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "solver_tol", None) is None and hasattr(args, "solver_tol"):
        try:
            args.solver_tol = _solver_tol_default()
        except InvalidInputError as exc:
            _err(str(exc))
            return EXIT_INPUT
    try:
        return args.func(args)
    except DivergenceError as exc:
        _err(str(exc))
        return EXIT_DIVERGED
    except DegsynError as exc:
        _err(str(exc))
        return EXIT_INPUT


def main_entry() -> None:  # console-script wrapper
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
